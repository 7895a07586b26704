// Copyright 2026 The d2t-edit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef D2T_TESTS_TEST_UTIL_H_
#define D2T_TESTS_TEST_UTIL_H_

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <algorithm>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "d2t/data.h"
#include "d2t/editing.h"
#include "d2t/fusion.h"
#include "d2t/scoring.h"

namespace d2t::testing {

// Scores each text with a caller-supplied log score.
class FunctionScorer : public Scorer {
 public:
  explicit FunctionScorer(std::function<double(const std::string &)> fn,
                          std::string name = "stub")
      : fn_(std::move(fn)), name_(std::move(name)) {}
  std::vector<double> LogScores(
      std::span<const std::string> texts) const override {
    std::vector<double> out;
    for (const std::string &t : texts) out.push_back(fn_(t));
    return out;
  }
  std::string name() const override { return name_; }

 private:
  std::function<double(const std::string &)> fn_;
  std::string name_;
};

// Prefers shorter texts; deterministic and text-dependent.
inline FunctionScorer ShortestScorer() {
  return FunctionScorer([](const std::string &t) {
    return -static_cast<double>(t.size()) / 100.0;
  });
}

// Adversarial backend: every hypothesis lacks one entity of the context.
class DropEntityFusion : public FusionModel {
 public:
  std::vector<Hypothesis> Fuse(std::string_view text, int beam_size,
                               const FusionContext &context) const override {
    std::vector<Hypothesis> out;
    for (const std::string &e : context.entities) {
      std::string t(text);
      size_t pos = t.find(e);
      if (pos == std::string::npos) continue;
      while (pos != std::string::npos) {
        t.erase(pos, e.size());
        pos = t.find(e);
      }
      if (t.empty()) t = "nothing";
      out.push_back({t, -static_cast<double>(out.size())});
      if (static_cast<int>(out.size()) == beam_size) break;
    }
    if (out.empty()) out.push_back({"nothing", 0.0});
    return out;
  }
  std::string name() const override { return "drop-entity"; }
};

// Adversarial backend: random word soup built from the input, sometimes
// dropping words, sometimes duplicating them, sometimes returning the input.
class NoiseFusion : public FusionModel {
 public:
  explicit NoiseFusion(unsigned seed) : seed_(seed) {}
  std::vector<Hypothesis> Fuse(std::string_view text, int beam_size,
                               const FusionContext &) const override {
    std::mt19937 rng(seed_ ^ static_cast<unsigned>(std::hash<std::string_view>{}(text)));
    std::vector<std::string> words = Words(text);
    std::vector<Hypothesis> out;
    int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(beam_size));
    for (int i = 0; i < n; ++i) {
      std::vector<std::string> w;
      for (const std::string &x : words) {
        unsigned r = rng() % 10;
        if (r == 0) continue;
        w.push_back(x);
        if (r == 1) w.push_back(x);
      }
      if (rng() % 4 == 0) std::shuffle(w.begin(), w.end(), rng);
      std::string t = w.empty() ? std::string("x") : Detokenize(w);
      if (rng() % 5 == 0) t = std::string(text);
      out.push_back({t, -static_cast<double>(i)});
    }
    return out;
  }
  std::string name() const override { return "noise"; }

 private:
  unsigned seed_;
};

class TempDir {
 public:
  TempDir() {
    std::string tmpl =
        (std::filesystem::temp_directory_path() / "d2t-test-XXXXXX").string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    path_ = ::mkdtemp(buf.data());
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  std::string operator/(const std::string &name) const {
    return (path_ / name).string();
  }
  const std::filesystem::path &path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void WriteText(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string ReadText(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Example MakeExample(std::string id, std::vector<Triple> triples,
                           std::vector<std::string> refs = {}) {
  return Example{std::move(id), std::move(triples), std::move(refs)};
}

inline bool RelativeClose(double a, double b, double tol) {
  double scale = std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= tol * (scale == 0.0 ? 1.0 : scale);
}

}  // namespace d2t::testing

#endif  // D2T_TESTS_TEST_UTIL_H_
