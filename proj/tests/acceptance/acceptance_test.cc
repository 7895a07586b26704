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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "d2t/checking.h"
#include "d2t/cli.h"
#include "d2t/decoder.h"
#include "d2t/editing.h"
#include "d2t/eval.h"
#include "d2t/fusion.h"
#include "d2t/miner.h"
#include "d2t/scoring.h"
#include "d2t/templates.h"
#include "json.hpp"
#include "oracles/mining_oracle.h"
#include "test_util.h"

namespace d2t {
namespace {

// Pinned tolerances.
constexpr double kLogSpaceRelTol = 1e-9;
constexpr double kRepetitionTol = 1e-12;
constexpr double kMetricTol = 1e-6;
constexpr double kDecoderTimeBudgetSeconds = 60.0;

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void Report(const std::string &name, const Outcome &o) {
  std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << ": " << o.detail
            << std::endl;
  if (!o.pass) ++failures;
}

template <typename Fn>
void Criterion(const std::string &name, Fn fn) {
  try {
    Report(name, fn());
  } catch (const std::exception &e) {
    Report(name, {false, std::string("exception: ") + e.what()});
  }
}

std::string SourcePath(const std::string &rel) {
  return std::string(D2T_SOURCE_DIR) + "/" + rel;
}

// ---------------------------------------------------------------------------

const std::vector<std::string> kNames{
    "Alan Bean", "Soho Press", "Albert Jennings Fountain", "Apollo 12",
    "New York City", "Staten Island", "Test pilot", "United States",
    "Barack Obama", "A Loyal Character Dancer", "Bakso", "Indonesia",
    "British Hong Kong", "William Anders", "Wheeler, Texas", "1932-03-15",
    "\"Bronze\"", "St. Louis", "Atatürk Monument (İzmir)", "NASA"};
const std::vector<std::string> kPredicates{
    "birthPlace", "deathPlace", "occupation", "country", "leaderName",
    "publisher", "crewMember", "material", "location", "unseenPredicate"};

TemplateStore WebNlgStore() {
  TemplateStore store;
  store.Add({{"birthPlace"}, "<subject> was born in <object>."});
  store.Add({{"birthPlace"}, "<object> is the birthplace of <subject>."});
  store.Add({{"deathPlace"}, "<subject> died in <object>."});
  store.Add({{"occupation"}, "<subject> worked as a <object>."});
  store.Add({{"occupation"}, "<subject> was a <object>."});
  store.Add({{"country"}, "<subject> is a dish found in <object>."});
  store.Add({{"country"}, "<subject> is situated within <object>."});
  store.Add({{"leaderName"}, "<object> is the leader of <subject>."});
  store.Add({{"publisher"}, "<object> is the publisher of <subject>."});
  store.Add({{"crewMember"}, "<object> was a crew member of <subject>."});
  store.Add({{"material"}, "<subject> is made of <object>."});
  store.Add({{"location"}, "<subject> is located in <object>."});
  store.Add({{"location", "country"}, "<subject> is in <object1>, <object2>."});
  return store;
}

Example RandomWebNlgExample(std::mt19937 &rng, int id, int size) {
  Example e;
  e.id = "r" + std::to_string(id);
  std::set<Triple> used;
  std::string subject = kNames[rng() % kNames.size()];
  while (static_cast<int>(e.triples.size()) < size) {
    // Mostly shared subjects, sometimes chained through an earlier object.
    std::string s = subject;
    if (!e.triples.empty() && rng() % 3 == 0) s = e.triples[rng() % e.triples.size()].object;
    std::string o = kNames[rng() % kNames.size()];
    if (o == s) continue;
    Triple t{s, kPredicates[rng() % kPredicates.size()], o};
    if (used.insert(t).second) e.triples.push_back(t);
  }
  return e;
}

Outcome EntityPreservation() {
  std::mt19937 rng(20200101);
  std::vector<std::string> corpus;
  for (int i = 0; i < 50; ++i) {
    Example e = RandomWebNlgExample(rng, i, 1 + i % 4);
    std::string ref;
    for (const Triple &t : e.triples) ref += t.subject + " " + t.predicate + " " + t.object + ". ";
    corpus.push_back(ref);
  }
  auto ngram = MakeNGramScorer(corpus);
  auto shortest = testing::ShortestScorer();
  TemplateStore webnlg = WebNlgStore();

  IdentityFusion identity;
  RuleFusion rules;
  testing::DropEntityFusion drop;
  std::vector<std::unique_ptr<FusionModel>> noise;
  for (unsigned s = 0; s < 4; ++s) noise.push_back(std::make_unique<testing::NoiseFusion>(s));
  std::vector<const FusionModel *> backends{&identity, &rules, &drop};
  for (auto &n : noise) backends.push_back(n.get());

  EntityChecker entities;
  auto table = std::make_shared<const SlotPatternTable>(
      LoadSlotPatterns(SourcePath("data/e2e_slot_patterns.json")));
  SlotChecker slots(table);
  std::vector<std::string> template_paths{SourcePath("data/e2e_single_templates.json")};
  TemplateStore e2e = LoadTemplates(template_paths);

  const std::vector<std::pair<std::string, std::vector<std::string>>> e2e_slots{
      {"eatType", {"pub", "coffee shop", "restaurant"}},
      {"food", {"Chinese", "English", "Fast food", "French", "Italian"}},
      {"priceRange", {"cheap", "moderate", "high", "less than £20", "£20-25",
                      "more than £30"}},
      {"customer rating", {"low", "average", "high", "1 out of 5", "5 out of 5"}},
      {"area", {"riverside", "city centre"}},
      {"familyFriendly", {"yes", "no"}},
      {"near", {"Raja Indian Cuisine", "The Sorrento", "Café Sicilia"}}};
  const std::vector<std::string> restaurants{"Giraffe", "The Phoenix", "Blue Spice",
                                             "The Mill", "Zizzi"};

  auto start = std::chrono::steady_clock::now();
  int runs = 0, failures_seen = 0, fallback_steps = 0, steps = 0;
  std::map<std::string, int> per_backend;
  for (int i = 0; i < 1400; ++i) {
    const FusionModel &fuser = *backends[i % backends.size()];
    const Scorer &scorer = i % 2 ? static_cast<const Scorer &>(*ngram) : shortest;
    DecoderConfig config;
    config.beam_size = 1 + static_cast<int>(rng() % 10);
    if (rng() % 2) config.persons = {kNames[rng() % kNames.size()]};
    int size = 1 + static_cast<int>(rng() % 7);
    Example e;
    const TemplateStore *store;
    const Checker *checker;
    if (i % 5 == 4) {
      // E2E-shaped: one restaurant, distinct slots, slot checker.
      std::vector<size_t> order(e2e_slots.size());
      for (size_t k = 0; k < order.size(); ++k) order[k] = k;
      std::shuffle(order.begin(), order.end(), rng);
      std::string name = restaurants[rng() % restaurants.size()];
      e.id = "e" + std::to_string(i);
      for (int k = 0; k < size; ++k) {
        const auto &[slot, values] = e2e_slots[order[k]];
        e.triples.push_back({name, slot, values[rng() % values.size()]});
      }
      store = &e2e;
      checker = &slots;
    } else {
      e = RandomWebNlgExample(rng, i, size);
      store = &webnlg;
      checker = &entities;
    }
    DecodeResult r = Generate(e, *store, scorer, fuser, *checker, config);
    ++runs;
    ++per_backend[fuser.name()];
    if (!checker->Check(r.text, e.triples).passed()) ++failures_seen;
    for (const StepTrace &s : r.steps) {
      if (s.step > 0) ++steps;
      if (s.fallback) ++fallback_steps;
    }
  }
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream detail;
  detail << runs << " runs (";
  bool first = true;
  for (const auto &[name, count] : per_backend) {
    detail << (first ? "" : ", ") << name << " " << count;
    first = false;
  }
  detail << "), " << failures_seen << " checker failures, " << fallback_steps << "/"
         << steps << " fallback steps, " << seconds << " s";
  return {runs >= 1000 && failures_seen == 0 && seconds < kDecoderTimeBudgetSeconds,
          detail.str()};
}

Outcome BaselineEquivalence() {
  std::mt19937 rng(77);
  TemplateStore store = WebNlgStore();
  std::vector<std::string> corpus{"Alan Bean was born in Wheeler, Texas.",
                                  "Bakso is a dish found in Indonesia."};
  auto scorer = MakeNGramScorer(corpus);
  IdentityFusion identity;
  EntityChecker checker;
  DecoderConfig config;
  config.pair_start = false;
  int mismatches = 0;
  std::vector<StepTrace> traces;
  for (int i = 0; i < 100; ++i) {
    Example e = RandomWebNlgExample(rng, i, 1 + i % 7);
    DecodeResult r = Generate(e, store, *scorer, identity, checker, config);
    std::string expected;
    for (const Triple &t : e.triples) {
      std::string lex = SelectLexicalization(store, std::span(&t, 1), *scorer).text;
      expected += (expected.empty() ? "" : " ") + lex;
    }
    if (r.text != expected) ++mismatches;
    traces.insert(traces.end(), r.steps.begin(), r.steps.end());
  }
  double rate = FallbackRate(traces);
  std::ostringstream detail;
  detail << "100 examples, " << mismatches << " byte mismatches, fallback_rate "
         << rate;
  return {mismatches == 0 && rate == 0.0, detail.str()};
}

Outcome EditingRoundTrip() {
  std::mt19937 rng(99);
  const std::vector<std::string> lexicon{"a",   "b",  "the", "and", "who", "which",
                                         "is",  "in", ".",   ",",   ";",   "(",
                                         ")",   "\"", "x1",  "x2",  "!",   "?"};
  auto random_tokens = [&](int max_len) {
    std::vector<std::string> out;
    int n = static_cast<int>(rng() % static_cast<unsigned>(max_len + 1));
    for (int i = 0; i < n; ++i) out.push_back(lexicon[rng() % lexicon.size()]);
    return out;
  };
  int feasible = 0, failed = 0;
  const int total = 10000;
  for (int i = 0; i < total; ++i) {
    std::vector<std::string> src = random_tokens(12);
    std::vector<std::string> tgt;
    if (rng() % 2) {
      // Edit of the source.
      for (const std::string &w : src) {
        if (rng() % 4 != 0) tgt.push_back(w);
        if (rng() % 5 == 0) tgt.push_back(lexicon[rng() % lexicon.size()]);
      }
    } else {
      tgt = random_tokens(12);
    }
    std::string source = Detokenize(src);
    std::string target = Detokenize(tgt);
    // A vocabulary holding a random part of the needed phrases.
    std::vector<PhraseVocabulary::Entry> entries;
    std::set<std::string> seen;
    for (const std::string &p : RequiredPhrases(ConvertUnrestricted(source, target))) {
      if (rng() % 3 != 0 && seen.insert(p).second) entries.push_back({p, 1});
    }
    PhraseVocabulary vocab(entries, entries.size());
    auto tags = Convert(source, target, vocab);
    if (!tags) continue;
    ++feasible;
    if (Apply(*tags, source) != target) ++failed;
  }
  std::ostringstream detail;
  detail << total << " pairs, " << feasible << " feasible, " << failed
         << " round-trip failures";
  return {failed == 0 && feasible > 0, detail.str()};
}

// A mined corpus whose targets insert varied filler phrases.
std::vector<FusionPair> MinedCorpus() {
  std::mt19937 rng(5);
  Dataset ds;
  TemplateStore store;
  store.Add({{"p2"}, "<subject> has <object>."});
  store.Add({{"p3"}, "<subject> keeps <object>."});
  auto filler = [&]() {
    std::string f;
    int n = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < n; ++k) f += (k ? " " : "") + ("w" + std::to_string(rng() % 3000));
    return f;
  };
  for (int i = 0; i < 260; ++i) {
    std::string s = "S" + std::to_string(i);
    std::string o1 = "O" + std::to_string(i), o2 = "Q" + std::to_string(i);
    std::string pred = i % 2 ? "p2" : "p3";
    Example x{"x" + std::to_string(i), {{s, "p1", o1}}, {s + " likes " + o1 + "."}};
    std::vector<std::string> refs;
    for (int r = 0; r < 2; ++r) {
      refs.push_back(s + " likes " + filler() + " " + o1 + " " + filler() + " " + o2 +
                     " " + filler() + ".");
    }
    Example y{"y" + std::to_string(i), {{s, "p1", o1}, {s, pred, o2}}, refs};
    ds.examples.push_back(x);
    ds.examples.push_back(y);
  }
  auto scorer = testing::ShortestScorer();
  auto pairs = MinePairs(ds, store, scorer, ReferenceStrategy::kAll);
  if (pairs.size() > 500) pairs.resize(500);
  return pairs;
}

Outcome VocabularyMonotonicity() {
  std::vector<FusionPair> mined = MinedCorpus();
  std::vector<TextPair> pairs = ToTextPairs(mined);
  std::set<std::string> phrases;
  for (const TextPair &p : pairs) {
    for (const std::string &ph : RequiredPhrases(ConvertUnrestricted(p.source, p.target))) {
      phrases.insert(ph);
    }
  }
  std::ostringstream detail;
  detail << pairs.size() << " pairs, " << phrases.size() << " distinct phrases; kept:";
  size_t previous = 0;
  bool monotone = true;
  for (size_t v : {100u, 500u, 1000u, 5000u}) {
    PhraseVocabulary vocab = BuildVocabulary(pairs, v);
    size_t kept = FilterFeasible(pairs, vocab).kept.size();
    detail << " V=" << v << " " << kept;
    monotone = monotone && kept >= previous;
    previous = kept;
  }
  return {monotone && pairs.size() == 500, detail.str()};
}

Outcome MiningOracle() {
  std::mt19937 rng(31337);
  TemplateStore store;
  store.Add({{"p"}, "<subject> ps <object>."});
  store.Add({{"q"}, "<subject> qs <object>."});
  store.Add({{"q"}, "<subject> is q of <object>."});
  auto shortest = testing::ShortestScorer();
  int mismatches = 0, containment_violations = 0;
  size_t sizes[3] = {0, 0, 0};
  const ReferenceStrategy strategies[3] = {
      ReferenceStrategy::kAll, ReferenceStrategy::kBestTgt, ReferenceStrategy::kBest};
  for (int d = 0; d < 20; ++d) {
    Dataset ds = testing::RandomToyDataset(rng, 50);
    std::set<std::pair<std::string, std::string>> mined_sets[3];
    for (int k = 0; k < 3; ++k) {
      auto mined = MinePairs(ds, store, shortest, strategies[k]);
      if (mined != testing::BruteForceMine(ds, store, shortest, strategies[k])) {
        ++mismatches;
      }
      sizes[k] += mined.size();
      for (const FusionPair &p : mined) mined_sets[k].emplace(p.source, p.target);
    }
    // Text pairs are deduplicated across couples, so containment is the
    // invariant that survives deduplication.
    for (int k = 1; k < 3; ++k) {
      for (const auto &pair : mined_sets[k]) {
        if (!mined_sets[k - 1].count(pair)) ++containment_violations;
      }
    }
  }
  std::ostringstream detail;
  detail << "20 datasets, pairs all/best_tgt/best " << sizes[0] << "/" << sizes[1]
         << "/" << sizes[2] << ", " << mismatches << " oracle mismatches, "
         << containment_violations << " containment violations";
  return {mismatches == 0 && containment_violations == 0 && sizes[2] > 0 &&
              sizes[0] > sizes[2],
          detail.str()};
}

Outcome ScoringFormula() {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    int n = 1 + static_cast<int>(rng() % 20);
    std::vector<double> p(n);
    double product = 1.0;
    for (double &x : p) {
      // Log-uniform on [1e-6, 1].
      x = std::pow(10.0, -6.0 * unit(rng));
      product *= x;
    }
    double direct = std::pow(product, 1.0 / n);
    double logspace = GeometricMean(p);
    worst = std::max(worst, std::fabs(logspace - direct) / direct);
  }
  // Equal-probability repetition through the scorer interface.
  class Constant : public TokenModel {
   public:
    explicit Constant(double p) : lp_(std::log(p)) {}
    std::vector<double> TokenLogProbs(std::span<const std::string> t) const override {
      return std::vector<double>(t.size(), lp_);
    }

   private:
    double lp_;
  };
  double worst_rep = 0.0;
  for (double p : {1e-6, 0.003, 0.25, 0.5, 0.9999, 1.0}) {
    TokenModelScorer scorer(std::make_shared<Constant>(p), "constant");
    std::string text;
    for (int len = 1; len <= 200; ++len) {
      text += (len == 1 ? "" : " ") + std::string("tok");
      worst_rep = std::max(worst_rep, std::fabs(Score(scorer, text) - p) / p);
      std::vector<double> seq(len, p);
      worst_rep = std::max(worst_rep, std::fabs(GeometricMean(seq) - p) / p);
    }
  }
  std::ostringstream detail;
  detail << "1000 sequences, max relative error " << worst << " (tol "
         << kLogSpaceRelTol << "); repetition max deviation " << worst_rep << " (tol "
         << kRepetitionTol << ")";
  return {worst <= kLogSpaceRelTol && worst_rep <= kRepetitionTol, detail.str()};
}

Outcome DiscoFuseFilter() {
  const std::set<std::string> allowed{"PAIR_ANAPHORA",     "PAIR_NONE",
                                      "SINGLE_APPOSITION", "SINGLE_RELATIVE",
                                      "SINGLE_S_COORD",    "SINGLE_S_COORD_ANAPHORA",
                                      "SINGLE_VP_COORD"};
  const std::set<std::string> starred{"SINGLE_S_COORD", "SINGLE_S_COORD_ANAPHORA",
                                      "SINGLE_VP_COORD"};
  const std::vector<std::string> connectives{"and", ", and", "but", ", but", "or",
                                             "", "And", "however", "and then"};
  const std::vector<std::string> &types = DiscourseTypes();
  std::ostringstream tsv;
  tsv << "incoherent_first_sentence\tincoherent_second_sentence\t"
         "coherent_first_sentence\tcoherent_second_sentence\tdiscourse_type\t"
         "connective_string\n";
  std::set<int> expected;
  std::set<std::string> covered;
  for (int i = 0; i < 100; ++i) {
    const std::string &type = types[i % types.size()];
    const std::string &conn = connectives[(i * 7) % connectives.size()];
    covered.insert(type);
    tsv << "First " << i << ".\tSecond " << i << ".\tFused " << i << ".\t\t" << type
        << "\t" << conn << "\n";
    std::string norm = conn;
    for (char &c : norm) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    bool keep = allowed.count(type) &&
                (!starred.count(type) || norm == "and" || norm == ", and");
    if (keep) expected.insert(i);
  }
  std::istringstream in(tsv.str());
  DiscoFuseResult r = FilterDiscoFuse(ReadDiscoFuseTsv(in));
  std::set<int> kept;
  for (const FusionPair &p : r.pairs) {
    kept.insert(std::stoi(p.target.substr(6)));
    if (p.source != "First " + p.target.substr(6, p.target.size() - 7) + ". Second " +
                        p.target.substr(6, p.target.size() - 7) + ".") {
      kept.insert(-1);
    }
  }
  std::ostringstream detail;
  detail << "100 rows over " << covered.size() << " types, kept " << kept.size()
         << " (expected " << expected.size() << "), dropped " << r.dropped_type
         << " by type and " << r.dropped_connective << " by connective";
  return {covered.size() == 13 && kept == expected, detail.str()};
}

Outcome MetricOracle() {
  std::ifstream in(SourcePath("tests/oracles/metric_fixture.json"));
  nlohmann::json fixture = nlohmann::json::parse(in);
  std::vector<std::string> hyps = fixture.at("hypotheses");
  std::vector<ReferenceSet> refs = fixture.at("references");
  double worst = 0.0;
  worst = std::max(worst, std::fabs(Bleu(hyps, refs) - fixture.at("bleu").get<double>()));
  worst = std::max(worst,
                   std::fabs(RougeL(hyps, refs) - fixture.at("rouge_l").get<double>()));
  for (size_t i = 0; i < hyps.size(); ++i) {
    std::vector<std::string> h{hyps[i]};
    std::vector<ReferenceSet> r{refs[i]};
    const auto &expected = fixture.at("per_pair").at(i);
    worst = std::max(worst, std::fabs(Bleu(h, r) - expected.at("bleu").get<double>()));
    worst = std::max(worst,
                     std::fabs(RougeL(h, r) - expected.at("rouge_l").get<double>()));
  }
  std::ostringstream detail;
  detail << hyps.size() << " pairs, max abs deviation " << worst << " (tol "
         << kMetricTol << ")";
  return {hyps.size() == 10 && worst <= kMetricTol, detail.str()};
}

Outcome EvaluationStatistics() {
  testing::TempDir dir;
  std::string data = dir / "data.jsonl";
  std::ofstream(data)
      << R"({"id":"a","triples":[{"s":"Alan Bean","p":"occupation","o":"Test pilot"},{"s":"Alan Bean","p":"birthPlace","o":"Wheeler"}],"refs":["Alan Bean, born in Wheeler, was a Test pilot."]})"
      << "\n"
      << R"({"id":"b","triples":[{"s":"Bakso","p":"country","o":"Indonesia"}],"refs":["Bakso is a dish from Indonesia."]})"
      << "\n";
  std::string templates = dir / "templates.json";
  std::ofstream(templates) << R"([
    {"key":"occupation","pattern":"<subject> was a <object>.","origin":"extracted"},
    {"key":"occupation","pattern":"<subject> worked as a <object>.","origin":"extracted"},
    {"key":"birthPlace","pattern":"<subject> was born in <object>.","origin":"extracted"}])";
  std::string out = dir / "out.txt", trace = dir / "trace.jsonl", report = dir / "r.json";
  std::ostringstream o, e;
  if (RunCli({"generate", "--dataset", data, "--templates", templates, "--fuser",
              "rules", "--out", out, "--trace", trace},
             o, e) != 0) {
    return {false, "generate failed: " + e.str()};
  }
  if (RunCli({"evaluate", "--hyp", out, "--dataset", data, "--traces", trace,
              "--templates", templates, "--out", report},
             o, e) != 0) {
    return {false, "evaluate failed: " + e.str()};
  }
  std::ifstream rin(report);
  nlohmann::json j = nlohmann::json::parse(rin);
  bool has_stats = j.at("fallback_rate").is_number() &&
                   j.at("templates_per_predicate").is_number();
  bool flagged = j.at("comparable_to_published") == false;
  bool noted = false;
  for (const auto &n : j.at("notes")) {
    noted = noted || n.get<std::string>().rfind("non-comparable", 0) == 0;
  }
  std::ostringstream detail;
  detail << "fallback_rate " << j.at("fallback_rate") << ", templates_per_predicate "
         << j.at("templates_per_predicate") << ", comparable_to_published "
         << j.at("comparable_to_published")
         << "; published fallback and template figures need the neural backends";
  return {has_stats && flagged && noted, detail.str()};
}

}  // namespace
}  // namespace d2t

int main() {
  using namespace d2t;
  Criterion("entity preservation", EntityPreservation);
  Criterion("baseline equivalence", BaselineEquivalence);
  Criterion("editing round trip", EditingRoundTrip);
  Criterion("vocabulary monotonicity", VocabularyMonotonicity);
  Criterion("mining oracle", MiningOracle);
  Criterion("scoring formula", ScoringFormula);
  Criterion("discofuse filter", DiscoFuseFilter);
  Criterion("metric oracle", MetricOracle);
  Criterion("evaluation statistics", EvaluationStatistics);
  std::cout << (failures == 0 ? "all criteria passed" : "some criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
