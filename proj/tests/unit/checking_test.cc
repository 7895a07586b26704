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

#include <sstream>

#include "d2t/checking.h"
#include "d2t/errors.h"
#include "doctest.h"

namespace d2t {
namespace {

const std::vector<Triple> kFountain = {
    {"Albert Jennings Fountain", "deathPlace", "New Mexico Territory"},
    {"Albert Jennings Fountain", "birthPlace", "New York City"},
    {"Albert Jennings Fountain", "birthPlace", "Staten Island"}};

TEST_CASE("entity check") {
  const std::string step2 =
      "Albert Jennings Fountain, who died in New Mexico Territory, was born in "
      "New York City, Staten Island.";
  CHECK(CheckEntities(step2, kFountain).passed());
  const std::string without =
      "Albert Jennings Fountain, who died in New Mexico Territory, was born in "
      "New York City.";
  CheckResult r = CheckEntities(without, kFountain);
  CHECK_FALSE(r.passed());
  CHECK(r.missing == std::vector<std::string>{"Staten Island"});
  CHECK(CheckEntities("albert jennings fountain DIED IN new mexico territory",
                      std::vector<Triple>{kFountain[0]})
            .passed());
}

TEST_CASE("entity check lists each missing entity once") {
  std::vector<Triple> triples{{"A", "p", "B"}, {"A", "q", "C"}};
  CHECK(CheckEntities("nothing", triples).missing ==
        std::vector<std::string>{"A", "B", "C"});
}

TEST_CASE("entity check is monotone in text extension") {
  std::vector<Triple> triples{{"A", "p", "B"}};
  CHECK(CheckEntities("A and B", triples).passed());
  CHECK(CheckEntities("A and B plus more", triples).passed());
  CHECK(CheckEntities("prefix A and B", triples).passed());
}

SlotPatternTable LoadShipped() {
  return LoadSlotPatterns(std::string(D2T_SOURCE_DIR) +
                          "/data/e2e_slot_patterns.json");
}

bool Passes(const SlotPatternTable &table, const std::string &slot,
            const std::string &value, const std::string &text) {
  std::vector<Triple> t{{"Giraffe", slot, value}};
  return CheckSlots("Giraffe " + text, t, table).passed();
}

TEST_CASE("familyFriendly polarity") {
  SlotPatternTable table = LoadShipped();
  CHECK(Passes(table, "familyFriendly", "no", "is a pub that is not family-friendly."));
  CHECK_FALSE(Passes(table, "familyFriendly", "no", "is a pub that is family friendly."));
  std::vector<Triple> t{{"Giraffe", "familyFriendly", "no"}};
  CHECK(CheckSlots("Giraffe is family friendly.", t, table).missing ==
        std::vector<std::string>{"familyFriendly"});

  CHECK(Passes(table, "familyFriendly", "yes", "is family friendly."));
  CHECK(Passes(table, "familyFriendly", "yes", "is a cheap, family friendly restaurant."));
  CHECK(Passes(table, "familyFriendly", "yes", "is a kid-friendly pub."));
  CHECK_FALSE(Passes(table, "familyFriendly", "yes", "is not family-friendly."));
  CHECK_FALSE(Passes(table, "familyFriendly", "yes", "is a not family-friendly French pub."));
  CHECK_FALSE(Passes(table, "familyFriendly", "yes", "isn't family friendly."));
  CHECK_FALSE(Passes(table, "familyFriendly", "yes", "is a non-family-friendly pub."));
  CHECK_FALSE(Passes(table, "familyFriendly", "yes", "has a family-friendly rating of no."));
  CHECK(Passes(table, "familyFriendly", "no", "has a family-friendly rating of no."));
  CHECK(Passes(table, "familyFriendly", "no", "is family friendly: no."));
  CHECK(Passes(table, "familyFriendly", "no", "is for adults only."));
  CHECK_FALSE(Passes(table, "familyFriendly", "no", "has a family-friendly rating of yes."));
}

TEST_CASE("slot patterns for the other slots") {
  SlotPatternTable table = LoadShipped();
  CHECK(Passes(table, "near", "Raja Indian Cuisine", "is located near Raja Indian Cuisine."));
  CHECK_FALSE(Passes(table, "near", "Raja Indian Cuisine", "serves Raja food."));
  CHECK(Passes(table, "eatType", "coffee shop", "is a coffee shop."));
  CHECK_FALSE(Passes(table, "eatType", "pub", "is a restaurant."));
  CHECK(Passes(table, "priceRange", "less than £20", "costs less than £20."));
  CHECK(Passes(table, "priceRange", "£20-25", "costs £20-25."));
  CHECK(Passes(table, "priceRange", "high", "is expensive."));
  CHECK_FALSE(Passes(table, "priceRange", "cheap", "is expensive."));
  CHECK(Passes(table, "customer rating", "5 out of 5", "is rated 5 out of 5."));
  CHECK(Passes(table, "customer rating", "high", "has a high customer rating."));
  CHECK_FALSE(Passes(table, "customer rating", "low", "has a high customer rating."));
  CHECK(Passes(table, "area", "city centre", "is in the city center."));
  CHECK(Passes(table, "food", "Italian", "serves Italian food."));
  CHECK_FALSE(Passes(table, "food", "Italian", "serves Indian food."));
}

TEST_CASE("slot check subject and gaps") {
  SlotPatternTable table = LoadShipped();
  std::vector<Triple> t{{"The Phoenix", "area", "riverside"}};
  CHECK(CheckSlots("It is by the riverside.", t, table).missing ==
        std::vector<std::string>{"The Phoenix"});
  std::vector<Triple> unknown{{"X", "stars", "4"}};
  CHECK_THROWS_WITH_AS(CheckSlots("X has 4 stars", unknown, table),
                       doctest::Contains("stars=4"), ValidationError);
  std::vector<Triple> unknown_value{{"X", "familyFriendly", "maybe"}};
  CHECK_THROWS_AS(CheckSlots("X", unknown_value, table), ValidationError);
}

TEST_CASE("slot pattern file parsing") {
  std::istringstream in(
      "# header\n# more\n"
      R"([{"slot":"near","value":"*","patterns":["near {value}"]},)"
      R"({"slot":"area","value":"riverside","patterns":["river"]}])");
  SlotPatternTable table = ReadSlotPatterns(in);
  CHECK(table.size() == 2);
  CHECK(table.Matches("near", "A.B (x)", "near a.b (x)") == true);
  CHECK(table.Matches("near", "A.B", "near axb") == false);
  CHECK(table.Matches("area", "Riverside", "by the river") == true);
  CHECK_FALSE(table.Matches("food", "x", "x").has_value());

  std::istringstream bad(R"([{"slot":"a","value":"b","patterns":["("]}])");
  CHECK_THROWS_AS(ReadSlotPatterns(bad), ValidationError);
  std::istringstream empty(R"([{"slot":"a","value":"b","patterns":[]}])");
  CHECK_THROWS_AS(ReadSlotPatterns(empty), ValidationError);
}

TEST_CASE("checker adapters") {
  EntityChecker entities;
  CHECK(entities.name() == "entities");
  auto table = std::make_shared<const SlotPatternTable>(LoadShipped());
  SlotChecker slots(table);
  CHECK(slots.name() == "slots");
  std::vector<Triple> t{{"Giraffe", "near", "Raja Indian Cuisine"}};
  CHECK(slots.Check("Giraffe is near Raja Indian Cuisine.", t).passed());
}

}  // namespace
}  // namespace d2t
