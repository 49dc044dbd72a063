#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "star/augmentation.hpp"
#include "star/error.hpp"
#include "support.hpp"

using namespace star;

namespace {

const Sentence kPizza{"p", "The pizza is delicious."};
const Quad kPizzaQuad{"pizza", "food quality", "delicious", Polarity::kPositive};

// Independent enumeration: every 4-letter string over ACOS with distinct letters.
std::set<std::string> BruteForceOrders() {
  const std::string letters = "ACOS";
  std::set<std::string> out;
  for (char a : letters)
    for (char b : letters)
      for (char c : letters)
        for (char d : letters) {
          std::set<char> seen{a, b, c, d};
          if (seen.size() != 4) continue;
          std::string s;
          for (char x : {a, b, c, d}) s += std::string("[") + x + "]";
          out.insert(s);
        }
  return out;
}

}  // namespace

TEST_CASE("24 quad orders match the brute-force enumeration") {
  auto orders = EnumerateQuadOrders();
  REQUIRE(orders.size() == 24);
  std::set<std::string> surfaces;
  for (const auto& o : orders) surfaces.insert(o.surface());
  CHECK(surfaces == BruteForceOrders());
  CHECK(std::is_sorted(orders.begin(), orders.end()));
  CHECK(orders.front().surface() == "[A][C][O][S]");
  CHECK(orders.back().surface() == "[S][O][C][A]");
}

TEST_CASE("order template parsing") {
  CHECK(OrderTemplate::Parse("[O][A][C][S]").surface() == "[O][A][C][S]");
  CHECK(OrderTemplate::Parse("OACS") == OrderTemplate::Parse("[O][A][C][S]"));
  CHECK_THROWS_AS(OrderTemplate::Parse("[A][A][C][S]"), Error);
  CHECK_THROWS_AS(OrderTemplate::Parse("[A][C][O]"), Error);
  CHECK(OrderTemplate::Parse("ACOS").MarkerTokens() ==
        std::vector<std::string>{"[A]", "[C]", "[O]", "[S]"});
}

TEST_CASE("quad rendering") {
  auto inst = RenderQuadInstance(kPizza, {kPizzaQuad}, OrderTemplate::Parse("ACOS"));
  CHECK(inst.input == "Quad Prediction: The pizza is delicious. [A][C][O][S]");
  CHECK(inst.target == "[A] pizza [C] food quality [O] delicious [S] great");
  CHECK(inst.task == TaskKind::kQuad);
  CHECK(RenderQuadInstance(kPizza, {kPizzaQuad}, OrderTemplate::Parse("OACS")).target ==
        "[O] delicious [A] pizza [C] food quality [S] great");
  Quad second{"NULL", "service general", "slow", Polarity::kNegative};
  CHECK(RenderQuadInstance(kPizza, {kPizzaQuad, second}, OrderTemplate::Parse("ACOS")).target ==
        "[A] pizza [C] food quality [O] delicious [S] great [SSEP] "
        "[A] it [C] service general [O] slow [S] bad");
  try {
    RenderQuadInstance(kPizza, {}, OrderTemplate::Parse("ACOS"));
    FAIL("empty quad list rendered");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kRender);
  }
}

TEST_CASE("pairwise candidates: 4 base then 12 ordered composites") {
  auto all = EnumeratePairwiseCandidates();
  REQUIRE(all.size() == 16);
  std::vector<std::string> base;
  std::set<std::string> composites;
  for (const auto& c : all) (c.IsBase() ? (void)base.push_back(c.Surface()) : (void)composites.insert(c.Surface()));
  CHECK(base == std::vector<std::string>{"[AO]", "[CS]", "[AS]", "[CO]"});
  std::set<std::string> expected;
  for (auto x : base)
    for (auto y : base)
      if (x != y) expected.insert(x + y);
  CHECK(composites == expected);
  CHECK(composites.count("[AO][CS]"));
  CHECK(composites.count("[CS][AO]"));
  for (size_t i = 0; i < 4; ++i) CHECK(all[i].IsBase());
}

TEST_CASE("pairwise rendering") {
  auto cand = [](std::string_view surface) {
    for (const auto& c : EnumeratePairwiseCandidates())
      if (c.Surface() == surface) return c;
    FAIL("unknown candidate");
    return PairwiseCandidate{};
  };
  auto inst = RenderPairwiseInstance(kPizza, {kPizzaQuad}, cand("[AO][CS]"));
  CHECK(inst.input == "Pairwise Relation: The pizza is delicious. [AO][CS]");
  CHECK(inst.target == "[AO] pizza is delicious [CS] food quality is great");
  CHECK(RenderPairwiseInstance(kPizza, {kPizzaQuad}, cand("[AS]")).target == "[AS] pizza is great");
  CHECK(RenderPairwiseInstance(kPizza, {kPizzaQuad}, cand("[CO]")).target ==
        "[CO] food quality is delicious");
  Quad implicit{"NULL", "food quality", "delicious", Polarity::kPositive};
  CHECK(RenderPairwiseInstance(kPizza, {implicit}, cand("[AO]")).target == "[AO] it is delicious");
  CHECK(RenderPairwiseInstance(kPizza, {kPizzaQuad, implicit}, cand("[AO]")).target ==
        "[AO] pizza is delicious [SSEP] [AO] it is delicious");
}

TEST_CASE("overall rendering") {
  auto inst = RenderOverallInstance(kPizza, {kPizzaQuad});
  CHECK(inst.input == "Overall Relation: The pizza is delicious.");
  CHECK(inst.target == "[CSAO] The food quality is great because pizza is delicious");
  CHECK(inst.order_surface.empty());
  Quad both_null{"NULL", "food quality", "NULL", Polarity::kPositive};
  CHECK(RenderOverallInstance(kPizza, {both_null}).target ==
        "[CSAO] The food quality is great because it is it");
  CHECK(RenderOverallInstance(kPizza, {kPizzaQuad, both_null}).target ==
        "[CSAO] The food quality is great because pizza is delicious [SSEP] "
        "[CSAO] The food quality is great because it is it");
}

TEST_CASE("pps sizes and errors") {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    auto s = PpsSample(15, seed);
    REQUIRE(s.size() == 15);
    for (size_t i = 0; i < 4; ++i) CHECK(s[i].IsBase());
    std::set<std::string> distinct;
    for (const auto& c : s) distinct.insert(c.Surface());
    CHECK(distinct.size() == 15);
  }
  CHECK(PpsSample(16, 3) == EnumeratePairwiseCandidates());
  CHECK(PpsSample(16, 99) == EnumeratePairwiseCandidates());
  auto base = PpsSample(4, 5);
  REQUIRE(base.size() == 4);
  for (const auto& c : base) CHECK(c.IsBase());
  for (size_t bad : {0, 3, 17}) {
    try {
      PpsSample(bad, 1);
      FAIL("k=" << bad << " accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kRange);
    }
  }
}

TEST_CASE("pps is reproducible and keeps enumeration order") {
  auto first = PpsSample(10, 1234);
  for (int i = 0; i < 100; ++i) CHECK(PpsSample(10, 1234) == first);
  auto all = EnumeratePairwiseCandidates();
  auto pos = [&](const PairwiseCandidate& c) { return std::find(all.begin(), all.end(), c) - all.begin(); };
  for (size_t i = 1; i < first.size(); ++i) CHECK(pos(first[i - 1]) < pos(first[i]));
  std::set<std::string> distinct_samples;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    std::string key;
    for (const auto& c : PpsSample(10, seed)) key += c.Surface();
    distinct_samples.insert(key);
  }
  CHECK(distinct_samples.size() > 1);
}

TEST_CASE("pps picks composites uniformly") {
  // k = 5 keeps one composite; over many seeds each should appear about
  // equally often. Chi-square with 11 dof; 40 is far beyond p = 0.0001.
  const int draws = 12000;
  std::map<std::string, int> hits;
  for (uint64_t seed = 0; seed < draws; ++seed) hits[PpsSample(5, seed)[4].Surface()]++;
  REQUIRE(hits.size() == 12);
  double expected = draws / 12.0, chi2 = 0;
  for (const auto& [_, n] : hits) chi2 += (n - expected) * (n - expected) / expected;
  CHECK(chi2 < 40.0);
}

TEST_CASE("training corpus counts") {
  Dataset d;
  d.sentences.push_back({kPizza, {kPizzaQuad}});
  auto orders = EnumerateQuadOrders();
  orders.erase(orders.begin() + 15, orders.end());
  CHECK(BuildTrainingCorpus(d, orders, EnumeratePairwiseCandidates(), true).size() == 32);
  CHECK(BuildTrainingCorpus(d, orders, PpsSample(15, 0), true).size() == 31);
  CHECK(BuildTrainingCorpus(d, orders, {}, false).size() == 15);

  Dataset hundred;
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i)
    hundred.sentences.push_back({{"s" + std::to_string(i), "text"}, {testing::RandomQuad(rng)}});
  hundred.sentences.push_back({{"empty", "nothing here"}, {}});
  CHECK(BuildTrainingCorpus(hundred, orders, PpsSample(15, 7), true).size() == 3100);
  CHECK(BuildTrainingCorpus(hundred, orders, EnumeratePairwiseCandidates(), true).size() == 3200);
}

TEST_CASE("corpus layout and deterministic output") {
  Dataset d;
  d.sentences.push_back({kPizza, {kPizzaQuad}});
  d.sentences.push_back({{"q", "Slow service ."}, {{"service", "service general", "Slow", Polarity::kNegative}}});
  auto orders = EnumerateQuadOrders();
  orders.erase(orders.begin() + 3, orders.end());
  auto corpus = BuildTrainingCorpus(d, orders, PpsSample(6, 42), true);
  REQUIRE(corpus.size() == 2 * (3 + 6 + 1));
  CHECK(corpus[0].task == TaskKind::kQuad);
  CHECK(corpus[3].task == TaskKind::kPairwise);
  CHECK(corpus[9].task == TaskKind::kOverall);
  CHECK(corpus[10].source_id == "q");

  auto write = [&] {
    std::ostringstream out;
    WriteCorpusJsonl(BuildTrainingCorpus(d, orders, PpsSample(6, 42), true), out);
    return out.str();
  };
  CHECK(write() == write());
  CHECK(TaskInstanceJson(corpus[0]) ==
        R"({"task":"quad","source_id":"p","order":"[A][C][O][S]","input":"Quad Prediction: The pizza is delicious. [A][C][O][S]","target":"[A] pizza [C] food quality [O] delicious [S] great"})");
}
