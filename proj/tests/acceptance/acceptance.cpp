// Acceptance run: one line per criterion, PASS / FAIL / SKIP, with timing
// against each criterion's budget. Exit status is non-zero on any FAIL.
//
// The dataset statistics check needs the public data files; point
// STAR_DATASET_DIR at a directory holding asqp-rest15/, asqp-rest16/,
// acos-laptop/ and acos-rest/, each with train.txt, dev.txt and test.txt.
// STAR_DATASET_ORDER gives the in-file element order (default "acso").

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "decoding_checks.hpp"
#include "star/augmentation.hpp"
#include "star/dataset_io.hpp"
#include "star/error.hpp"
#include "star/evaluation.hpp"
#include "star/inference.hpp"
#include "star/order_selection.hpp"
#include "star/pipeline.hpp"
#include "star/training_objective.hpp"
#include "support.hpp"

using namespace star;

namespace {

enum class Outcome { kPass, kFail, kSkip };

struct Result {
  Outcome outcome;
  std::string detail;
};

Result Pass(std::string d) { return {Outcome::kPass, std::move(d)}; }
Result Fail(std::string d) { return {Outcome::kFail, std::move(d)}; }

struct Criterion {
  std::string name;
  double budget_seconds;  // <= 0: no runtime bound
  std::function<Result()> run;
};

// ---------------------------------------------------------------- orders

Result OrderEnumeration() {
  std::set<std::string> oracle;
  std::string letters = "ACOS";
  for (char a : letters)
    for (char b : letters)
      for (char c : letters)
        for (char d : letters)
          if (std::set<char>{a, b, c, d}.size() == 4)
            oracle.insert(std::string("[") + a + "][" + b + "][" + c + "][" + d + "]");
  auto orders = EnumerateQuadOrders();
  std::set<std::string> got;
  for (const auto& o : orders) got.insert(o.surface());
  if (orders.size() != 24 || got != oracle) return Fail("enumeration differs from the oracle");
  std::vector<OrderScore> scores;
  Dataset d = ReadRawDatasetFile(testing::FixturePath("rest_small.txt"), ElementOrder());
  for (const auto& t : orders) scores.push_back(ScoreOrder(t, d, ToyScoreProvider()));
  auto top = SelectTopK(scores, 15);
  if (top.size() != 15) return Fail("top-15 returned " + std::to_string(top.size()));
  return Pass("24 orders, top-15 selects 15");
}

Result PairwiseCandidates() {
  auto all = EnumeratePairwiseCandidates();
  size_t base = 0, composite = 0;
  std::set<std::string> surfaces;
  for (const auto& c : all) {
    (c.IsBase() ? base : composite)++;
    surfaces.insert(c.Surface());
  }
  bool ok = base == 4 && composite == 12 && all.size() == 16 && surfaces.size() == 16 &&
            surfaces.count("[AO][CS]") && surfaces.count("[CS][AO]");
  for (auto s : {"[AO]", "[CS]", "[AS]", "[CO]"}) ok = ok && surfaces.count(s);
  return ok ? Pass("4 base + 12 composite = 16") : Fail("candidate set is wrong");
}

// -------------------------------------------------------------- templates

Result TemplateFidelity() {
  const Sentence s{"pizza", "The pizza is delicious."};
  const std::vector<Quad> q = {{"pizza", "food quality", "delicious", Polarity::kPositive}};
  PairwiseCandidate ao_cs{{PairMarker::kAO, PairMarker::kCS}};
  struct Block {
    std::string got_in, got_out, want_in, want_out;
  };
  auto quad = RenderQuadInstance(s, q, OrderTemplate::Parse("[A][C][O][S]"));
  auto pair = RenderPairwiseInstance(s, q, ao_cs);
  auto overall = RenderOverallInstance(s, q);
  std::vector<Block> blocks = {
      {quad.input, quad.target, "Quad Prediction: The pizza is delicious. [A][C][O][S]",
       "[A] pizza [C] food quality [O] delicious [S] great"},
      {pair.input, pair.target, "Pairwise Relation: The pizza is delicious. [AO][CS]",
       "[AO] pizza is delicious [CS] food quality is great"},
      {overall.input, overall.target, "Overall Relation: The pizza is delicious.",
       "[CSAO] The food quality is great because pizza is delicious"},
  };
  for (const auto& b : blocks) {
    if (b.got_in != b.want_in) return Fail("input '" + b.got_in + "' != '" + b.want_in + "'");
    if (b.got_out != b.want_out) return Fail("output '" + b.got_out + "' != '" + b.want_out + "'");
  }
  return Pass("3/3 input/output blocks byte-exact");
}

Result RoundTrip() {
  std::mt19937_64 rng(20240611);
  size_t checks = 0, failures = 0;
  auto orders = EnumerateQuadOrders();
  for (int i = 0; i < 1000; ++i) {
    std::vector<Quad> quads;
    for (size_t n = 1 + UniformIndex(rng, 3); n > 0; --n) quads.push_back(testing::RandomQuad(rng));
    for (const auto& t : orders) {
      ++checks;
      auto parsed = ParseTarget(RenderQuadInstance({"r", "x"}, quads, t).target, t);
      if (parsed.quads != quads || !parsed.diagnostics.empty()) ++failures;
    }
  }
  std::string detail = std::to_string(checks) + " renders (1000 quad lists x 24 orders), " +
                       std::to_string(failures) + " failures";
  return failures == 0 ? Pass(detail) : Fail(detail);
}

Result Pps() {
  auto first = PpsSample(15, 7);
  if (first.size() != 15) return Fail("k=15 gave " + std::to_string(first.size()));
  for (size_t i = 0; i < 4; ++i)
    if (!first[i].IsBase()) return Fail("base candidates missing");
  std::set<std::string> distinct;
  for (const auto& c : first) distinct.insert(c.Surface());
  if (distinct.size() != 15) return Fail("duplicate candidates");
  for (int i = 0; i < 100; ++i)
    if (PpsSample(15, 7) != first) return Fail("rerun " + std::to_string(i) + " differs");
  return Pass("15 candidates incl. 4 base; 100/100 reruns identical");
}

// ------------------------------------------------------------------- loss

Result Bcl() {
  std::mt19937_64 rng(31);
  double worst = 0, worst_equal = 0;
  auto draw = [&](size_t n) {
    std::vector<double> v;
    for (size_t i = 0; i < n; ++i) v.push_back(6.0 * UniformUnit(rng));
    return v;
  };
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  for (int trial = 0; trial < 200; ++trial) {
    auto q = draw(1 + UniformIndex(rng, 40)), p = draw(1 + UniformIndex(rng, 40)),
         o = draw(1 + UniformIndex(rng, 4));
    worst = std::max(worst, std::abs(BalancedContributionLoss(q, p, o).total - (mean(q) + mean(p) + mean(o))));
    size_t n = 1 + UniformIndex(rng, 20);
    auto eq = draw(n), ep = draw(n), eo = draw(n);
    worst_equal = std::max(worst_equal, std::abs(BalancedContributionLoss(eq, ep, eo).total -
                                                 3.0 * PooledSumLoss(eq, ep, eo)));
  }
  std::ostringstream d;
  d << "200 groupings, max |err| " << worst << "; equal sizes max |BCL - 3*pooled| " << worst_equal
    << " (tol 1e-12)";
  return worst <= 1e-12 && worst_equal <= 1e-12 ? Pass(d.str()) : Fail(d.str());
}

// --------------------------------------------------------------- decoding

Result DecodingSoundness() {
  const Sentence pizza{"p", "The pizza is delicious."};
  DecodingSchema schema(Taxonomy{"food quality", "service general", "food prices"},
                        OrderTemplate::Parse("[A][C][O][S]"));
  size_t failures = testing::RandomProviderFailures(pizza, schema, 100, 1, 256);
  if (failures) return Fail(std::to_string(failures) + "/100 random generations invalid");
  size_t strings = 0;
  for (const char* order : {"[A][C][O][S]", "[S][O][C][A]"}) {
    auto rep = testing::ExhaustiveValidatorCheck(OrderTemplate::Parse(order), 12);
    if (rep.mismatches) return Fail(std::string(order) + ": " + rep.first_mismatch);
    size_t rejected = 0;
    size_t generated = testing::CountGeneratedAccepted(OrderTemplate::Parse(order), 12, &rejected);
    if (rejected || generated != rep.accepted)
      return Fail("generated legal strings disagree with the validator");
    strings += rep.strings;
  }
  return Pass("100/100 random generations valid; validator = oracle on every string up to length "
              "12 (" + std::to_string(strings) + " classes by longest viable prefix, 2 orders)");
}

// ----------------------------------------------------------------- voting

Result Voting() {
  std::mt19937_64 rng(77);
  std::vector<Quad> pool;
  for (int i = 0; i < 6; ++i) pool.push_back(testing::RandomQuad(rng));
  auto orders = EnumerateQuadOrders();
  size_t mismatch = 0, monotone_fail = 0;
  const int instances = 2000;
  for (int t = 0; t < instances; ++t) {
    size_t k = 1 + UniformIndex(rng, 5);
    std::vector<OrderView> views;
    for (size_t i = 0; i < k; ++i) {
      OrderView v{orders[i].surface(), {}};
      for (const auto& q : pool)
        if (UniformIndex(rng, 2)) v.quads.insert(q);
      views.push_back(v);
    }
    double tau = 0.5 * static_cast<double>(1 + UniformIndex(rng, 2 * k));
    std::set<Quad> oracle;
    for (const auto& q : pool) {
      size_t votes = 0;
      for (const auto& v : views) votes += v.quads.count(q);
      if (votes > 0 && static_cast<double>(votes) >= tau) oracle.insert(q);
    }
    auto got = AggregateVotes(views, tau);
    if (got != oracle) ++mismatch;
    auto stricter = AggregateVotes(views, tau + 0.5);
    if (!std::includes(got.begin(), got.end(), stricter.begin(), stricter.end())) ++monotone_fail;
  }
  std::string d = std::to_string(instances) + " instances (k<=5): " + std::to_string(mismatch) +
                  " oracle mismatches, " + std::to_string(monotone_fail) + " monotonicity failures";
  return mismatch == 0 && monotone_fail == 0 ? Pass(d) : Fail(d);
}

// ------------------------------------------------------------- evaluation

Result Evaluation() {
  std::mt19937_64 rng(5150);
  std::vector<Quad> pool;
  for (int i = 0; i < 8; ++i) pool.push_back(testing::RandomQuad(rng));
  QuadSets pred, gold;
  double tp = 0, np = 0, ng = 0;
  for (int s = 0; s < 50; ++s) {
    std::string id = "s" + std::to_string(s);
    auto& p = pred[id];
    auto& g = gold[id];
    for (size_t n = UniformIndex(rng, 5); n > 0; --n) g.insert(pool[UniformIndex(rng, pool.size())]);
    for (size_t n = UniformIndex(rng, 5); n > 0; --n) p.insert(pool[UniformIndex(rng, pool.size())]);
    for (const auto& x : p)
      for (const auto& y : g)
        if (x == y) tp += 1;
    np += static_cast<double>(p.size());
    ng += static_cast<double>(g.size());
  }
  double P = np > 0 ? tp / np : 0, R = ng > 0 ? tp / ng : 0, F = P + R > 0 ? 2 * P * R / (P + R) : 0;
  auto rep = ScoreExactMatch(pred, gold);
  double err = std::max({std::abs(rep.precision - P), std::abs(rep.recall - R), std::abs(rep.f1 - F)});
  auto swapped = ScoreExactMatch(gold, pred);
  bool symmetric = swapped.precision == rep.recall && swapped.recall == rep.precision &&
                   std::abs(swapped.f1 - rep.f1) <= 1e-12;
  std::ostringstream d;
  d << "50 sentences, P=" << rep.precision << " R=" << rep.recall << " F1=" << rep.f1
    << ", max |err| " << err << " (tol 1e-12), swap symmetric: " << (symmetric ? "yes" : "no");
  return err <= 1e-12 && symmetric ? Pass(d.str()) : Fail(d.str());
}

// ---------------------------------------------------------- dataset stats

Result DatasetStatistics() {
  const char* root = std::getenv("STAR_DATASET_DIR");
  if (!root) return {Outcome::kSkip, "STAR_DATASET_DIR not set; public datasets not available"};
  const char* order_env = std::getenv("STAR_DATASET_ORDER");
  auto order = ElementOrder::Parse(order_env ? order_env : "acso");
  struct Expect {
    const char* dir;
    const char* split;
    size_t sentences, quads;
  };
  const std::vector<Expect> table = {
      {"asqp-rest15", "train", 834, 1354}, {"asqp-rest15", "dev", 209, 347},
      {"asqp-rest15", "test", 537, 795},   {"asqp-rest16", "train", 1264, 1989},
      {"asqp-rest16", "dev", 316, 507},    {"asqp-rest16", "test", 544, 799},
      {"acos-laptop", "train", 2934, 4172}, {"acos-laptop", "dev", 326, 440},
      {"acos-laptop", "test", 816, 1161},  {"acos-rest", "train", 1530, 2484},
      {"acos-rest", "dev", 171, 261},      {"acos-rest", "test", 583, 916},
  };
  size_t found = 0;
  std::string missing, wrong;
  for (const auto& e : table) {
    auto path = std::filesystem::path(root) / e.dir / (std::string(e.split) + ".txt");
    if (!std::filesystem::exists(path)) {
      missing += std::string(" ") + e.dir + "/" + e.split;
      continue;
    }
    ++found;
    auto stats = ComputeStats(ReadRawDatasetFile(path.string(), order));
    if (stats.n_sentences != e.sentences || stats.n_quads != e.quads) {
      wrong += std::string(" ") + e.dir + "/" + e.split + " got (" + std::to_string(stats.n_sentences) +
               ", " + std::to_string(stats.n_quads) + ") want (" + std::to_string(e.sentences) + ", " +
               std::to_string(e.quads) + ")";
    }
  }
  if (found == 0) return {Outcome::kSkip, std::string("no dataset files under ") + root};
  if (!wrong.empty()) return Fail("count mismatch:" + wrong);
  if (!missing.empty()) return {Outcome::kSkip, std::to_string(found) + "/12 splits match; missing:" + missing};
  return Pass("12/12 splits match exactly");
}

// ------------------------------------------------------------ end to end

Result EndToEnd() {
  auto d = ReadRawDatasetFile(testing::FixturePath("rest_small.txt"), ElementOrder());
  auto tax = TaxonomyFromDataset(d);
  std::vector<OrderScore> scores;
  for (const auto& t : EnumerateQuadOrders()) scores.push_back(ScoreOrder(t, d, ToyScoreProvider()));
  auto orders = SelectTopK(scores, 15);
  DecodeOptions opts;
  opts.provider = ProviderKind::kGold;
  auto rows = DecodeDataset(d, orders, tax, opts);
  auto voted = VotePredictionRows(rows, 15, 7.5);
  auto report = EvaluatePredictions(voted.predictions, d, false);
  std::ostringstream out;
  out << d.sentences.size() << " sentences, " << rows.size() << " decoded rows, tau=7.5: P="
      << report.precision << " R=" << report.recall << " F1=" << report.f1;
  return report.f1 == 1.0 && d.sentences.size() == 10 ? Pass(out.str()) : Fail(out.str());
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"order enumeration: 24 orders, top-15 selects 15", 1.0, OrderEnumeration},
      {"pairwise candidates: 4 base + 12 composite = 16", 1.0, PairwiseCandidates},
      {"template fidelity: quad / pairwise / overall blocks", 0.0, TemplateFidelity},
      {"round trip: parse(render(q)) over 1000 x 24", 10.0, RoundTrip},
      {"pairwise permutation sampling: k=15, reproducible", 1.0, Pps},
      {"balanced contribution loss: oracle within 1e-12, 3x pooled", 1.0, Bcl},
      {"constrained decoding: soundness and exhaustive oracle", 60.0, DecodingSoundness},
      {"voting: brute-force oracle and tau monotonicity", 5.0, Voting},
      {"evaluation: brute-force oracle within 1e-12, swap symmetry", 5.0, Evaluation},
      {"dataset statistics: four datasets, three splits", 0.0, DatasetStatistics},
      {"end to end: gold decode, vote, eval gives F1 = 1.0", 10.0, EndToEnd},
  };
  int failed = 0, passed = 0, skipped = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = Fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.outcome == Outcome::kPass && c.budget_seconds > 0 && secs > c.budget_seconds) {
      std::ostringstream over;
      over << r.detail << "; over the " << c.budget_seconds << " s budget";
      r = Fail(over.str());
    }
    const char* tag = r.outcome == Outcome::kPass ? "PASS" : r.outcome == Outcome::kFail ? "FAIL" : "SKIP";
    std::printf("[%s] %s (%.3f s) %s\n", tag, c.name.c_str(), secs, r.detail.c_str());
    (r.outcome == Outcome::kPass ? passed : r.outcome == Outcome::kFail ? failed : skipped)++;
  }
  std::printf("%d passed, %d failed, %d skipped\n", passed, failed, skipped);
  return failed == 0 ? 0 : 1;
}
