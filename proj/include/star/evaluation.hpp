#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "star/core_model.hpp"

namespace star {

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  size_t tp = 0;
  size_t n_pred = 0;
  size_t n_gold = 0;
};

using QuadSets = std::map<std::string, std::set<Quad>>;

// Exact-match scoring, micro-averaged over sentences with set semantics per
// sentence. Empty denominators give 0. Throws kAlignment unless both sides
// cover the same sentence ids.
EvalReport ScoreExactMatch(const QuadSets& pred, const QuadSets& gold);

QuadSets ToQuadSets(const std::map<std::string, std::vector<Quad>>& lists);

std::string EvalReportJson(const EvalReport& r);
std::string EvalReportTable(const EvalReport& r);

}  // namespace star
