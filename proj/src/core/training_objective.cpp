#include "star/training_objective.hpp"

#include <cmath>
#include <string>

#include <json.hpp>

#include "star/augmentation.hpp"
#include "star/error.hpp"

namespace star {

namespace {

void CheckLosses(std::span<const double> group, const char* name) {
  for (double v : group) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorCode::kNonFinite, std::string(name) + " group holds loss " +
                                             std::to_string(v) + " (must be finite and >= 0)");
    }
  }
}

double Mean(std::span<const double> group, const char* name) {
  if (group.empty()) {
    throw Error(ErrorCode::kEmptyGroup, std::string(name) + " loss group is empty");
  }
  CheckLosses(group, name);
  double sum = 0.0;
  for (double v : group) sum += v;
  return sum / static_cast<double>(group.size());
}

}  // namespace

LossBreakdown BalancedContributionLoss(std::span<const double> quad,
                                       std::span<const double> pairwise,
                                       std::span<const double> overall) {
  LossBreakdown b;
  b.quad_mean = Mean(quad, "quad");
  b.pairwise_mean = Mean(pairwise, "pairwise");
  b.overall_mean = Mean(overall, "overall");
  b.quad_losses.assign(quad.begin(), quad.end());
  b.pairwise_losses.assign(pairwise.begin(), pairwise.end());
  b.overall_losses.assign(overall.begin(), overall.end());
  b.total = b.quad_mean + b.pairwise_mean + b.overall_mean;
  return b;
}

double PooledSumLoss(std::span<const double> quad, std::span<const double> pairwise,
                     std::span<const double> overall) {
  const size_t n = quad.size() + pairwise.size() + overall.size();
  if (n == 0) throw Error(ErrorCode::kEmptyGroup, "no loss instances in any group");
  CheckLosses(quad, "quad");
  CheckLosses(pairwise, "pairwise");
  CheckLosses(overall, "overall");
  double sum = 0.0;
  for (double v : quad) sum += v;
  for (double v : pairwise) sum += v;
  for (double v : overall) sum += v;
  return sum / static_cast<double>(n);
}

LossGroups ReadLossJsonl(std::istream& in) {
  LossGroups g;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      double loss = j.at("loss").get<double>();
      switch (ParseTaskName(j.at("task").get<std::string>())) {
        case TaskKind::kQuad: g.quad.push_back(loss); break;
        case TaskKind::kPairwise: g.pairwise.push_back(loss); break;
        case TaskKind::kOverall: g.overall.push_back(loss); break;
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, "loss line " + std::to_string(line_number) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, "loss line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return g;
}

}  // namespace star
