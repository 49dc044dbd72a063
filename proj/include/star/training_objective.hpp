#pragma once

#include <istream>
#include <span>
#include <vector>

namespace star {

// Per-instance losses are mean token negative log-likelihoods of the target.
struct LossBreakdown {
  std::vector<double> quad_losses;
  std::vector<double> pairwise_losses;
  std::vector<double> overall_losses;
  double quad_mean = 0.0;
  double pairwise_mean = 0.0;
  double overall_mean = 0.0;
  double total = 0.0;
};

// Balanced contribution loss: the sum of the three per-task means, so each
// task contributes equally whatever its instance count.
// Throws kEmptyGroup when any group is empty; never treats one as zero.
LossBreakdown BalancedContributionLoss(std::span<const double> quad,
                                       std::span<const double> pairwise,
                                       std::span<const double> overall);

// Uniform mean over the pooled instances of all three tasks.
// Throws kEmptyGroup when there are no instances at all.
double PooledSumLoss(std::span<const double> quad, std::span<const double> pairwise,
                     std::span<const double> overall);

// Reads `{"task": "quad|pairwise|overall", "loss": <real>}` lines, as dumped
// by a training run, into per-task groups (in file order).
struct LossGroups {
  std::vector<double> quad;
  std::vector<double> pairwise;
  std::vector<double> overall;
};
LossGroups ReadLossJsonl(std::istream& in);

}  // namespace star
