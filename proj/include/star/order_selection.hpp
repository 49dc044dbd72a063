#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "star/augmentation.hpp"
#include "star/dataset_io.hpp"

namespace star {

// Supplies one real score per (prompt, target) pair, e.g. a length-normalized
// log-likelihood from a language model. Must be deterministic within a run.
class SequenceScoreProvider {
 public:
  virtual ~SequenceScoreProvider() = default;
  virtual double Score(std::string_view input, std::string_view target) const = 0;
  // Declared meaning of the score, recorded in run metadata.
  virtual std::string Kind() const = 0;
};

// Hash-derived pseudo log-probabilities in [-5, 0). The prompt carries the
// order surface, so every order gets its own score stream.
class ToyScoreProvider final : public SequenceScoreProvider {
 public:
  explicit ToyScoreProvider(uint64_t salt = 0) : salt_(salt) {}
  double Score(std::string_view input, std::string_view target) const override;
  std::string Kind() const override { return "toy-hash"; }

 private:
  uint64_t salt_;
};

struct OrderScore {
  OrderTemplate order;
  double score;
};

// Mean provider score of the rendered quad instances over sentences with at
// least one quad. Summation runs in dataset order.
// Throws kEmptyGroup when no sentence is usable and kNonFinite for a
// non-finite provider score.
OrderScore ScoreOrder(const OrderTemplate& t, const Dataset& d,
                      const SequenceScoreProvider& provider);

// Highest scores first; equal scores fall back to ascending surface.
// Throws kRange unless 1 <= k <= scores.size(), kConfig on repeated orders.
std::vector<OrderTemplate> SelectTopK(const std::vector<OrderScore>& scores, size_t k);
std::vector<OrderScore> RankScores(std::vector<OrderScore> scores);

// One line of a scores JSONL file.
struct ScoreRow {
  std::string order;
  std::string source_id;
  double score;
};

std::vector<ScoreRow> ReadScoresJsonl(std::istream& in);
void WriteScoresJsonl(const std::vector<ScoreRow>& rows, std::ostream& out);

// Per-(order, sentence) scores for every order over the usable sentences.
std::vector<ScoreRow> ComputeScoreRows(const Dataset& d, const std::vector<OrderTemplate>& orders,
                                       const SequenceScoreProvider& provider);

// Mean score per order. Every order must cover the same set of sentence ids,
// with no duplicates; each mean is summed in ascending source_id order.
std::vector<OrderScore> AggregateScoreRows(const std::vector<ScoreRow>& rows);

struct RankingEntry {
  std::string order;
  double mean_score;
  size_t rank;  // 1-based
};

std::vector<RankingEntry> MakeRanking(const std::vector<OrderScore>& scores, size_t k);
std::string RankingJson(const std::vector<RankingEntry>& ranking);
// Reads a ranking report back into the order list it ranks, in rank order.
std::vector<OrderTemplate> ReadRankingJson(std::istream& in);

}  // namespace star
