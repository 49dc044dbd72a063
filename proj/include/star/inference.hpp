#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "star/augmentation.hpp"
#include "star/core_model.hpp"

namespace star {

struct ParseDiagnostic {
  size_t segment;  // 0-based index of the [SSEP]-separated segment
  std::string message;
};

struct ParsedTarget {
  std::vector<Quad> quads;
  std::vector<ParseDiagnostic> diagnostics;
};

// Splits on " [SSEP] ", reads each segment's markers in `order`, trims the
// elements and unmaps them. Malformed segments are dropped with a diagnostic.
ParsedTarget ParseTarget(std::string_view target, const OrderTemplate& order);

// One prediction order's parsed output for a sentence. Duplicates collapse.
struct OrderView {
  std::string order;
  std::set<Quad> quads;
};

struct VoteTally {
  std::map<Quad, size_t> votes;
  double threshold = 0.0;
  size_t k = 0;
};

VoteTally TallyVotes(const std::vector<OrderView>& views, double tau);

// Quads from the union of views with vote count >= tau.
// Throws kConfig for an empty view list or tau <= 0.
std::set<Quad> AggregateVotes(const std::vector<OrderView>& views, double tau);

// One line of a predictions JSONL file.
struct PredictionRow {
  std::string source_id;
  std::string order;
  std::string sequence;
};

std::vector<PredictionRow> ReadPredictionsJsonl(std::istream& in);
std::string PredictionRowJson(const PredictionRow& row);

struct SentencePrediction {
  std::string source_id;
  std::vector<Quad> quads;
};

std::string QuadJson(const Quad& q);
std::string FinalPredictionJson(const SentencePrediction& p);
std::vector<SentencePrediction> ReadFinalPredictionsJsonl(std::istream& in);

struct VoteRunSummary {
  std::vector<SentencePrediction> predictions;  // first-appearance order of source ids
  size_t k = 0;
  double tau = 0.0;
  size_t malformed_segments = 0;
};

// Groups prediction rows per sentence and votes. `k` = 0 means "infer from
// the rows"; every sentence must then carry the same number of views.
// `tau` <= 0 means k / 2.
VoteRunSummary VotePredictionRows(const std::vector<PredictionRow>& rows, size_t k, double tau);

}  // namespace star
