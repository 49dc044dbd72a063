#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "star/augmentation.hpp"
#include "star/constrained_decoding.hpp"
#include "star/dataset_io.hpp"
#include "star/evaluation.hpp"
#include "star/inference.hpp"

namespace star {

enum class ProviderKind { kGold, kUniform };

ProviderKind ParseProviderKind(const std::string& name);

struct DecodeOptions {
  ProviderKind provider = ProviderKind::kUniform;
  uint64_t seed = 0;
  size_t beam = 1;
  size_t max_steps = 256;
  bool strict_spans = false;
  size_t jobs = 1;
};

// One generated sequence per (sentence, order), ordered by sentence then by
// order index whatever the job count. The gold provider replays each
// sentence's rendered target; sentences without quads get no gold path.
std::vector<PredictionRow> DecodeDataset(const Dataset& d, const std::vector<OrderTemplate>& orders,
                                         const Taxonomy& taxonomy, const DecodeOptions& options);

struct RowVerdict {
  size_t row = 0;
  std::string source_id;
  std::string message;
};

struct ValidationSummary {
  size_t rows = 0;
  std::vector<RowVerdict> invalid;
};

// Quad-mode validation of a predictions file against its source sentences.
ValidationSummary ValidatePredictionRows(const std::vector<PredictionRow>& rows, const Dataset& d,
                                         const Taxonomy& taxonomy, bool strict_spans);

// Gold from a canonical dataset, predictions from final predictions rows.
// With `missing_as_empty`, gold sentences without a prediction row count as
// predicting nothing; prediction rows for unknown ids are always an error.
EvalReport EvaluatePredictions(const std::vector<SentencePrediction>& predictions,
                               const Dataset& gold, bool missing_as_empty);

}  // namespace star
