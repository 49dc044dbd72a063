#include "star/star.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "star/augmentation.hpp"
#include "star/constrained_decoding.hpp"
#include "star/dataset_io.hpp"
#include "star/evaluation.hpp"
#include "star/inference.hpp"
#include "star/order_selection.hpp"
#include "star/pipeline.hpp"
#include "star/training_objective.hpp"

struct star_dataset {
  star::Dataset value;
};

struct star_taxonomy {
  star::Taxonomy value;
};

struct star_orders {
  std::vector<star::OrderTemplate> value;
};

struct star_pairwise {
  std::vector<star::PairwiseCandidate> value;
  std::vector<std::string> surfaces;
};

struct star_quads {
  std::vector<star::Quad> value;
};

namespace {

thread_local std::string g_last_error;

star_status ToStatus(star::ErrorCode code) {
  using star::ErrorCode;
  switch (code) {
    case ErrorCode::kMapping: return STAR_ERR_MAPPING;
    case ErrorCode::kParse: return STAR_ERR_PARSE;
    case ErrorCode::kRange: return STAR_ERR_RANGE;
    case ErrorCode::kRender: return STAR_ERR_RENDER;
    case ErrorCode::kEmptyGroup: return STAR_ERR_EMPTY_GROUP;
    case ErrorCode::kAutomaton: return STAR_ERR_AUTOMATON;
    case ErrorCode::kDeadEnd: return STAR_ERR_DEAD_END;
    case ErrorCode::kAlignment: return STAR_ERR_ALIGNMENT;
    case ErrorCode::kIo: return STAR_ERR_IO;
    case ErrorCode::kConfig: return STAR_ERR_CONFIG;
    case ErrorCode::kNonFinite: return STAR_ERR_NON_FINITE;
  }
  return STAR_ERR_INTERNAL;
}

star_status Fail(star_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
star_status Guard(F&& body) {
  try {
    body();
    return STAR_OK;
  } catch (const star::Error& e) {
    return Fail(ToStatus(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(STAR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(STAR_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(STAR_ERR_INTERNAL, "unknown exception");
  }
}

// Checked inside Guard bodies; reports STAR_ERR_INVALID_ARGUMENT.
#define STAR_REQUIRE(cond)                                                               \
  do {                                                                                    \
    if (!(cond)) return Fail(STAR_ERR_INVALID_ARGUMENT, "null or invalid argument: " #cond); \
  } while (0)

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::ofstream OpenOut(const char* path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw star::Error(star::ErrorCode::kIo, std::string("cannot write '") + path + "'");
  return out;
}

std::ifstream OpenIn(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw star::Error(star::ErrorCode::kIo, std::string("cannot open '") + path + "'");
  return in;
}

std::vector<star::Quad> ToQuads(const star_quad* quads, size_t n) {
  std::vector<star::Quad> out;
  for (size_t i = 0; i < n; ++i) {
    const star_quad& q = quads[i];
    if (!q.aspect || !q.category || !q.opinion || !q.polarity) {
      throw star::Error(star::ErrorCode::kMapping, "quad " + std::to_string(i) + " has a null field");
    }
    out.push_back({q.aspect, q.category, q.opinion, star::ParsePolarity(q.polarity)});
  }
  return out;
}

star::Sentence InlineSentence(const char* text) { return star::Sentence{"inline", text}; }

void WriteRendered(const star::TaskInstance& inst, char** input_out, char** target_out) {
  char* input = CopyString(inst.input);
  char* target = nullptr;
  try {
    target = CopyString(inst.target);
  } catch (...) {
    std::free(input);
    throw;
  }
  *input_out = input;
  *target_out = target;
}

}  // namespace

extern "C" {

const char* star_version(void) { return "1.0.0"; }

const char* star_status_name(star_status status) {
  switch (status) {
    case STAR_OK: return "ok";
    case STAR_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case STAR_ERR_MAPPING: return "mapping";
    case STAR_ERR_PARSE: return "parse";
    case STAR_ERR_RANGE: return "range";
    case STAR_ERR_RENDER: return "render";
    case STAR_ERR_EMPTY_GROUP: return "empty-group";
    case STAR_ERR_AUTOMATON: return "automaton";
    case STAR_ERR_DEAD_END: return "dead-end";
    case STAR_ERR_ALIGNMENT: return "alignment";
    case STAR_ERR_IO: return "io";
    case STAR_ERR_CONFIG: return "config";
    case STAR_ERR_NON_FINITE: return "non-finite";
    case STAR_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* star_last_error(void) { return g_last_error.c_str(); }

void star_string_free(char* s) { std::free(s); }

// ---- datasets -------------------------------------------------------------

star_status star_dataset_read_raw(const char* path, const char* element_order,
                                  const star_taxonomy* taxonomy, star_dataset** out) {
  STAR_REQUIRE(path && out);
  return Guard([&] {
    auto order = element_order ? star::ElementOrder::Parse(element_order) : star::ElementOrder();
    auto d = std::make_unique<star_dataset>();
    d->value = star::ReadRawDatasetFile(path, order);
    star::CheckDataset(d->value);
    if (taxonomy) star::CheckTaxonomy(d->value, taxonomy->value);
    *out = d.release();
  });
}

star_status star_dataset_read_jsonl(const char* path, star_dataset** out) {
  STAR_REQUIRE(path && out);
  return Guard([&] {
    auto d = std::make_unique<star_dataset>();
    d->value = star::ReadCanonicalJsonlFile(path);
    *out = d.release();
  });
}

star_status star_dataset_write_jsonl(const star_dataset* dataset, const char* path) {
  STAR_REQUIRE(dataset && path);
  return Guard([&] { star::WriteCanonicalJsonlFile(dataset->value, path); });
}

star_status star_dataset_stats(const star_dataset* dataset, size_t* n_sentences, size_t* n_quads) {
  STAR_REQUIRE(dataset && n_sentences && n_quads);
  return Guard([&] {
    auto stats = star::ComputeStats(dataset->value);
    *n_sentences = stats.n_sentences;
    *n_quads = stats.n_quads;
  });
}

void star_dataset_free(star_dataset* dataset) { delete dataset; }

star_status star_taxonomy_from_file(const char* path, star_taxonomy** out) {
  STAR_REQUIRE(path && out);
  return Guard([&] { *out = new star_taxonomy{star::ReadTaxonomyFile(path)}; });
}

star_status star_taxonomy_from_dataset(const star_dataset* dataset, star_taxonomy** out) {
  STAR_REQUIRE(dataset && out);
  return Guard([&] {
    auto t = star::TaxonomyFromDataset(dataset->value);
    if (t.empty()) {
      throw star::Error(star::ErrorCode::kConfig, "dataset has no categories to build a taxonomy");
    }
    *out = new star_taxonomy{std::move(t)};
  });
}

size_t star_taxonomy_size(const star_taxonomy* taxonomy) {
  return taxonomy ? taxonomy->value.size() : 0;
}

void star_taxonomy_free(star_taxonomy* taxonomy) { delete taxonomy; }

// ---- quads and rendering ----------------------------------------------------

size_t star_quads_count(const star_quads* quads) { return quads ? quads->value.size() : 0; }

star_status star_quads_get(const star_quads* quads, size_t index, star_quad* out) {
  STAR_REQUIRE(quads && out);
  if (index >= quads->value.size()) return Fail(STAR_ERR_RANGE, "quad index out of range");
  const auto& q = quads->value[index];
  out->aspect = q.aspect.c_str();
  out->category = q.category.c_str();
  out->opinion = q.opinion.c_str();
  out->polarity = star::PolarityLabel(q.polarity).data();
  return STAR_OK;
}

void star_quads_free(star_quads* quads) { delete quads; }

star_status star_render_quad(const char* text, const star_quad* quads, size_t n_quads,
                             const char* order, char** input_out, char** target_out) {
  STAR_REQUIRE(text && (quads || n_quads == 0) && order && input_out && target_out);
  return Guard([&] {
    auto inst = star::RenderQuadInstance(InlineSentence(text), ToQuads(quads, n_quads),
                                         star::OrderTemplate::Parse(order));
    WriteRendered(inst, input_out, target_out);
  });
}

star_status star_render_pairwise(const char* text, const star_quad* quads, size_t n_quads,
                                 const char* candidate, char** input_out, char** target_out) {
  STAR_REQUIRE(text && (quads || n_quads == 0) && candidate && input_out && target_out);
  return Guard([&] {
    const star::PairwiseCandidate* match = nullptr;
    auto all = star::EnumeratePairwiseCandidates();
    for (const auto& c : all) {
      if (c.Surface() == candidate) match = &c;
    }
    if (!match) {
      throw star::Error(star::ErrorCode::kConfig,
                        std::string("unknown pairwise candidate '") + candidate + "'");
    }
    auto inst = star::RenderPairwiseInstance(InlineSentence(text), ToQuads(quads, n_quads), *match);
    WriteRendered(inst, input_out, target_out);
  });
}

star_status star_render_overall(const char* text, const star_quad* quads, size_t n_quads,
                                char** input_out, char** target_out) {
  STAR_REQUIRE(text && (quads || n_quads == 0) && input_out && target_out);
  return Guard([&] {
    auto inst = star::RenderOverallInstance(InlineSentence(text), ToQuads(quads, n_quads));
    WriteRendered(inst, input_out, target_out);
  });
}

star_status star_parse_target(const char* target, const char* order, star_quads** out,
                              size_t* n_diagnostics) {
  STAR_REQUIRE(target && order && out);
  return Guard([&] {
    auto parsed = star::ParseTarget(target, star::OrderTemplate::Parse(order));
    if (n_diagnostics) *n_diagnostics = parsed.diagnostics.size();
    *out = new star_quads{std::move(parsed.quads)};
  });
}

// ---- orders and pairwise candidates -------------------------------------------

star_status star_orders_all(star_orders** out) {
  STAR_REQUIRE(out);
  return Guard([&] { *out = new star_orders{star::EnumerateQuadOrders()}; });
}

star_status star_orders_parse(const char* const* surfaces, size_t n, star_orders** out) {
  STAR_REQUIRE((surfaces || n == 0) && out);
  return Guard([&] {
    auto orders = std::make_unique<star_orders>();
    for (size_t i = 0; i < n; ++i) {
      if (!surfaces[i]) throw star::Error(star::ErrorCode::kConfig, "null order surface");
      orders->value.push_back(star::OrderTemplate::Parse(surfaces[i]));
    }
    *out = orders.release();
  });
}

star_status star_orders_read_ranking(const char* path, size_t k, star_orders** out) {
  STAR_REQUIRE(path && out);
  return Guard([&] {
    auto in = OpenIn(path);
    auto orders = star::ReadRankingJson(in);
    if (k > orders.size()) {
      throw star::Error(star::ErrorCode::kRange, "ranking lists " + std::to_string(orders.size()) +
                                                     " orders, " + std::to_string(k) + " requested");
    }
    if (k > 0) orders.erase(orders.begin() + static_cast<std::ptrdiff_t>(k), orders.end());
    *out = new star_orders{std::move(orders)};
  });
}

star_status star_orders_toy_top_k(const star_dataset* dataset, size_t k, star_orders** out) {
  STAR_REQUIRE(dataset && out);
  return Guard([&] {
    star::ToyScoreProvider provider;
    std::vector<star::OrderScore> scores;
    for (const auto& t : star::EnumerateQuadOrders())
      scores.push_back(star::ScoreOrder(t, dataset->value, provider));
    *out = new star_orders{star::SelectTopK(scores, k)};
  });
}

size_t star_orders_count(const star_orders* orders) { return orders ? orders->value.size() : 0; }

const char* star_orders_surface(const star_orders* orders, size_t index) {
  if (!orders || index >= orders->value.size()) return nullptr;
  return orders->value[index].surface().c_str();
}

void star_orders_free(star_orders* orders) { delete orders; }

namespace {
star_pairwise* MakePairwise(std::vector<star::PairwiseCandidate> candidates) {
  auto p = std::make_unique<star_pairwise>();
  for (const auto& c : candidates) p->surfaces.push_back(c.Surface());
  p->value = std::move(candidates);
  return p.release();
}
}  // namespace

star_status star_pairwise_all(star_pairwise** out) {
  STAR_REQUIRE(out);
  return Guard([&] { *out = MakePairwise(star::EnumeratePairwiseCandidates()); });
}

star_status star_pairwise_pps(size_t k, uint64_t seed, star_pairwise** out) {
  STAR_REQUIRE(out);
  return Guard([&] { *out = MakePairwise(star::PpsSample(k, seed)); });
}

size_t star_pairwise_count(const star_pairwise* pairwise) {
  return pairwise ? pairwise->value.size() : 0;
}

const char* star_pairwise_surface(const star_pairwise* pairwise, size_t index) {
  if (!pairwise || index >= pairwise->surfaces.size()) return nullptr;
  return pairwise->surfaces[index].c_str();
}

void star_pairwise_free(star_pairwise* pairwise) { delete pairwise; }

// ---- augmentation -----------------------------------------------------------

star_status star_augment_write(const star_dataset* dataset, const star_orders* orders,
                               const star_pairwise* pairwise, int include_overall,
                               const char* out_path, star_corpus_counts* counts) {
  STAR_REQUIRE(dataset && orders && out_path);
  return Guard([&] {
    static const std::vector<star::PairwiseCandidate> kNone;
    auto corpus = star::BuildTrainingCorpus(dataset->value, orders->value,
                                            pairwise ? pairwise->value : kNone,
                                            include_overall != 0);
    auto out = OpenOut(out_path);
    star::WriteCorpusJsonl(corpus, out);
    if (!out) throw star::Error(star::ErrorCode::kIo, std::string("write failed: ") + out_path);
    if (counts) {
      *counts = {};
      for (const auto& inst : corpus) {
        switch (inst.task) {
          case star::TaskKind::kQuad: ++counts->quad; break;
          case star::TaskKind::kPairwise: ++counts->pairwise; break;
          case star::TaskKind::kOverall: ++counts->overall; break;
        }
      }
    }
  });
}

// ---- order selection --------------------------------------------------------

star_status star_scores_write_toy(const star_dataset* dataset, const star_orders* orders,
                                  const char* out_path, size_t* n_rows) {
  STAR_REQUIRE(dataset && out_path);
  return Guard([&] {
    star::ToyScoreProvider provider;
    auto rows = star::ComputeScoreRows(
        dataset->value, orders ? orders->value : star::EnumerateQuadOrders(), provider);
    auto out = OpenOut(out_path);
    star::WriteScoresJsonl(rows, out);
    if (n_rows) *n_rows = rows.size();
  });
}

star_status star_select_orders(const char* scores_path, size_t k, const char* ranking_path,
                               star_orders** selected) {
  STAR_REQUIRE(scores_path);
  return Guard([&] {
    auto in = OpenIn(scores_path);
    auto scores = star::AggregateScoreRows(star::ReadScoresJsonl(in));
    auto ranking = star::MakeRanking(scores, k);
    if (ranking_path) {
      auto out = OpenOut(ranking_path);
      out << star::RankingJson(ranking) << '\n';
    }
    if (selected) *selected = new star_orders{star::SelectTopK(scores, k)};
  });
}

// ---- training objective -----------------------------------------------------

namespace {
std::span<const double> Span(const double* p, size_t n) {
  return n ? std::span<const double>(p, n) : std::span<const double>();
}
}  // namespace

star_status star_loss_balanced(const double* quad, size_t n_quad, const double* pairwise,
                               size_t n_pairwise, const double* overall, size_t n_overall,
                               double* total) {
  STAR_REQUIRE(total && (quad || !n_quad) && (pairwise || !n_pairwise) && (overall || !n_overall));
  return Guard([&] {
    *total = star::BalancedContributionLoss(Span(quad, n_quad), Span(pairwise, n_pairwise),
                                            Span(overall, n_overall))
                 .total;
  });
}

star_status star_loss_pooled(const double* quad, size_t n_quad, const double* pairwise,
                             size_t n_pairwise, const double* overall, size_t n_overall,
                             double* mean) {
  STAR_REQUIRE(mean && (quad || !n_quad) && (pairwise || !n_pairwise) && (overall || !n_overall));
  return Guard([&] {
    *mean = star::PooledSumLoss(Span(quad, n_quad), Span(pairwise, n_pairwise),
                                Span(overall, n_overall));
  });
}

star_status star_loss_check_file(const char* path, star_loss_report* out) {
  STAR_REQUIRE(path && out);
  return Guard([&] {
    auto in = OpenIn(path);
    auto groups = star::ReadLossJsonl(in);
    auto bcl = star::BalancedContributionLoss(groups.quad, groups.pairwise, groups.overall);
    star_loss_report r{};
    r.n_quad = groups.quad.size();
    r.n_pairwise = groups.pairwise.size();
    r.n_overall = groups.overall.size();
    r.quad_mean = bcl.quad_mean;
    r.pairwise_mean = bcl.pairwise_mean;
    r.overall_mean = bcl.overall_mean;
    r.balanced = bcl.total;
    r.pooled = star::PooledSumLoss(groups.quad, groups.pairwise, groups.overall);
    *out = r;
  });
}

// ---- constrained decoding ---------------------------------------------------

void star_decode_options_init(star_decode_options* options) {
  if (!options) return;
  options->provider = "uniform";
  options->seed = 0;
  options->beam = 1;
  options->max_steps = 256;
  options->strict_spans = 0;
  options->jobs = 1;
}

star_status star_decode_write(const star_dataset* dataset, const star_orders* orders,
                              const star_taxonomy* taxonomy, const star_decode_options* options,
                              const char* out_path, size_t* n_rows) {
  STAR_REQUIRE(dataset && orders && taxonomy && options && options->provider && out_path);
  return Guard([&] {
    star::DecodeOptions opts;
    opts.provider = star::ParseProviderKind(options->provider);
    opts.seed = options->seed;
    opts.beam = options->beam;
    opts.max_steps = options->max_steps;
    opts.strict_spans = options->strict_spans != 0;
    opts.jobs = options->jobs;
    auto rows = star::DecodeDataset(dataset->value, orders->value, taxonomy->value, opts);
    auto out = OpenOut(out_path);
    for (const auto& r : rows) out << star::PredictionRowJson(r) << '\n';
    if (n_rows) *n_rows = rows.size();
  });
}

star_status star_validate_sequence(const char* target, const char* sentence_text,
                                   const star_taxonomy* taxonomy, const char* order,
                                   int strict_spans, int* valid, size_t* violation_index) {
  STAR_REQUIRE(target && sentence_text && taxonomy && order && valid);
  return Guard([&] {
    star::DecodingSchema schema(taxonomy->value, star::OrderTemplate::Parse(order),
                                strict_spans != 0);
    auto verdict = star::ValidateSequence(target, InlineSentence(sentence_text), schema);
    *valid = verdict.valid ? 1 : 0;
    if (violation_index) *violation_index = verdict.violation_index;
  });
}

star_status star_validate_predictions(const char* predictions_path, const star_dataset* dataset,
                                      const star_taxonomy* taxonomy, int strict_spans,
                                      const char* report_path, size_t* n_rows,
                                      size_t* n_invalid) {
  STAR_REQUIRE(predictions_path && dataset && taxonomy);
  return Guard([&] {
    auto in = OpenIn(predictions_path);
    auto rows = star::ReadPredictionsJsonl(in);
    auto summary =
        star::ValidatePredictionRows(rows, dataset->value, taxonomy->value, strict_spans != 0);
    if (report_path) {
      auto out = OpenOut(report_path);
      for (const auto& v : summary.invalid) {
        nlohmann::ordered_json j;
        j["row"] = v.row;
        j["source_id"] = v.source_id;
        j["message"] = v.message;
        out << j.dump() << '\n';
      }
    }
    if (n_rows) *n_rows = summary.rows;
    if (n_invalid) *n_invalid = summary.invalid.size();
  });
}

// ---- voting and evaluation --------------------------------------------------

star_status star_vote_write(const char* predictions_path, size_t k, double tau,
                            const char* out_path, star_vote_summary* summary) {
  STAR_REQUIRE(predictions_path && out_path);
  return Guard([&] {
    auto in = OpenIn(predictions_path);
    auto result = star::VotePredictionRows(star::ReadPredictionsJsonl(in), k, tau);
    auto out = OpenOut(out_path);
    size_t n_quads = 0;
    for (const auto& p : result.predictions) {
      out << star::FinalPredictionJson(p) << '\n';
      n_quads += p.quads.size();
    }
    if (summary) {
      *summary = {result.predictions.size(), n_quads, result.k, result.tau,
                  result.malformed_segments};
    }
  });
}

star_status star_eval_files(const char* final_predictions_path, const star_dataset* gold,
                            int missing_as_empty, star_eval_report* out) {
  STAR_REQUIRE(final_predictions_path && gold && out);
  return Guard([&] {
    auto in = OpenIn(final_predictions_path);
    auto report = star::EvaluatePredictions(star::ReadFinalPredictionsJsonl(in), gold->value,
                                            missing_as_empty != 0);
    *out = {report.precision, report.recall, report.f1, report.tp, report.n_pred, report.n_gold};
  });
}

namespace {
star::EvalReport FromC(const star_eval_report& r) {
  return star::EvalReport{r.precision, r.recall, r.f1, r.tp, r.n_pred, r.n_gold};
}
}  // namespace

star_status star_eval_report_json(const star_eval_report* report, char** json_out) {
  STAR_REQUIRE(report && json_out);
  return Guard([&] { *json_out = CopyString(star::EvalReportJson(FromC(*report))); });
}

star_status star_eval_report_table(const star_eval_report* report, char** table_out) {
  STAR_REQUIRE(report && table_out);
  return Guard([&] { *table_out = CopyString(star::EvalReportTable(FromC(*report))); });
}

}  // extern "C"
