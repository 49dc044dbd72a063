/*
 * C interface to the star library: stepwise task augmentation, constrained
 * decoding, vote aggregation and exact-match evaluation for aspect sentiment
 * quad prediction.
 *
 * Every fallible call returns a star_status. On failure the message for the
 * calling thread is available from star_last_error() until the next failing
 * call on that thread. Handles are opaque and owned by the caller; release
 * each one with its matching *_free function (NULL is accepted). Strings
 * returned through char** must be released with star_string_free(). Strings
 * returned as const char* are owned by the handle they came from.
 */
#ifndef STAR_STAR_H_
#define STAR_STAR_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(STAR_BUILDING_LIBRARY)
#    define STAR_API __declspec(dllexport)
#  else
#    define STAR_API __declspec(dllimport)
#  endif
#else
#  define STAR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum star_status {
  STAR_OK = 0,
  STAR_ERR_INVALID_ARGUMENT = 1,
  STAR_ERR_MAPPING = 2,
  STAR_ERR_PARSE = 3,
  STAR_ERR_RANGE = 4,
  STAR_ERR_RENDER = 5,
  STAR_ERR_EMPTY_GROUP = 6,
  STAR_ERR_AUTOMATON = 7,
  STAR_ERR_DEAD_END = 8,
  STAR_ERR_ALIGNMENT = 9,
  STAR_ERR_IO = 10,
  STAR_ERR_CONFIG = 11,
  STAR_ERR_NON_FINITE = 12,
  STAR_ERR_INTERNAL = 99
} star_status;

STAR_API const char* star_version(void);
STAR_API const char* star_status_name(star_status status);
STAR_API const char* star_last_error(void);
STAR_API void star_string_free(char* s);

/* ---- datasets ---------------------------------------------------------- */

typedef struct star_dataset star_dataset;
typedef struct star_taxonomy star_taxonomy;

/* Reads a `<text>####<quad list>` file. element_order is a permutation of
 * "acos" giving the in-file element positions (NULL means "acos"). When
 * taxonomy is non-NULL every category must belong to it. */
STAR_API star_status star_dataset_read_raw(const char* path, const char* element_order,
                                           const star_taxonomy* taxonomy, star_dataset** out);
STAR_API star_status star_dataset_read_jsonl(const char* path, star_dataset** out);
STAR_API star_status star_dataset_write_jsonl(const star_dataset* dataset, const char* path);
STAR_API star_status star_dataset_stats(const star_dataset* dataset, size_t* n_sentences,
                                        size_t* n_quads);
STAR_API void star_dataset_free(star_dataset* dataset);

STAR_API star_status star_taxonomy_from_file(const char* path, star_taxonomy** out);
STAR_API star_status star_taxonomy_from_dataset(const star_dataset* dataset, star_taxonomy** out);
STAR_API size_t star_taxonomy_size(const star_taxonomy* taxonomy);
STAR_API void star_taxonomy_free(star_taxonomy* taxonomy);

/* ---- quads and rendering ---------------------------------------------- */

/* Label-space quad. aspect / opinion use "NULL" for implicit terms; polarity
 * is "positive", "negative" or "neutral". */
typedef struct star_quad {
  const char* aspect;
  const char* category;
  const char* opinion;
  const char* polarity;
} star_quad;

typedef struct star_quads star_quads;

STAR_API size_t star_quads_count(const star_quads* quads);
/* Fills *out with pointers owned by the handle. */
STAR_API star_status star_quads_get(const star_quads* quads, size_t index, star_quad* out);
STAR_API void star_quads_free(star_quads* quads);

/* input_out / target_out receive newly allocated strings. */
STAR_API star_status star_render_quad(const char* text, const star_quad* quads, size_t n_quads,
                                      const char* order, char** input_out, char** target_out);
STAR_API star_status star_render_pairwise(const char* text, const star_quad* quads,
                                          size_t n_quads, const char* candidate,
                                          char** input_out, char** target_out);
STAR_API star_status star_render_overall(const char* text, const star_quad* quads,
                                         size_t n_quads, char** input_out, char** target_out);

/* Parses a generated quad target. Malformed segments are dropped and counted
 * in *n_diagnostics (may be NULL). */
STAR_API star_status star_parse_target(const char* target, const char* order, star_quads** out,
                                       size_t* n_diagnostics);

/* ---- prediction orders and pairwise candidates ------------------------ */

typedef struct star_orders star_orders;
typedef struct star_pairwise star_pairwise;

STAR_API star_status star_orders_all(star_orders** out);
STAR_API star_status star_orders_parse(const char* const* surfaces, size_t n, star_orders** out);
/* Orders from a ranking report, in rank order; k = 0 keeps all of them. */
STAR_API star_status star_orders_read_ranking(const char* path, size_t k, star_orders** out);
/* Top-k orders under the built-in hash scorer over the dataset. */
STAR_API star_status star_orders_toy_top_k(const star_dataset* dataset, size_t k,
                                           star_orders** out);
STAR_API size_t star_orders_count(const star_orders* orders);
STAR_API const char* star_orders_surface(const star_orders* orders, size_t index);
STAR_API void star_orders_free(star_orders* orders);

STAR_API star_status star_pairwise_all(star_pairwise** out);
/* Pairwise permutation sampling: 4 base + (k - 4) seeded composites, 4 <= k <= 16. */
STAR_API star_status star_pairwise_pps(size_t k, uint64_t seed, star_pairwise** out);
STAR_API size_t star_pairwise_count(const star_pairwise* pairwise);
STAR_API const char* star_pairwise_surface(const star_pairwise* pairwise, size_t index);
STAR_API void star_pairwise_free(star_pairwise* pairwise);

/* ---- augmentation ----------------------------------------------------- */

typedef struct star_corpus_counts {
  size_t quad;
  size_t pairwise;
  size_t overall;
} star_corpus_counts;

/* Writes the augmented corpus JSONL. pairwise may be NULL to skip the
 * pairwise task. counts may be NULL. */
STAR_API star_status star_augment_write(const star_dataset* dataset, const star_orders* orders,
                                        const star_pairwise* pairwise, int include_overall,
                                        const char* out_path, star_corpus_counts* counts);

/* ---- order selection -------------------------------------------------- */

/* Scores JSONL rows from the built-in hash scorer. orders NULL means all 24. */
STAR_API star_status star_scores_write_toy(const star_dataset* dataset, const star_orders* orders,
                                           const char* out_path, size_t* n_rows);
/* Mean score per order from a scores JSONL, then top-k. Writes the ranking
 * report when ranking_path is non-NULL; *selected receives the orders when
 * non-NULL. */
STAR_API star_status star_select_orders(const char* scores_path, size_t k,
                                        const char* ranking_path, star_orders** selected);

/* ---- training objective ---------------------------------------------- */

STAR_API star_status star_loss_balanced(const double* quad, size_t n_quad, const double* pairwise,
                                        size_t n_pairwise, const double* overall,
                                        size_t n_overall, double* total);
STAR_API star_status star_loss_pooled(const double* quad, size_t n_quad, const double* pairwise,
                                      size_t n_pairwise, const double* overall, size_t n_overall,
                                      double* mean);

typedef struct star_loss_report {
  size_t n_quad;
  size_t n_pairwise;
  size_t n_overall;
  double quad_mean;
  double pairwise_mean;
  double overall_mean;
  double balanced;
  double pooled;
} star_loss_report;

/* Reads `{"task": ..., "loss": ...}` JSONL and evaluates both objectives. */
STAR_API star_status star_loss_check_file(const char* path, star_loss_report* out);

/* ---- constrained decoding --------------------------------------------- */

typedef struct star_decode_options {
  const char* provider; /* "gold" or "uniform" */
  uint64_t seed;
  size_t beam;
  size_t max_steps;
  int strict_spans;
  size_t jobs;
} star_decode_options;

STAR_API void star_decode_options_init(star_decode_options* options);

/* Writes predictions JSONL, one row per (sentence, order). */
STAR_API star_status star_decode_write(const star_dataset* dataset, const star_orders* orders,
                                       const star_taxonomy* taxonomy,
                                       const star_decode_options* options, const char* out_path,
                                       size_t* n_rows);

/* Quad-mode validation of one sequence. *violation_index is the first
 * offending token (the token count when the sequence stops early). */
STAR_API star_status star_validate_sequence(const char* target, const char* sentence_text,
                                            const star_taxonomy* taxonomy, const char* order,
                                            int strict_spans, int* valid,
                                            size_t* violation_index);

/* Validates every row of a predictions JSONL. Invalid rows are written as
 * JSONL to report_path when it is non-NULL. */
STAR_API star_status star_validate_predictions(const char* predictions_path,
                                               const star_dataset* dataset,
                                               const star_taxonomy* taxonomy, int strict_spans,
                                               const char* report_path, size_t* n_rows,
                                               size_t* n_invalid);

/* ---- voting and evaluation -------------------------------------------- */

typedef struct star_vote_summary {
  size_t n_sentences;
  size_t n_quads;
  size_t k;
  double tau;
  size_t malformed_segments;
} star_vote_summary;

/* k = 0 infers the view count from the file; tau <= 0 means k / 2. */
STAR_API star_status star_vote_write(const char* predictions_path, size_t k, double tau,
                                     const char* out_path, star_vote_summary* summary);

typedef struct star_eval_report {
  double precision;
  double recall;
  double f1;
  size_t tp;
  size_t n_pred;
  size_t n_gold;
} star_eval_report;

STAR_API star_status star_eval_files(const char* final_predictions_path, const star_dataset* gold,
                                     int missing_as_empty, star_eval_report* out);
STAR_API star_status star_eval_report_json(const star_eval_report* report, char** json_out);
STAR_API star_status star_eval_report_table(const star_eval_report* report, char** table_out);

#ifdef __cplusplus
}
#endif

#endif /* STAR_STAR_H_ */
