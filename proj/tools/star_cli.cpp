// Command-line frontend. Every data operation goes through the C API in
// star/star.h; this file only handles flags, config layering and reporting.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "star/star.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;

// Carries a failing status out of a subcommand.
struct CommandError {
  int exit_code;
  std::string message;
};

void Check(star_status status, const std::string& context) {
  if (status == STAR_OK) return;
  int code = status == STAR_ERR_INTERNAL ? kExitInternal : kExitInput;
  throw CommandError{code, context + ": [" + star_status_name(status) + "] " + star_last_error()};
}

[[noreturn]] void ConfigFail(const std::string& message) {
  throw CommandError{kExitInput, "config: " + message};
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr); }
  T** out() { return &ptr; }
  T* get() const { return ptr; }
};

using Dataset = Handle<star_dataset, star_dataset_free>;
using Taxonomy = Handle<star_taxonomy, star_taxonomy_free>;
using Orders = Handle<star_orders, star_orders_free>;
using Pairwise = Handle<star_pairwise, star_pairwise_free>;

// Resolved run configuration: defaults, then the config file, then flags.
struct RunConfig {
  std::string train;
  std::string data;
  std::string out;
  std::string orders;
  std::string taxonomy;
  std::string element_order = "acos";
  int k = 15;
  double tau = 0.0;  // <= 0 means k / 2
  bool pps = false;
  int pps_k = 15;
  uint64_t pps_seed = 0;
  bool task_quad = true;
  bool task_pairwise = true;
  bool task_overall = true;
  bool strict_spans = false;
  size_t beam = 1;
  size_t max_steps = 256;
  std::string provider = "uniform";
  uint64_t seed = 0;
  size_t jobs = 1;

  nlohmann::ordered_json ToJson() const {
    nlohmann::ordered_json j;
    j["train"] = train;
    j["data"] = data;
    j["out"] = out;
    j["orders"] = orders;
    j["taxonomy"] = taxonomy;
    j["element_order"] = element_order;
    j["k"] = k;
    j["tau"] = tau > 0 ? tau : k / 2.0;
    j["pps"] = pps;
    j["pps_k"] = pps_k;
    j["pps_seed"] = pps_seed;
    j["tasks"] = {{"quad", task_quad}, {"pairwise", task_pairwise}, {"overall", task_overall}};
    j["strict_spans"] = strict_spans;
    j["beam"] = beam;
    j["max_steps"] = max_steps;
    j["provider"] = provider;
    j["seed"] = seed;
    j["jobs"] = jobs;
    return j;
  }
};

class ConfigLayer {
 public:
  explicit ConfigLayer(const std::string& path) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) ConfigFail("cannot open '" + path + "'");
    try {
      json_ = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      ConfigFail(path + ": " + e.what());
    }
    if (!json_.is_object()) ConfigFail(path + ": top level must be an object");
  }

  // Takes the config value for `key` unless the flag was given explicitly.
  template <typename T>
  void Apply(const char* key, const CLI::Option* flag, T& field) const {
    if (flag && flag->count() > 0) return;
    const nlohmann::json* node = Find(key);
    if (!node) return;
    try {
      field = node->get<T>();
    } catch (const nlohmann::json::exception& e) {
      ConfigFail(std::string("key '") + key + "': " + e.what());
    }
  }

 private:
  const nlohmann::json* Find(const char* dotted) const {
    const nlohmann::json* node = &json_;
    std::string key(dotted);
    size_t start = 0;
    while (true) {
      size_t dot = key.find('.', start);
      std::string part = key.substr(start, dot - start);
      if (!node->is_object() || !node->contains(part)) return nullptr;
      node = &(*node)[part];
      if (dot == std::string::npos) return node;
      start = dot + 1;
    }
  }

  nlohmann::json json_ = nlohmann::json::object();
};

void RequireFile(const std::string& path, const char* what) {
  if (path.empty()) ConfigFail(std::string(what) + " is required");
  if (!std::filesystem::exists(path)) ConfigFail(std::string(what) + " '" + path + "' does not exist");
}

void RequireOut(const std::string& path) {
  if (path.empty()) ConfigFail("--out is required");
}

void CheckK(int k) {
  if (k < 1 || k > 24) ConfigFail("k must be in [1, 24], got " + std::to_string(k));
}

void WriteSnapshot(const RunConfig& cfg, const std::string& command) {
  auto j = cfg.ToJson();
  j["command"] = command;
  j["library_version"] = star_version();
  std::ofstream out(cfg.out + ".config.json");
  if (!out) throw CommandError{kExitInput, "cannot write config snapshot next to " + cfg.out};
  out << j.dump(2) << '\n';
}

void LoadDataset(const std::string& path, Dataset& d) {
  Check(star_dataset_read_jsonl(path.c_str(), d.out()), "reading " + path);
}

// Taxonomy from an explicit file, else from the training split.
void LoadTaxonomy(const RunConfig& cfg, Taxonomy& t) {
  if (!cfg.taxonomy.empty()) {
    RequireFile(cfg.taxonomy, "taxonomy");
    Check(star_taxonomy_from_file(cfg.taxonomy.c_str(), t.out()), "reading taxonomy");
    return;
  }
  RequireFile(cfg.train, "--train (or --taxonomy)");
  Dataset train;
  LoadDataset(cfg.train, train);
  Check(star_taxonomy_from_dataset(train.get(), t.out()), "building taxonomy");
}

// Orders from a ranking report when given, else the toy-scored top k over
// `scoring_set`.
void LoadOrders(const RunConfig& cfg, const star_dataset* scoring_set, Orders& o) {
  CheckK(cfg.k);
  if (!cfg.orders.empty()) {
    RequireFile(cfg.orders, "orders");
    Check(star_orders_read_ranking(cfg.orders.c_str(), static_cast<size_t>(cfg.k), o.out()),
          "reading orders");
    return;
  }
  std::cerr << "no --orders ranking given; selecting top " << cfg.k
            << " orders with the built-in hash scorer\n";
  Check(star_orders_toy_top_k(scoring_set, static_cast<size_t>(cfg.k), o.out()),
        "selecting orders");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"star: stepwise task augmentation, constrained decoding, voting and exact-match "
               "evaluation for aspect sentiment quad prediction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(star_version()));

  RunConfig cfg;
  std::string config_path;
  bool json_output = false;
  bool missing_as_empty = false;
  std::string raw_path, scores_path, predictions_path, gold_path, losses_path, report_path;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run config; flags override its keys");
  };

  // ---- ingest
  auto* ingest = app.add_subcommand("ingest", "Parse a ####-separated dataset file to canonical JSONL");
  ingest->add_option("raw", raw_path, "Input file (<text>####<quad list> per line)")->required();
  auto* ingest_out = ingest->add_option("-o,--out", cfg.out, "Canonical JSONL output");
  auto* ingest_order = ingest->add_option(
      "--element-order", cfg.element_order,
      "In-file element positions as a permutation of 'acos' (default acos)");
  auto* ingest_tax = ingest->add_option("--taxonomy", cfg.taxonomy,
                                        "Category list; every quad category must be in it");
  ingest->add_flag("--json", json_output, "Print the stats as JSON");
  add_config(ingest);

  // ---- stats
  auto* stats = app.add_subcommand("stats", "Sentence and quad counts of a canonical JSONL file");
  stats->add_option("data", cfg.data, "Canonical JSONL")->required();
  stats->add_flag("--json", json_output, "Print JSON instead of a table");

  // ---- score-orders
  auto* score = app.add_subcommand(
      "score-orders", "Write per-(order, sentence) scores JSONL using the built-in hash scorer");
  auto* score_train = score->add_option("--train", cfg.train, "Canonical training JSONL");
  auto* score_out = score->add_option("-o,--out", cfg.out, "Scores JSONL output");
  add_config(score);

  // ---- select-orders
  auto* select = app.add_subcommand("select-orders", "Rank orders by mean score and keep the top k");
  select->add_option("--scores", scores_path, "Scores JSONL ({order, source_id, score})")->required();
  auto* select_k = select->add_option("-k,--k", cfg.k, "Number of orders to keep (1-24, default 15)");
  auto* select_out = select->add_option("-o,--out", cfg.out, "Ranking report JSON output");
  add_config(select);

  // ---- augment
  auto* augment = app.add_subcommand("augment", "Build the multi-task training corpus JSONL");
  auto* aug_train = augment->add_option("--train", cfg.train, "Canonical training JSONL");
  auto* aug_out = augment->add_option("-o,--out", cfg.out, "Corpus JSONL output");
  auto* aug_orders = augment->add_option("--orders", cfg.orders, "Ranking report from select-orders");
  auto* aug_k = augment->add_option("-k,--k", cfg.k, "Quad orders to use (1-24, default 15)");
  auto* aug_pps = augment->add_flag("--pps,!--no-pps", cfg.pps,
                                    "Sample k pairwise candidates instead of all 16");
  auto* aug_pps_k = augment->add_option("--pps-k", cfg.pps_k,
                                       "Pairwise candidates kept by sampling (4-16, default 15)");
  auto* aug_seed = augment->add_option("--pps-seed", cfg.pps_seed, "Seed for pairwise sampling");
  auto* aug_quad = augment->add_flag("--quad,!--no-quad", cfg.task_quad, "Emit quad instances");
  auto* aug_pair = augment->add_flag("--pairwise,!--no-pairwise", cfg.task_pairwise,
                                     "Emit pairwise instances");
  auto* aug_overall = augment->add_flag("--overall,!--no-overall", cfg.task_overall,
                                        "Emit overall instances");
  add_config(augment);

  // ---- decode
  auto* decode = app.add_subcommand("decode", "Constrained generation for every (sentence, order)");
  auto* dec_data = decode->add_option("--data", cfg.data, "Canonical JSONL to decode");
  auto* dec_train = decode->add_option("--train", cfg.train,
                                       "Training JSONL (taxonomy and order scoring source)");
  auto* dec_out = decode->add_option("-o,--out", cfg.out, "Predictions JSONL output");
  auto* dec_orders = decode->add_option("--orders", cfg.orders, "Ranking report from select-orders");
  auto* dec_k = decode->add_option("-k,--k", cfg.k, "Orders to decode (1-24, default 15)");
  auto* dec_tax = decode->add_option("--taxonomy", cfg.taxonomy, "Category list file");
  auto* dec_provider = decode->add_option("--provider", cfg.provider,
                                          "Next-token provider: gold | uniform (default uniform)");
  auto* dec_seed = decode->add_option("--seed", cfg.seed, "Provider seed");
  auto* dec_beam = decode->add_option("--beam", cfg.beam, "Beam width (default 1)");
  auto* dec_steps = decode->add_option("--max-steps", cfg.max_steps,
                                       "Tokens before forced completion (default 256)");
  auto* dec_strict = decode->add_flag("--strict-spans", cfg.strict_spans,
                                      "Require contiguous aspect/opinion spans");
  auto* dec_jobs = decode->add_option("-j,--jobs", cfg.jobs, "Worker threads (default 1)");
  add_config(decode);

  // ---- validate
  auto* validate = app.add_subcommand("validate", "Check predictions JSONL against the decoding schema");
  validate->add_option("--predictions", predictions_path, "Predictions JSONL")->required();
  auto* val_data = validate->add_option("--data", cfg.data, "Canonical JSONL of the sentences");
  auto* val_train = validate->add_option("--train", cfg.train, "Training JSONL (taxonomy source)");
  auto* val_tax = validate->add_option("--taxonomy", cfg.taxonomy, "Category list file");
  auto* val_strict = validate->add_flag("--strict-spans", cfg.strict_spans,
                                        "Require contiguous aspect/opinion spans");
  validate->add_option("--report", report_path, "Write invalid rows as JSONL here");
  add_config(validate);

  // ---- vote
  auto* vote = app.add_subcommand("vote", "Aggregate per-order predictions by threshold voting");
  vote->add_option("--predictions", predictions_path, "Predictions JSONL")->required();
  auto* vote_out = vote->add_option("-o,--out", cfg.out, "Final predictions JSONL output");
  auto* vote_k = vote->add_option("-k,--k", cfg.k, "Views per sentence (default: inferred)");
  auto* vote_tau = vote->add_option("--tau", cfg.tau, "Vote threshold (default k/2)");
  add_config(vote);

  // ---- eval
  auto* eval = app.add_subcommand("eval", "Exact-match precision / recall / F1");
  eval->add_option("--predictions", predictions_path, "Final predictions JSONL")->required();
  eval->add_option("--gold", gold_path, "Canonical gold JSONL")->required();
  eval->add_flag("--missing-as-empty", missing_as_empty,
                 "Gold sentences without a prediction row count as empty predictions");
  eval->add_flag("--json", json_output, "Print the report as JSON");
  eval->add_option("-o,--out", cfg.out, "Also write the JSON report here");

  // ---- loss-check
  auto* loss = app.add_subcommand("loss-check",
                                  "Balanced and pooled objectives over dumped per-instance losses");
  loss->add_option("losses", losses_path, "JSONL of {task, loss}")->required();
  loss->add_flag("--json", json_output, "Print JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    ConfigLayer layer(config_path);

    if (ingest->parsed()) {
      layer.Apply("element_order", ingest_order, cfg.element_order);
      layer.Apply("taxonomy", ingest_tax, cfg.taxonomy);
      (void)ingest_out;
      Taxonomy tax;
      if (!cfg.taxonomy.empty()) {
        RequireFile(cfg.taxonomy, "taxonomy");
        Check(star_taxonomy_from_file(cfg.taxonomy.c_str(), tax.out()), "reading taxonomy");
      }
      RequireFile(raw_path, "input file");
      Dataset d;
      Check(star_dataset_read_raw(raw_path.c_str(), cfg.element_order.c_str(), tax.get(), d.out()),
            "ingesting " + raw_path);
      if (!cfg.out.empty()) Check(star_dataset_write_jsonl(d.get(), cfg.out.c_str()), "writing");
      size_t n_s = 0, n_q = 0;
      Check(star_dataset_stats(d.get(), &n_s, &n_q), "stats");
      if (json_output) {
        std::cout << nlohmann::json{{"n_sentences", n_s}, {"n_quads", n_q}}.dump() << '\n';
      } else {
        std::cout << n_s << " sentences, " << n_q << " quads\n";
      }
      return kExitOk;
    }

    if (stats->parsed()) {
      RequireFile(cfg.data, "input");
      Dataset d;
      LoadDataset(cfg.data, d);
      size_t n_s = 0, n_q = 0;
      Check(star_dataset_stats(d.get(), &n_s, &n_q), "stats");
      if (json_output) {
        std::cout << nlohmann::json{{"n_sentences", n_s}, {"n_quads", n_q}}.dump() << '\n';
      } else {
        std::printf("%-10s %zu\n%-10s %zu\n", "#S", n_s, "#Q", n_q);
      }
      return kExitOk;
    }

    if (score->parsed()) {
      layer.Apply("train", score_train, cfg.train);
      layer.Apply("scores", score_out, cfg.out);
      RequireFile(cfg.train, "--train");
      RequireOut(cfg.out);
      Dataset d;
      LoadDataset(cfg.train, d);
      size_t rows = 0;
      Check(star_scores_write_toy(d.get(), nullptr, cfg.out.c_str(), &rows), "scoring orders");
      std::cerr << "wrote " << rows << " score rows (toy-hash scorer) to " << cfg.out << '\n';
      return kExitOk;
    }

    if (select->parsed()) {
      layer.Apply("k", select_k, cfg.k);
      layer.Apply("orders", select_out, cfg.out);
      CheckK(cfg.k);
      RequireFile(scores_path, "--scores");
      Orders selected;
      Check(star_select_orders(scores_path.c_str(), static_cast<size_t>(cfg.k),
                               cfg.out.empty() ? nullptr : cfg.out.c_str(), selected.out()),
            "selecting orders");
      for (size_t i = 0; i < star_orders_count(selected.get()); ++i) {
        std::cout << star_orders_surface(selected.get(), i) << '\n';
      }
      return kExitOk;
    }

    if (augment->parsed()) {
      layer.Apply("train", aug_train, cfg.train);
      layer.Apply("corpus", aug_out, cfg.out);
      layer.Apply("orders", aug_orders, cfg.orders);
      layer.Apply("k", aug_k, cfg.k);
      layer.Apply("pps", aug_pps, cfg.pps);
      layer.Apply("pps_k", aug_pps_k, cfg.pps_k);
      layer.Apply("pps_seed", aug_seed, cfg.pps_seed);
      layer.Apply("tasks.quad", aug_quad, cfg.task_quad);
      layer.Apply("tasks.pairwise", aug_pair, cfg.task_pairwise);
      layer.Apply("tasks.overall", aug_overall, cfg.task_overall);
      RequireFile(cfg.train, "--train");
      RequireOut(cfg.out);
      CheckK(cfg.k);
      if (cfg.pps && (cfg.pps_k < 4 || cfg.pps_k > 16)) {
        ConfigFail("pps_k must be in [4, 16], got " + std::to_string(cfg.pps_k));
      }
      Dataset d;
      LoadDataset(cfg.train, d);
      Orders orders;
      if (cfg.task_quad) {
        LoadOrders(cfg, d.get(), orders);
      } else {
        Check(star_orders_parse(nullptr, 0, orders.out()), "orders");
      }
      Pairwise pairwise;
      if (cfg.task_pairwise) {
        if (cfg.pps) {
          Check(star_pairwise_pps(static_cast<size_t>(cfg.pps_k), cfg.pps_seed,
                                  pairwise.out()),
                "pairwise sampling");
        } else {
          Check(star_pairwise_all(pairwise.out()), "pairwise candidates");
        }
      }
      star_corpus_counts counts{};
      Check(star_augment_write(d.get(), orders.get(), pairwise.get(), cfg.task_overall ? 1 : 0,
                               cfg.out.c_str(), &counts),
            "writing corpus");
      WriteSnapshot(cfg, "augment");
      std::cout << "quad " << counts.quad << "\npairwise " << counts.pairwise << "\noverall "
                << counts.overall << "\ntotal " << counts.quad + counts.pairwise + counts.overall
                << '\n';
      return kExitOk;
    }

    if (decode->parsed()) {
      layer.Apply("data", dec_data, cfg.data);
      layer.Apply("train", dec_train, cfg.train);
      layer.Apply("predictions", dec_out, cfg.out);
      layer.Apply("orders", dec_orders, cfg.orders);
      layer.Apply("k", dec_k, cfg.k);
      layer.Apply("taxonomy", dec_tax, cfg.taxonomy);
      layer.Apply("provider", dec_provider, cfg.provider);
      layer.Apply("seed", dec_seed, cfg.seed);
      layer.Apply("beam", dec_beam, cfg.beam);
      layer.Apply("max_steps", dec_steps, cfg.max_steps);
      layer.Apply("strict_spans", dec_strict, cfg.strict_spans);
      layer.Apply("jobs", dec_jobs, cfg.jobs);
      RequireFile(cfg.data, "--data");
      RequireOut(cfg.out);
      if (cfg.beam < 1) ConfigFail("beam must be >= 1");
      Dataset d;
      LoadDataset(cfg.data, d);
      Taxonomy tax;
      LoadTaxonomy(cfg, tax);
      Orders orders;
      if (cfg.orders.empty()) {
        RequireFile(cfg.train, "--train (or --orders)");
        Dataset train;
        LoadDataset(cfg.train, train);
        LoadOrders(cfg, train.get(), orders);
      } else {
        LoadOrders(cfg, nullptr, orders);
      }
      star_decode_options opts;
      star_decode_options_init(&opts);
      opts.provider = cfg.provider.c_str();
      opts.seed = cfg.seed;
      opts.beam = cfg.beam;
      opts.max_steps = cfg.max_steps;
      opts.strict_spans = cfg.strict_spans ? 1 : 0;
      opts.jobs = cfg.jobs;
      size_t rows = 0;
      Check(star_decode_write(d.get(), orders.get(), tax.get(), &opts, cfg.out.c_str(), &rows),
            "decoding");
      WriteSnapshot(cfg, "decode");
      std::cerr << "wrote " << rows << " predictions (" << star_orders_count(orders.get())
                << " orders) to " << cfg.out << '\n';
      return kExitOk;
    }

    if (validate->parsed()) {
      layer.Apply("data", val_data, cfg.data);
      layer.Apply("train", val_train, cfg.train);
      layer.Apply("taxonomy", val_tax, cfg.taxonomy);
      layer.Apply("strict_spans", val_strict, cfg.strict_spans);
      RequireFile(predictions_path, "--predictions");
      RequireFile(cfg.data, "--data");
      Dataset d;
      LoadDataset(cfg.data, d);
      Taxonomy tax;
      LoadTaxonomy(cfg, tax);
      size_t rows = 0, invalid = 0;
      Check(star_validate_predictions(predictions_path.c_str(), d.get(), tax.get(),
                                      cfg.strict_spans ? 1 : 0,
                                      report_path.empty() ? nullptr : report_path.c_str(), &rows,
                                      &invalid),
            "validating");
      std::cout << rows << " rows, " << invalid << " invalid\n";
      return invalid == 0 ? kExitOk : kExitInput;
    }

    if (vote->parsed()) {
      layer.Apply("final_predictions", vote_out, cfg.out);
      layer.Apply("tau", vote_tau, cfg.tau);
      size_t k = 0;
      if (vote_k->count() > 0) {
        CheckK(cfg.k);
        k = static_cast<size_t>(cfg.k);
      }
      if (vote_tau->count() > 0 && !(cfg.tau > 0)) ConfigFail("tau must be > 0");
      RequireFile(predictions_path, "--predictions");
      RequireOut(cfg.out);
      star_vote_summary summary{};
      Check(star_vote_write(predictions_path.c_str(), k, cfg.tau, cfg.out.c_str(), &summary),
            "voting");
      cfg.k = static_cast<int>(summary.k);
      cfg.tau = summary.tau;
      WriteSnapshot(cfg, "vote");
      std::cerr << "k=" << summary.k << " tau=" << summary.tau << " sentences="
                << summary.n_sentences << " quads=" << summary.n_quads
                << " malformed_segments=" << summary.malformed_segments << '\n';
      return kExitOk;
    }

    if (eval->parsed()) {
      RequireFile(predictions_path, "--predictions");
      RequireFile(gold_path, "--gold");
      Dataset gold;
      LoadDataset(gold_path, gold);
      star_eval_report report{};
      Check(star_eval_files(predictions_path.c_str(), gold.get(), missing_as_empty ? 1 : 0,
                            &report),
            "evaluating");
      char* json = nullptr;
      Check(star_eval_report_json(&report, &json), "report");
      std::string json_text(json);
      star_string_free(json);
      if (!cfg.out.empty()) {
        std::ofstream out(cfg.out);
        if (!out) throw CommandError{kExitInput, "cannot write '" + cfg.out + "'"};
        out << json_text << '\n';
      }
      if (json_output) {
        std::cout << json_text << '\n';
      } else {
        char* table = nullptr;
        Check(star_eval_report_table(&report, &table), "report");
        std::cout << table;
        star_string_free(table);
      }
      return kExitOk;
    }

    if (loss->parsed()) {
      RequireFile(losses_path, "losses file");
      star_loss_report r{};
      Check(star_loss_check_file(losses_path.c_str(), &r), "loss-check");
      if (json_output) {
        nlohmann::ordered_json j;
        j["n_quad"] = r.n_quad;
        j["n_pairwise"] = r.n_pairwise;
        j["n_overall"] = r.n_overall;
        j["quad_mean"] = r.quad_mean;
        j["pairwise_mean"] = r.pairwise_mean;
        j["overall_mean"] = r.overall_mean;
        j["balanced"] = r.balanced;
        j["pooled"] = r.pooled;
        std::cout << j.dump(2) << '\n';
      } else {
        std::printf("balanced %.17g\npooled   %.17g\n", r.balanced, r.pooled);
      }
      return kExitOk;
    }
  } catch (const CommandError& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}
