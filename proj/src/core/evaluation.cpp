#include "star/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <iterator>

#include <json.hpp>

namespace star {

EvalReport ScoreExactMatch(const QuadSets& pred, const QuadSets& gold) {
  std::vector<std::string> only_pred, only_gold;
  for (const auto& [id, _] : pred)
    if (!gold.contains(id)) only_pred.push_back(id);
  for (const auto& [id, _] : gold)
    if (!pred.contains(id)) only_gold.push_back(id);
  if (!only_pred.empty() || !only_gold.empty()) {
    std::string msg = "prediction and gold sentence ids differ;";
    auto list = [&msg](const char* label, const std::vector<std::string>& ids) {
      if (ids.empty()) return;
      msg += std::string(" ") + label + ":";
      for (size_t i = 0; i < ids.size() && i < 10; ++i) msg += " " + ids[i];
      if (ids.size() > 10) msg += " ... (" + std::to_string(ids.size()) + " total)";
    };
    list("only in predictions", only_pred);
    list("only in gold", only_gold);
    throw Error(ErrorCode::kAlignment, msg);
  }

  EvalReport r;
  for (const auto& [id, gold_set] : gold) {
    const auto& pred_set = pred.at(id);
    std::vector<Quad> common;
    std::set_intersection(pred_set.begin(), pred_set.end(), gold_set.begin(), gold_set.end(),
                          std::back_inserter(common));
    r.tp += common.size();
    r.n_pred += pred_set.size();
    r.n_gold += gold_set.size();
  }
  r.precision = r.n_pred ? static_cast<double>(r.tp) / static_cast<double>(r.n_pred) : 0.0;
  r.recall = r.n_gold ? static_cast<double>(r.tp) / static_cast<double>(r.n_gold) : 0.0;
  r.f1 = r.precision + r.recall > 0.0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

QuadSets ToQuadSets(const std::map<std::string, std::vector<Quad>>& lists) {
  QuadSets out;
  for (const auto& [id, quads] : lists) out[id] = {quads.begin(), quads.end()};
  return out;
}

std::string EvalReportJson(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["averaging"] = "micro";
  j["matching"] = "exact, set semantics per sentence";
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["f1"] = r.f1;
  j["tp"] = r.tp;
  j["n_pred"] = r.n_pred;
  j["n_gold"] = r.n_gold;
  return j.dump(2);
}

std::string EvalReportTable(const EvalReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "# exact match, micro-averaged\n"
                "precision  %.4f\nrecall     %.4f\nf1         %.4f\n"
                "tp         %zu\npredicted  %zu\ngold       %zu\n",
                r.precision, r.recall, r.f1, r.tp, r.n_pred, r.n_gold);
  return buf;
}

}  // namespace star
