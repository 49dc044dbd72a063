#include "star/order_selection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <json.hpp>

#include "star/rng.hpp"

namespace star {

double ToyScoreProvider::Score(std::string_view input, std::string_view target) const {
  uint64_t h = Fnv1a(input, 0xcbf29ce484222325ULL ^ salt_);
  h = Fnv1a("\x1f", h);
  h = Fnv1a(target, h);
  return -5.0 * static_cast<double>(h >> 11) * 0x1.0p-53;
}

OrderScore ScoreOrder(const OrderTemplate& t, const Dataset& d,
                      const SequenceScoreProvider& provider) {
  double sum = 0.0;
  size_t usable = 0;
  for (const auto& s : d.sentences) {
    if (s.quads.empty()) continue;
    TaskInstance inst = RenderQuadInstance(s.sentence, s.quads, t);
    double v = provider.Score(inst.input, inst.target);
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFinite, "provider returned a non-finite score for sentence '" +
                                             s.sentence.id + "' under order " + t.surface());
    }
    sum += v;
    ++usable;
  }
  if (usable == 0) {
    throw Error(ErrorCode::kEmptyGroup, "cannot score order " + t.surface() +
                                            ": dataset has no sentence with quads");
  }
  return OrderScore{t, sum / static_cast<double>(usable)};
}

std::vector<OrderScore> RankScores(std::vector<OrderScore> scores) {
  std::sort(scores.begin(), scores.end(), [](const OrderScore& a, const OrderScore& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.order.surface() < b.order.surface();
  });
  return scores;
}

std::vector<OrderTemplate> SelectTopK(const std::vector<OrderScore>& scores, size_t k) {
  if (k < 1 || k > scores.size()) {
    throw Error(ErrorCode::kRange, "k must be in [1, " + std::to_string(scores.size()) +
                                       "], got " + std::to_string(k));
  }
  std::set<std::string> seen;
  for (const auto& s : scores) {
    if (!seen.insert(s.order.surface()).second) {
      throw Error(ErrorCode::kConfig, "order " + s.order.surface() + " is scored twice");
    }
  }
  auto ranked = RankScores(scores);
  std::vector<OrderTemplate> out;
  out.reserve(k);
  for (size_t i = 0; i < k; ++i) out.push_back(ranked[i].order);
  return out;
}

std::vector<ScoreRow> ReadScoresJsonl(std::istream& in) {
  std::vector<ScoreRow> rows;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (Trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      ScoreRow r{j.at("order").get<std::string>(), j.at("source_id").get<std::string>(),
                 j.at("score").get<double>()};
      // Normalise the surface so "ACOS" and "[A][C][O][S]" group together.
      r.order = OrderTemplate::Parse(r.order).surface();
      rows.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, "scores line " + std::to_string(line_number) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, "scores line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return rows;
}

void WriteScoresJsonl(const std::vector<ScoreRow>& rows, std::ostream& out) {
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["order"] = r.order;
    j["source_id"] = r.source_id;
    j["score"] = r.score;
    out << j.dump() << '\n';
  }
}

std::vector<ScoreRow> ComputeScoreRows(const Dataset& d, const std::vector<OrderTemplate>& orders,
                                       const SequenceScoreProvider& provider) {
  std::vector<ScoreRow> rows;
  for (const auto& t : orders) {
    for (const auto& s : d.sentences) {
      if (s.quads.empty()) continue;
      TaskInstance inst = RenderQuadInstance(s.sentence, s.quads, t);
      rows.push_back({t.surface(), s.sentence.id, provider.Score(inst.input, inst.target)});
    }
  }
  return rows;
}

std::vector<OrderScore> AggregateScoreRows(const std::vector<ScoreRow>& rows) {
  // order -> (source_id -> score); std::map gives a fixed summation order.
  std::map<std::string, std::map<std::string, double>> grouped;
  for (const auto& r : rows) {
    if (!std::isfinite(r.score)) {
      throw Error(ErrorCode::kNonFinite,
                  "non-finite score for sentence '" + r.source_id + "' under order " + r.order);
    }
    if (!grouped[r.order].emplace(r.source_id, r.score).second) {
      throw Error(ErrorCode::kParse,
                  "duplicate score row for order " + r.order + ", sentence '" + r.source_id + "'");
    }
  }
  if (grouped.empty()) throw Error(ErrorCode::kEmptyGroup, "scores file has no rows");

  const auto& reference = grouped.begin()->second;
  std::vector<OrderScore> out;
  for (const auto& [order, per_sentence] : grouped) {
    if (per_sentence.size() != reference.size() ||
        !std::equal(per_sentence.begin(), per_sentence.end(), reference.begin(),
                    [](const auto& a, const auto& b) { return a.first == b.first; })) {
      throw Error(ErrorCode::kParse, "order " + order + " covers a different sentence set than " +
                                         grouped.begin()->first);
    }
    double sum = 0.0;
    for (const auto& [id, v] : per_sentence) sum += v;
    out.push_back({OrderTemplate::Parse(order), sum / static_cast<double>(per_sentence.size())});
  }
  return out;
}

std::vector<RankingEntry> MakeRanking(const std::vector<OrderScore>& scores, size_t k) {
  auto selected = SelectTopK(scores, k);
  auto ranked = RankScores(scores);
  std::vector<RankingEntry> out;
  for (size_t i = 0; i < selected.size(); ++i) {
    out.push_back({ranked[i].order.surface(), ranked[i].score, i + 1});
  }
  return out;
}

std::string RankingJson(const std::vector<RankingEntry>& ranking) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& e : ranking) {
    nlohmann::ordered_json j;
    j["order"] = e.order;
    j["mean_score"] = e.mean_score;
    j["rank"] = e.rank;
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

std::vector<OrderTemplate> ReadRankingJson(std::istream& in) {
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("ranking: ") + e.what());
  }
  if (!arr.is_array() || arr.empty()) {
    throw Error(ErrorCode::kParse, "ranking must be a non-empty JSON array");
  }
  std::vector<std::pair<size_t, OrderTemplate>> entries;
  for (const auto& j : arr) {
    try {
      entries.emplace_back(j.at("rank").get<size_t>(),
                           OrderTemplate::Parse(j.at("order").get<std::string>()));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, std::string("ranking: ") + e.what());
    }
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<OrderTemplate> out;
  std::set<std::string> seen;
  for (auto& [rank, t] : entries) {
    if (!seen.insert(t.surface()).second) {
      throw Error(ErrorCode::kParse, "ranking lists " + t.surface() + " twice");
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace star
