#include "star/inference.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>

#include <json.hpp>

namespace star {

namespace {

bool ContainsReserved(std::string_view value) {
  for (ElementKind k : kAllElements) {
    if (value.find(MarkerSurface(k)) != std::string_view::npos) return true;
  }
  return value.find(kSeparatorToken) != std::string_view::npos;
}

std::vector<std::string_view> SplitSegments(std::string_view target) {
  std::vector<std::string_view> segments;
  size_t start = 0;
  while (true) {
    size_t at = target.find(kSegmentJoin, start);
    if (at == std::string_view::npos) {
      segments.push_back(target.substr(start));
      break;
    }
    segments.push_back(target.substr(start, at - start));
    start = at + kSegmentJoin.size();
  }
  return segments;
}

}  // namespace

ParsedTarget ParseTarget(std::string_view target, const OrderTemplate& order) {
  ParsedTarget result;
  std::string trimmed = Trim(target);
  if (trimmed.empty()) {
    result.diagnostics.push_back({0, "empty target"});
    return result;
  }
  auto segments = SplitSegments(trimmed);
  const auto& kinds = order.order();
  for (size_t si = 0; si < segments.size(); ++si) {
    std::string_view seg = segments[si];
    auto fail = [&](std::string msg) { result.diagnostics.push_back({si, std::move(msg)}); };

    std::string_view first = MarkerSurface(kinds[0]);
    size_t lead = seg.find_first_not_of(' ');
    if (lead == std::string_view::npos || seg.substr(lead, first.size()) != first) {
      fail("segment does not start with " + std::string(first));
      continue;
    }
    size_t start = lead + first.size();
    std::array<std::string, 4> values;
    bool ok = true;
    for (size_t i = 1; i <= 4 && ok; ++i) {
      size_t end = seg.size();
      if (i < 4) {
        end = seg.find(MarkerSurface(kinds[i]), start);
        if (end == std::string_view::npos) {
          fail("missing marker " + std::string(MarkerSurface(kinds[i])));
          ok = false;
          break;
        }
      }
      std::string value = Trim(seg.substr(start, end - start));
      if (value.empty()) {
        fail("empty element after " + std::string(MarkerSurface(kinds[i - 1])));
        ok = false;
      } else if (ContainsReserved(value)) {
        fail("element after " + std::string(MarkerSurface(kinds[i - 1])) +
             " contains a marker literal");
        ok = false;
      }
      values[static_cast<size_t>(kinds[i - 1])] = std::move(value);
      if (i < 4) start = end + MarkerSurface(kinds[i]).size();
    }
    if (!ok) continue;
    try {
      result.quads.push_back(UnmapQuad(MappedQuad{values[0], values[1], values[2], values[3]}));
    } catch (const Error& e) {
      fail(e.what());
    }
  }
  return result;
}

VoteTally TallyVotes(const std::vector<OrderView>& views, double tau) {
  if (views.empty()) throw Error(ErrorCode::kConfig, "cannot vote over zero views");
  if (!(tau > 0.0)) throw Error(ErrorCode::kConfig, "vote threshold must be > 0");
  VoteTally tally;
  tally.threshold = tau;
  tally.k = views.size();
  for (const auto& v : views)
    for (const auto& q : v.quads) ++tally.votes[q];
  return tally;
}

std::set<Quad> AggregateVotes(const std::vector<OrderView>& views, double tau) {
  VoteTally tally = TallyVotes(views, tau);
  std::set<Quad> kept;
  for (const auto& [q, n] : tally.votes) {
    if (static_cast<double>(n) >= tau) kept.insert(q);
  }
  return kept;
}

std::vector<PredictionRow> ReadPredictionsJsonl(std::istream& in) {
  std::vector<PredictionRow> rows;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (Trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      rows.push_back({j.at("source_id").get<std::string>(), j.at("order").get<std::string>(),
                      j.at("sequence").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse,
                  "predictions line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return rows;
}

std::string PredictionRowJson(const PredictionRow& row) {
  nlohmann::ordered_json j;
  j["source_id"] = row.source_id;
  j["order"] = row.order;
  j["sequence"] = row.sequence;
  return j.dump();
}

namespace {

nlohmann::ordered_json QuadToJson(const Quad& q) {
  nlohmann::ordered_json j;
  j["aspect"] = q.aspect;
  j["category"] = q.category;
  j["opinion"] = q.opinion;
  j["polarity"] = std::string(PolarityLabel(q.polarity));
  return j;
}

}  // namespace

std::string QuadJson(const Quad& q) { return QuadToJson(q).dump(); }

std::string FinalPredictionJson(const SentencePrediction& p) {
  nlohmann::ordered_json j;
  j["source_id"] = p.source_id;
  j["quads"] = nlohmann::ordered_json::array();
  for (const auto& q : p.quads) j["quads"].push_back(QuadToJson(q));
  return j.dump();
}

std::vector<SentencePrediction> ReadFinalPredictionsJsonl(std::istream& in) {
  std::vector<SentencePrediction> out;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (Trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      SentencePrediction p;
      p.source_id = j.at("source_id").get<std::string>();
      for (const auto& jq : j.at("quads")) {
        p.quads.push_back(Quad{Trim(jq.at("aspect").get<std::string>()),
                               Trim(jq.at("category").get<std::string>()),
                               Trim(jq.at("opinion").get<std::string>()),
                               ParsePolarity(jq.at("polarity").get<std::string>())});
      }
      out.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse,
                  "final predictions line " + std::to_string(line_number) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse,
                  "final predictions line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return out;
}

VoteRunSummary VotePredictionRows(const std::vector<PredictionRow>& rows, size_t k, double tau) {
  std::vector<std::string> ids;
  std::unordered_map<std::string, std::vector<OrderView>> views;
  std::unordered_map<std::string, std::set<std::string>> seen_orders;
  VoteRunSummary summary;

  for (const auto& row : rows) {
    OrderTemplate order = OrderTemplate::Parse(row.order);
    if (!seen_orders[row.source_id].insert(order.surface()).second) {
      throw Error(ErrorCode::kParse, "sentence '" + row.source_id + "' has two rows for order " +
                                         order.surface());
    }
    auto [it, inserted] = views.try_emplace(row.source_id);
    if (inserted) ids.push_back(row.source_id);
    ParsedTarget parsed = ParseTarget(row.sequence, order);
    summary.malformed_segments += parsed.diagnostics.size();
    it->second.push_back({order.surface(), {parsed.quads.begin(), parsed.quads.end()}});
  }

  if (k == 0 && !ids.empty()) k = views[ids.front()].size();
  for (const auto& id : ids) {
    if (views[id].size() != k) {
      throw Error(ErrorCode::kParse, "sentence '" + id + "' has " +
                                         std::to_string(views[id].size()) + " views, expected " +
                                         std::to_string(k));
    }
  }
  summary.k = k;
  summary.tau = tau > 0.0 ? tau : static_cast<double>(k) / 2.0;
  for (const auto& id : ids) {
    auto kept = AggregateVotes(views[id], summary.tau);
    summary.predictions.push_back({id, {kept.begin(), kept.end()}});
  }
  return summary;
}

}  // namespace star
