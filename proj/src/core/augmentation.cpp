#include "star/augmentation.hpp"

#include <algorithm>
#include <random>

#include <json.hpp>

#include "star/rng.hpp"

namespace star {

OrderTemplate::OrderTemplate(std::array<ElementKind, 4> order) : order_(order) {
  std::array<bool, 4> seen{};
  for (ElementKind k : order_) {
    auto& flag = seen[static_cast<size_t>(k)];
    if (flag) throw Error(ErrorCode::kConfig, "order template repeats an element marker");
    flag = true;
    surface_ += MarkerSurface(k);
  }
}

OrderTemplate OrderTemplate::Parse(std::string_view surface) {
  std::string letters;
  for (char c : surface) {
    if (c == '[' || c == ']' || c == ' ') continue;
    letters.push_back(c);
  }
  if (letters.size() != 4) {
    throw Error(ErrorCode::kConfig, "malformed order template '" + std::string(surface) + "'");
  }
  std::array<ElementKind, 4> order{};
  for (size_t i = 0; i < 4; ++i) {
    switch (letters[i]) {
      case 'A': order[i] = ElementKind::kA; break;
      case 'C': order[i] = ElementKind::kC; break;
      case 'O': order[i] = ElementKind::kO; break;
      case 'S': order[i] = ElementKind::kS; break;
      default:
        throw Error(ErrorCode::kConfig, "malformed order template '" + std::string(surface) + "'");
    }
  }
  OrderTemplate t(order);
  // Reject spellings like "A][C][O][S" that strip to valid letters.
  if (surface != t.surface() && surface != letters) {
    throw Error(ErrorCode::kConfig, "malformed order template '" + std::string(surface) + "'");
  }
  return t;
}

std::vector<std::string> OrderTemplate::MarkerTokens() const {
  std::vector<std::string> tokens;
  for (ElementKind k : order_) tokens.emplace_back(MarkerSurface(k));
  return tokens;
}

std::string_view PairMarkerSurface(PairMarker p) {
  switch (p) {
    case PairMarker::kAO: return "[AO]";
    case PairMarker::kCS: return "[CS]";
    case PairMarker::kAS: return "[AS]";
    case PairMarker::kCO: return "[CO]";
  }
  return "";
}

std::pair<ElementKind, ElementKind> PairElements(PairMarker p) {
  switch (p) {
    case PairMarker::kAO: return {ElementKind::kA, ElementKind::kO};
    case PairMarker::kCS: return {ElementKind::kC, ElementKind::kS};
    case PairMarker::kAS: return {ElementKind::kA, ElementKind::kS};
    case PairMarker::kCO: return {ElementKind::kC, ElementKind::kO};
  }
  return {ElementKind::kA, ElementKind::kO};
}

std::string PairwiseCandidate::Surface() const {
  std::string s;
  for (PairMarker p : pairs) s += PairMarkerSurface(p);
  return s;
}

std::string_view TaskName(TaskKind t) {
  switch (t) {
    case TaskKind::kQuad: return "quad";
    case TaskKind::kPairwise: return "pairwise";
    case TaskKind::kOverall: return "overall";
  }
  return "quad";
}

TaskKind ParseTaskName(std::string_view name) {
  if (name == "quad") return TaskKind::kQuad;
  if (name == "pairwise") return TaskKind::kPairwise;
  if (name == "overall") return TaskKind::kOverall;
  throw Error(ErrorCode::kParse, "unknown task '" + std::string(name) + "'");
}

std::vector<OrderTemplate> EnumerateQuadOrders() {
  std::array<ElementKind, 4> perm = kAllElements;
  std::vector<OrderTemplate> orders;
  do {
    orders.emplace_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return orders;
}

std::vector<PairwiseCandidate> EnumeratePairwiseCandidates() {
  std::vector<PairwiseCandidate> out;
  for (PairMarker p : kBasePairs) out.push_back({{p}});
  for (PairMarker first : kBasePairs) {
    for (PairMarker second : kBasePairs) {
      if (first != second) out.push_back({{first, second}});
    }
  }
  return out;
}

namespace {

void RequireQuads(const Sentence& s, const std::vector<Quad>& quads) {
  if (quads.empty()) {
    throw Error(ErrorCode::kRender, "sentence '" + s.id + "' has no quads to render");
  }
}

template <typename SegmentFn>
std::string JoinSegments(const std::vector<Quad>& quads, SegmentFn&& segment) {
  std::string target;
  for (size_t i = 0; i < quads.size(); ++i) {
    if (i > 0) target += kSegmentJoin;
    target += segment(MapQuad(quads[i]));
  }
  return target;
}

}  // namespace

std::string QuadPrompt(const Sentence& s, const OrderTemplate& t) {
  return std::string(kQuadPrefix) + s.text + " " + t.surface();
}

TaskInstance RenderQuadInstance(const Sentence& s, const std::vector<Quad>& quads,
                                const OrderTemplate& t) {
  RequireQuads(s, quads);
  std::string target = JoinSegments(quads, [&](const MappedQuad& mq) {
    std::string seg;
    for (ElementKind k : t.order()) {
      if (!seg.empty()) seg += ' ';
      seg += MarkerSurface(k);
      seg += ' ';
      seg += MappedElement(mq, k);
    }
    return seg;
  });
  return TaskInstance{TaskKind::kQuad, s.id, t.surface(), QuadPrompt(s, t), std::move(target)};
}

TaskInstance RenderPairwiseInstance(const Sentence& s, const std::vector<Quad>& quads,
                                    const PairwiseCandidate& c) {
  RequireQuads(s, quads);
  std::string surface = c.Surface();
  std::string target = JoinSegments(quads, [&](const MappedQuad& mq) {
    std::string seg;
    for (PairMarker p : c.pairs) {
      auto [left, right] = PairElements(p);
      if (!seg.empty()) seg += ' ';
      seg += PairMarkerSurface(p);
      seg += ' ';
      seg += MappedElement(mq, left);
      seg += " is ";
      seg += MappedElement(mq, right);
    }
    return seg;
  });
  return TaskInstance{TaskKind::kPairwise, s.id, surface,
                      std::string(kPairwisePrefix) + s.text + " " + surface, std::move(target)};
}

TaskInstance RenderOverallInstance(const Sentence& s, const std::vector<Quad>& quads) {
  RequireQuads(s, quads);
  std::string target = JoinSegments(quads, [](const MappedQuad& mq) {
    return std::string(kOverallMarker) + " The " + mq.category + " is " + mq.sentiment +
           " because " + mq.aspect + " is " + mq.opinion;
  });
  return TaskInstance{TaskKind::kOverall, s.id, "", std::string(kOverallPrefix) + s.text,
                      std::move(target)};
}

std::vector<PairwiseCandidate> PpsSample(size_t k, uint64_t seed) {
  if (k < 4 || k > 16) {
    throw Error(ErrorCode::kRange,
                "pairwise sample size must be in [4, 16], got " + std::to_string(k));
  }
  auto all = EnumeratePairwiseCandidates();
  std::vector<size_t> composite(12);
  for (size_t i = 0; i < composite.size(); ++i) composite[i] = 4 + i;

  // Partial Fisher-Yates over the composite indices.
  std::mt19937_64 rng(seed);
  const size_t take = k - 4;
  for (size_t i = 0; i < take; ++i) {
    size_t j = i + UniformIndex(rng, composite.size() - i);
    std::swap(composite[i], composite[j]);
  }
  std::sort(composite.begin(), composite.begin() + static_cast<std::ptrdiff_t>(take));

  std::vector<PairwiseCandidate> out(all.begin(), all.begin() + 4);
  for (size_t i = 0; i < take; ++i) out.push_back(all[composite[i]]);
  return out;
}

std::vector<TaskInstance> BuildTrainingCorpus(const Dataset& d,
                                              const std::vector<OrderTemplate>& quad_orders,
                                              const std::vector<PairwiseCandidate>& pairwise,
                                              bool include_overall) {
  std::vector<TaskInstance> corpus;
  for (const auto& s : d.sentences) {
    if (s.quads.empty()) continue;
    for (const auto& t : quad_orders) corpus.push_back(RenderQuadInstance(s.sentence, s.quads, t));
    for (const auto& c : pairwise)
      corpus.push_back(RenderPairwiseInstance(s.sentence, s.quads, c));
    if (include_overall) corpus.push_back(RenderOverallInstance(s.sentence, s.quads));
  }
  return corpus;
}

std::string TaskInstanceJson(const TaskInstance& inst) {
  nlohmann::ordered_json j;
  j["task"] = std::string(TaskName(inst.task));
  j["source_id"] = inst.source_id;
  j["order"] = inst.order_surface;
  j["input"] = inst.input;
  j["target"] = inst.target;
  return j.dump();
}

void WriteCorpusJsonl(const std::vector<TaskInstance>& corpus, std::ostream& out) {
  for (const auto& inst : corpus) out << TaskInstanceJson(inst) << '\n';
}

}  // namespace star
