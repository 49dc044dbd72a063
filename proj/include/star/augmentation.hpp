#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "star/core_model.hpp"
#include "star/dataset_io.hpp"

namespace star {

// One prediction order for the quad task, e.g. [O][A][C][S].
class OrderTemplate {
 public:
  explicit OrderTemplate(std::array<ElementKind, 4> order);
  // Parses "[A][C][O][S]" or the bare letters "ACOS".
  static OrderTemplate Parse(std::string_view surface);

  const std::array<ElementKind, 4>& order() const { return order_; }
  const std::string& surface() const { return surface_; }
  std::vector<std::string> MarkerTokens() const;

  bool operator==(const OrderTemplate& o) const { return order_ == o.order_; }
  auto operator<=>(const OrderTemplate& o) const { return surface_ <=> o.surface_; }

 private:
  std::array<ElementKind, 4> order_;
  std::string surface_;
};

// The four base pair relations.
enum class PairMarker { kAO, kCS, kAS, kCO };

inline constexpr std::array<PairMarker, 4> kBasePairs = {PairMarker::kAO, PairMarker::kCS,
                                                         PairMarker::kAS, PairMarker::kCO};

std::string_view PairMarkerSurface(PairMarker p);
// Subject and complement of the "X is Y" rendering.
std::pair<ElementKind, ElementKind> PairElements(PairMarker p);

// A base (one marker) or composite (two distinct markers) pairwise prompt.
struct PairwiseCandidate {
  std::vector<PairMarker> pairs;

  std::string Surface() const;
  bool IsBase() const { return pairs.size() == 1; }
  bool operator==(const PairwiseCandidate&) const = default;
};

enum class TaskKind { kQuad, kPairwise, kOverall };

std::string_view TaskName(TaskKind t);
TaskKind ParseTaskName(std::string_view name);

inline constexpr std::string_view kQuadPrefix = "Quad Prediction: ";
inline constexpr std::string_view kPairwisePrefix = "Pairwise Relation: ";
inline constexpr std::string_view kOverallPrefix = "Overall Relation: ";
inline constexpr std::string_view kOverallMarker = "[CSAO]";

struct TaskInstance {
  TaskKind task;
  std::string source_id;
  std::string order_surface;  // empty for the overall task
  std::string input;
  std::string target;

  bool operator==(const TaskInstance&) const = default;
};

// All 24 orders in lexicographic order of their surface.
std::vector<OrderTemplate> EnumerateQuadOrders();

// The 4 base candidates followed by the 12 ordered composites.
std::vector<PairwiseCandidate> EnumeratePairwiseCandidates();

// `Quad Prediction: <text> <order surface>`.
std::string QuadPrompt(const Sentence& s, const OrderTemplate& t);

// The three render functions throw kRender when `quads` is empty.
TaskInstance RenderQuadInstance(const Sentence& s, const std::vector<Quad>& quads,
                                const OrderTemplate& t);
TaskInstance RenderPairwiseInstance(const Sentence& s, const std::vector<Quad>& quads,
                                    const PairwiseCandidate& c);
TaskInstance RenderOverallInstance(const Sentence& s, const std::vector<Quad>& quads);

// Pairwise permutation sampling: the 4 base candidates plus k-4 composites
// drawn uniformly without replacement. Composites keep enumeration order.
// Throws kRange unless 4 <= k <= 16.
std::vector<PairwiseCandidate> PpsSample(size_t k, uint64_t seed);

// Per sentence with at least one quad: one quad instance per order, one
// pairwise instance per candidate, then the overall instance when enabled.
std::vector<TaskInstance> BuildTrainingCorpus(const Dataset& d,
                                              const std::vector<OrderTemplate>& quad_orders,
                                              const std::vector<PairwiseCandidate>& pairwise,
                                              bool include_overall);

std::string TaskInstanceJson(const TaskInstance& inst);
void WriteCorpusJsonl(const std::vector<TaskInstance>& corpus, std::ostream& out);

}  // namespace star
