#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "star/core_model.hpp"

namespace star {

enum class Split { kTrain, kDev, kTest };

struct AnnotatedSentence {
  Sentence sentence;
  std::vector<Quad> quads;

  bool operator==(const AnnotatedSentence&) const = default;
};

struct Dataset {
  std::string name;
  Split split = Split::kTrain;
  std::vector<AnnotatedSentence> sentences;

  size_t QuadCount() const;
};

struct DatasetStats {
  size_t n_sentences = 0;
  size_t n_quads = 0;

  bool operator==(const DatasetStats&) const = default;
};

// Which in-file position (0..3) holds each canonical element. Public releases
// disagree on in-file order, so this is always explicit.
class ElementOrder {
 public:
  // Default layout (a, c, o, s).
  ElementOrder();
  // `spec` is a permutation of the letters "acos", case-insensitive
  // ("acso" means the file stores aspect, category, sentiment, opinion).
  static ElementOrder Parse(std::string_view spec);

  size_t PositionOf(ElementKind kind) const { return position_[static_cast<size_t>(kind)]; }
  std::string ToString() const;

 private:
  std::array<size_t, 4> position_;
};

using Taxonomy = std::set<std::string>;

// Parses one `<text>####<quad-list>` record. `line_number` is only used for
// diagnostics. Accepts both JSON and Python-style (single-quoted) list literals.
AnnotatedSentence ParseDatasetLine(std::string_view line, const ElementOrder& order,
                                   size_t line_number, std::string id);

// Reads a `####`-separated file. Blank lines are skipped; ids are
// `<id_prefix>-<1-based line number>`. Input text is kept byte-exact.
Dataset ReadRawDataset(std::istream& in, const ElementOrder& order, const std::string& id_prefix);
Dataset ReadRawDatasetFile(const std::string& path, const ElementOrder& order);

void WriteCanonicalJsonl(const Dataset& d, std::ostream& out);
std::string CanonicalJsonLine(const AnnotatedSentence& s);
Dataset ReadCanonicalJsonl(std::istream& in, const std::string& name = "");
Dataset ReadCanonicalJsonlFile(const std::string& path);
void WriteCanonicalJsonlFile(const Dataset& d, const std::string& path);

DatasetStats ComputeStats(const Dataset& d);

// Union of observed categories.
Taxonomy TaxonomyFromDataset(const Dataset& d);
// One category per line; blank lines ignored.
Taxonomy ReadTaxonomyFile(const std::string& path);
// Throws kParse naming the first sentence whose quad category is outside `taxonomy`.
void CheckTaxonomy(const Dataset& d, const Taxonomy& taxonomy);

// Throws kParse on duplicate ids or blank text.
void CheckDataset(const Dataset& d);

}  // namespace star
