#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "star/augmentation.hpp"
#include "star/core_model.hpp"
#include "star/dataset_io.hpp"

namespace star {

// End-of-sequence pseudo token, as emitted by the generator and accepted by
// NextAllowed at legal end states.
inline constexpr std::string_view kEndToken = "</s>";

std::vector<std::string> SplitWhitespace(std::string_view s);

// Per-field candidate vocabularies for quad targets in one prediction order.
class DecodingSchema {
 public:
  // Throws kConfig on an empty taxonomy or a category containing a reserved token.
  DecodingSchema(Taxonomy categories, OrderTemplate expected_order, bool strict_spans = false);

  const Taxonomy& categories() const { return categories_; }
  const OrderTemplate& expected_order() const { return order_; }
  bool strict_spans() const { return strict_spans_; }

  // Prefix trie over the whitespace tokens of every category.
  struct TrieNode {
    std::map<std::string, int> children;
    bool terminal = false;
  };
  const TrieNode& node(int index) const { return trie_[static_cast<size_t>(index)]; }
  // Tokens of every category, sorted and deduplicated.
  std::vector<std::string> CategoryTokens() const;

 private:
  Taxonomy categories_;
  OrderTemplate order_;
  bool strict_spans_;
  std::vector<TrieNode> trie_;
};

enum class Field { kA, kC, kO, kS, kBoundary };

// Position of a partial output in the target grammar. Built only by
// ConstrainedDecoder, one token at a time.
struct DecoderState {
  std::vector<std::string> consumed;
  Field current_field = Field::kBoundary;
  size_t quad_index = 0;  // completed quad segments
  bool finished = false;

  // Scan bookkeeping.
  std::string order_surface;
  size_t field_position = 0;  // index of current_field inside the order
  size_t content_tokens = 0;  // content tokens in the current field
  int trie_node = 0;
  std::vector<int> span_ends;  // strict mode: sentence positions of the span's last token

  bool operator==(const DecoderState&) const = default;
};

struct ValidationResult {
  bool valid = false;
  // Index of the first token outside the allowed set; equals the token count
  // when the sequence stops before a legal end.
  size_t violation_index = 0;
  std::string message;
};

// Binds a schema to one sentence. The sentence contributes its whitespace
// tokens, plus each token with leading and trailing ASCII punctuation
// removed, as aspect / opinion candidates.
class ConstrainedDecoder {
 public:
  ConstrainedDecoder(const DecodingSchema& schema, const Sentence& sentence);

  DecoderState Start() const;
  // Allowed continuations; includes kEndToken at legal end states.
  // Throws kAutomaton for a finished state or one built for another order.
  std::set<std::string> NextAllowed(const DecoderState& state) const;
  // Throws kAutomaton when `token` is not allowed.
  DecoderState Advance(const DecoderState& state, const std::string& token) const;
  // Rebuilds a state from a token prefix. Throws kAutomaton on the first bad token.
  DecoderState Scan(const std::vector<std::string>& tokens) const;
  ValidationResult Validate(std::string_view target) const;

  const DecodingSchema& schema() const { return schema_; }
  const std::set<std::string>& span_vocabulary() const { return span_vocab_; }

 private:
  void CheckConsistent(const DecoderState& state) const;
  std::set<std::string> SpanContent(const DecoderState& state) const;
  std::vector<int> SpanPositions(const std::string& token) const;

  const DecodingSchema& schema_;
  std::vector<ElementKind> order_;
  std::set<std::string> span_vocab_;
  // Strict mode: per sentence position, the raw token and its trimmed form.
  std::vector<std::pair<std::string, std::string>> positions_;
};

std::set<std::string> NextAllowed(const DecoderState& state, const Sentence& sentence,
                                  const DecodingSchema& schema);
ValidationResult ValidateSequence(std::string_view target, const Sentence& sentence,
                                  const DecodingSchema& schema);

// Relaxed check for pairwise / overall targets: segments joined by [SSEP],
// each segment is `segment_markers` in order, each followed by at least one
// non-reserved token.
ValidationResult ValidateSkeleton(std::string_view target,
                                  const std::vector<std::string>& segment_markers);

struct ScoredToken {
  std::string token;
  double score;
};

// Stands in for the generative model: scores candidate next tokens for a
// prompt and partial output. Must be deterministic for fixed construction.
class NextTokenDistributionProvider {
 public:
  virtual ~NextTokenDistributionProvider() = default;
  virtual std::vector<ScoredToken> Propose(std::string_view input,
                                           const std::vector<std::string>& consumed) const = 0;
};

// Uniform random scores over a fixed vocabulary. The stream is keyed on
// (seed, input, consumed), so proposals do not depend on call order.
class UniformRandomProvider final : public NextTokenDistributionProvider {
 public:
  UniformRandomProvider(std::vector<std::string> vocabulary, uint64_t seed);
  std::vector<ScoredToken> Propose(std::string_view input,
                                   const std::vector<std::string>& consumed) const override;

 private:
  std::vector<std::string> vocabulary_;
  uint64_t seed_;
};

// Proposes exactly the next token of a known target for each prompt, then
// kEndToken. Off-path prefixes and unknown prompts get no proposals.
class GoldProvider final : public NextTokenDistributionProvider {
 public:
  void Add(std::string input, std::string_view target);
  std::vector<ScoredToken> Propose(std::string_view input,
                                   const std::vector<std::string>& consumed) const override;

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> targets_;
};

struct GenerationOptions {
  size_t beam = 1;
  // After this many tokens every hypothesis is driven to the nearest legal end.
  size_t max_steps = 256;
};

struct GenerationResult {
  std::string sequence;
  double score = 0.0;
  bool hit_step_cap = false;
};

// Beam search over provider proposals intersected with the schema. When no
// proposal survives, the hypothesis takes the structural token that closes
// the current field soonest (end, then a marker or [SSEP], then the smallest
// content token). The result always passes ValidateSequence.
GenerationResult ConstrainedGenerate(std::string_view input, const Sentence& sentence,
                                     const DecodingSchema& schema,
                                     const NextTokenDistributionProvider& provider,
                                     const GenerationOptions& options = {});

}  // namespace star
