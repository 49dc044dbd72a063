#pragma once

#include <array>
#include <compare>
#include <string>
#include <string_view>

#include "star/error.hpp"

namespace star {

// Label-space sentinel for implicit aspect / opinion terms.
inline constexpr std::string_view kNullLabel = "NULL";
// Target-space rendering of kNullLabel.
inline constexpr std::string_view kNullWord = "it";

enum class Polarity { kPositive, kNegative, kNeutral };

std::string_view PolarityLabel(Polarity p);
// Parses "positive" / "negative" / "neutral". Throws kMapping otherwise.
Polarity ParsePolarity(std::string_view label);

// Target-space sentiment words, in candidate-list order.
inline constexpr std::array<std::string_view, 3> kSentimentWords = {"great", "bad", "ok"};

std::string_view SentimentWord(Polarity p);
// Inverse of SentimentWord. Throws kMapping for anything outside kSentimentWords.
Polarity PolarityFromSentimentWord(std::string_view word);

struct Sentence {
  std::string id;
  std::string text;

  auto operator<=>(const Sentence&) const = default;
};

// A sentiment quadruple in label space. aspect / opinion hold kNullLabel for
// implicit terms.
struct Quad {
  std::string aspect;
  std::string category;
  std::string opinion;
  Polarity polarity = Polarity::kPositive;

  auto operator<=>(const Quad&) const = default;
};

// The same quadruple in target-sequence space.
struct MappedQuad {
  std::string aspect;
  std::string category;
  std::string opinion;
  std::string sentiment;

  auto operator<=>(const MappedQuad&) const = default;
};

MappedQuad MapQuad(const Quad& q);
Quad UnmapQuad(const MappedQuad& mq);

enum class ElementKind { kA, kC, kO, kS };

inline constexpr std::array<ElementKind, 4> kAllElements = {ElementKind::kA, ElementKind::kC,
                                                            ElementKind::kO, ElementKind::kS};

char ElementLetter(ElementKind kind);
// "[A]", "[C]", "[O]", "[S]".
std::string_view MarkerSurface(ElementKind kind);
// Returns the mapped element of `mq` selected by `kind`.
const std::string& MappedElement(const MappedQuad& mq, ElementKind kind);

inline constexpr std::string_view kSeparatorToken = "[SSEP]";
inline constexpr std::string_view kSegmentJoin = " [SSEP] ";

// True for the reserved structural tokens ([A] [C] [O] [S] [SSEP]).
bool IsReservedToken(std::string_view token);

std::string Trim(std::string_view s);

}  // namespace star
