#include "star/core_model.hpp"

#include <cctype>

namespace star {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMapping: return "mapping";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kRange: return "range";
    case ErrorCode::kRender: return "render";
    case ErrorCode::kEmptyGroup: return "empty-group";
    case ErrorCode::kAutomaton: return "automaton";
    case ErrorCode::kDeadEnd: return "dead-end";
    case ErrorCode::kAlignment: return "alignment";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kNonFinite: return "non-finite";
  }
  return "unknown";
}

std::string_view PolarityLabel(Polarity p) {
  switch (p) {
    case Polarity::kPositive: return "positive";
    case Polarity::kNegative: return "negative";
    case Polarity::kNeutral: return "neutral";
  }
  return "positive";
}

Polarity ParsePolarity(std::string_view label) {
  if (label == "positive") return Polarity::kPositive;
  if (label == "negative") return Polarity::kNegative;
  if (label == "neutral") return Polarity::kNeutral;
  throw Error(ErrorCode::kMapping, "unknown polarity '" + std::string(label) + "'");
}

std::string_view SentimentWord(Polarity p) {
  switch (p) {
    case Polarity::kPositive: return kSentimentWords[0];
    case Polarity::kNegative: return kSentimentWords[1];
    case Polarity::kNeutral: return kSentimentWords[2];
  }
  return kSentimentWords[0];
}

Polarity PolarityFromSentimentWord(std::string_view word) {
  if (word == kSentimentWords[0]) return Polarity::kPositive;
  if (word == kSentimentWords[1]) return Polarity::kNegative;
  if (word == kSentimentWords[2]) return Polarity::kNeutral;
  throw Error(ErrorCode::kMapping,
              "cannot invert sentiment word '" + std::string(word) + "' (expected great|bad|ok)");
}

namespace {

std::string MapSpan(const std::string& span) {
  return span == kNullLabel ? std::string(kNullWord) : span;
}

std::string UnmapSpan(const std::string& span) {
  return span == kNullWord ? std::string(kNullLabel) : span;
}

}  // namespace

MappedQuad MapQuad(const Quad& q) {
  return MappedQuad{MapSpan(q.aspect), q.category, MapSpan(q.opinion),
                    std::string(SentimentWord(q.polarity))};
}

Quad UnmapQuad(const MappedQuad& mq) {
  return Quad{UnmapSpan(mq.aspect), mq.category, UnmapSpan(mq.opinion),
              PolarityFromSentimentWord(mq.sentiment)};
}

char ElementLetter(ElementKind kind) {
  switch (kind) {
    case ElementKind::kA: return 'A';
    case ElementKind::kC: return 'C';
    case ElementKind::kO: return 'O';
    case ElementKind::kS: return 'S';
  }
  return '?';
}

std::string_view MarkerSurface(ElementKind kind) {
  switch (kind) {
    case ElementKind::kA: return "[A]";
    case ElementKind::kC: return "[C]";
    case ElementKind::kO: return "[O]";
    case ElementKind::kS: return "[S]";
  }
  return "";
}

const std::string& MappedElement(const MappedQuad& mq, ElementKind kind) {
  switch (kind) {
    case ElementKind::kA: return mq.aspect;
    case ElementKind::kC: return mq.category;
    case ElementKind::kO: return mq.opinion;
    case ElementKind::kS: return mq.sentiment;
  }
  return mq.aspect;
}

bool IsReservedToken(std::string_view token) {
  if (token == kSeparatorToken) return true;
  for (ElementKind k : kAllElements) {
    if (token == MarkerSurface(k)) return true;
  }
  return false;
}

std::string Trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace star
