#include "star/constrained_decoding.hpp"

#include <algorithm>
#include <cctype>
#include <random>

#include "star/rng.hpp"

namespace star {

std::vector<std::string> SplitWhitespace(std::string_view s) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    size_t b = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > b) out.emplace_back(s.substr(b, i - b));
  }
  return out;
}

namespace {

std::string StripPunct(const std::string& t) {
  size_t b = 0, e = t.size();
  while (b < e && std::ispunct(static_cast<unsigned char>(t[b]))) ++b;
  while (e > b && std::ispunct(static_cast<unsigned char>(t[e - 1]))) --e;
  return t.substr(b, e - b);
}

Field ToField(ElementKind k) {
  switch (k) {
    case ElementKind::kA: return Field::kA;
    case ElementKind::kC: return Field::kC;
    case ElementKind::kO: return Field::kO;
    case ElementKind::kS: return Field::kS;
  }
  return Field::kBoundary;
}

[[noreturn]] void AutomatonFail(const std::string& what) { throw Error(ErrorCode::kAutomaton, what); }

}  // namespace

DecodingSchema::DecodingSchema(Taxonomy categories, OrderTemplate expected_order,
                               bool strict_spans)
    : categories_(std::move(categories)),
      order_(std::move(expected_order)),
      strict_spans_(strict_spans),
      trie_(1) {
  if (categories_.empty()) throw Error(ErrorCode::kConfig, "decoding schema needs categories");
  for (const auto& c : categories_) {
    auto tokens = SplitWhitespace(c);
    if (tokens.empty()) throw Error(ErrorCode::kConfig, "blank category in taxonomy");
    int node = 0;
    for (const auto& tok : tokens) {
      if (IsReservedToken(tok) || tok == kEndToken) {
        throw Error(ErrorCode::kConfig, "category '" + c + "' contains reserved token " + tok);
      }
      auto it = trie_[static_cast<size_t>(node)].children.find(tok);
      if (it == trie_[static_cast<size_t>(node)].children.end()) {
        int next = static_cast<int>(trie_.size());
        trie_[static_cast<size_t>(node)].children.emplace(tok, next);
        trie_.emplace_back();
        node = next;
      } else {
        node = it->second;
      }
    }
    trie_[static_cast<size_t>(node)].terminal = true;
  }
}

std::vector<std::string> DecodingSchema::CategoryTokens() const {
  std::set<std::string> tokens;
  for (const auto& n : trie_)
    for (const auto& [tok, child] : n.children) tokens.insert(tok);
  return {tokens.begin(), tokens.end()};
}

ConstrainedDecoder::ConstrainedDecoder(const DecodingSchema& schema, const Sentence& sentence)
    : schema_(schema) {
  for (ElementKind k : schema.expected_order().order()) order_.push_back(k);
  for (const auto& raw : SplitWhitespace(sentence.text)) {
    std::string trimmed = StripPunct(raw);
    if (!IsReservedToken(raw) && raw != kEndToken) span_vocab_.insert(raw);
    if (!trimmed.empty() && !IsReservedToken(trimmed) && trimmed != kEndToken) {
      span_vocab_.insert(trimmed);
    }
    positions_.emplace_back(raw, trimmed);
  }
}

DecoderState ConstrainedDecoder::Start() const {
  DecoderState s;
  s.order_surface = schema_.expected_order().surface();
  return s;
}

void ConstrainedDecoder::CheckConsistent(const DecoderState& state) const {
  if (state.order_surface != schema_.expected_order().surface()) {
    AutomatonFail("decoder state was built for order '" + state.order_surface +
                  "' but the schema expects " + schema_.expected_order().surface());
  }
  if (state.finished) AutomatonFail("sequence already ended");
  if (state.current_field != Field::kBoundary &&
      (state.field_position >= order_.size() ||
       ToField(order_[state.field_position]) != state.current_field)) {
    AutomatonFail("decoder state field does not match the expected order");
  }
}

std::vector<int> ConstrainedDecoder::SpanPositions(const std::string& token) const {
  std::vector<int> out;
  for (size_t i = 0; i < positions_.size(); ++i) {
    if (positions_[i].first == token || positions_[i].second == token) {
      out.push_back(static_cast<int>(i));
    }
  }
  return out;
}

std::set<std::string> ConstrainedDecoder::SpanContent(const DecoderState& state) const {
  if (state.content_tokens == 0 || !schema_.strict_spans()) {
    std::set<std::string> out = span_vocab_;
    out.emplace(kNullWord);
    return out;
  }
  std::set<std::string> out;
  for (int end : state.span_ends) {
    size_t next = static_cast<size_t>(end) + 1;
    if (next >= positions_.size()) continue;
    for (const std::string* t : {&positions_[next].first, &positions_[next].second}) {
      if (!t->empty() && span_vocab_.contains(*t)) out.insert(*t);
    }
  }
  return out;
}

std::set<std::string> ConstrainedDecoder::NextAllowed(const DecoderState& state) const {
  CheckConsistent(state);
  std::set<std::string> allowed;
  if (state.current_field == Field::kBoundary) {
    allowed.emplace(MarkerSurface(order_.front()));
    return allowed;
  }

  bool at_boundary = false;  // current field may be closed here
  switch (state.current_field) {
    case Field::kA:
    case Field::kO:
      allowed = SpanContent(state);
      at_boundary = state.content_tokens > 0;
      break;
    case Field::kC: {
      const auto& node = schema_.node(state.trie_node);
      for (const auto& [tok, child] : node.children) allowed.insert(tok);
      at_boundary = node.terminal;
      break;
    }
    case Field::kS:
      if (state.content_tokens == 0) {
        for (auto w : kSentimentWords) allowed.emplace(w);
      } else {
        at_boundary = true;
      }
      break;
    case Field::kBoundary:
      break;
  }
  if (at_boundary) {
    if (state.field_position + 1 < order_.size()) {
      allowed.emplace(MarkerSurface(order_[state.field_position + 1]));
    } else {
      allowed.emplace(kSeparatorToken);
      allowed.emplace(kEndToken);
    }
  }
  if (allowed.empty()) AutomatonFail("no continuation from the current state");
  return allowed;
}

DecoderState ConstrainedDecoder::Advance(const DecoderState& state, const std::string& token) const {
  auto allowed = NextAllowed(state);
  if (!allowed.contains(token)) {
    AutomatonFail("token '" + token + "' is not allowed at position " +
                  std::to_string(state.consumed.size()));
  }
  DecoderState next = state;
  next.consumed.push_back(token);
  if (token == kEndToken) {
    next.consumed.pop_back();
    next.finished = true;
    next.current_field = Field::kBoundary;
    next.quad_index += 1;
    return next;
  }
  if (token == kSeparatorToken) {
    next.current_field = Field::kBoundary;
    next.quad_index += 1;
    next.field_position = 0;
    next.content_tokens = 0;
    next.trie_node = 0;
    next.span_ends.clear();
    return next;
  }
  if (IsReservedToken(token)) {
    next.field_position = state.current_field == Field::kBoundary ? 0 : state.field_position + 1;
    next.current_field = ToField(order_[next.field_position]);
    next.content_tokens = 0;
    next.trie_node = 0;
    next.span_ends.clear();
    return next;
  }
  next.content_tokens += 1;
  if (state.current_field == Field::kC) {
    next.trie_node = schema_.node(state.trie_node).children.at(token);
  } else if (schema_.strict_spans() &&
             (state.current_field == Field::kA || state.current_field == Field::kO)) {
    if (state.content_tokens == 0) {
      next.span_ends = SpanPositions(token);
    } else {
      next.span_ends.clear();
      for (int end : state.span_ends) {
        size_t p = static_cast<size_t>(end) + 1;
        if (p < positions_.size() && (positions_[p].first == token || positions_[p].second == token)) {
          next.span_ends.push_back(static_cast<int>(p));
        }
      }
    }
  }
  return next;
}

DecoderState ConstrainedDecoder::Scan(const std::vector<std::string>& tokens) const {
  DecoderState s = Start();
  for (const auto& t : tokens) s = Advance(s, t);
  return s;
}

ValidationResult ConstrainedDecoder::Validate(std::string_view target) const {
  auto tokens = SplitWhitespace(target);
  DecoderState state = Start();
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == kEndToken) {
      return {false, i, "end token inside the sequence"};
    }
    if (!NextAllowed(state).contains(tokens[i])) {
      return {false, i, "token '" + tokens[i] + "' not allowed at index " + std::to_string(i)};
    }
    state = Advance(state, tokens[i]);
  }
  if (!NextAllowed(state).contains(std::string(kEndToken))) {
    return {false, tokens.size(), "sequence ends inside a quad segment"};
  }
  return {true, tokens.size(), ""};
}

std::set<std::string> NextAllowed(const DecoderState& state, const Sentence& sentence,
                                  const DecodingSchema& schema) {
  return ConstrainedDecoder(schema, sentence).NextAllowed(state);
}

ValidationResult ValidateSequence(std::string_view target, const Sentence& sentence,
                                  const DecodingSchema& schema) {
  return ConstrainedDecoder(schema, sentence).Validate(target);
}

ValidationResult ValidateSkeleton(std::string_view target,
                                  const std::vector<std::string>& segment_markers) {
  auto tokens = SplitWhitespace(target);
  size_t marker = 0;         // next expected marker within the segment
  size_t content = 0;        // content tokens after the last marker
  bool in_segment = false;
  for (size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    bool is_marker = t.size() > 2 && t.front() == '[' && t.back() == ']';
    if (t == kSeparatorToken) {
      if (!in_segment || marker != segment_markers.size() || content == 0) {
        return {false, i, "separator before the segment is complete"};
      }
      in_segment = false;
      marker = 0;
      content = 0;
      continue;
    }
    if (is_marker) {
      if (marker >= segment_markers.size() || t != segment_markers[marker] ||
          (in_segment && content == 0)) {
        return {false, i, "unexpected marker '" + t + "'"};
      }
      in_segment = true;
      ++marker;
      content = 0;
      continue;
    }
    if (!in_segment) return {false, i, "content before the first marker"};
    ++content;
  }
  if (!in_segment || marker != segment_markers.size() || content == 0) {
    return {false, tokens.size(), "sequence ends inside a segment"};
  }
  return {true, tokens.size(), ""};
}

UniformRandomProvider::UniformRandomProvider(std::vector<std::string> vocabulary, uint64_t seed)
    : vocabulary_(std::move(vocabulary)), seed_(seed) {}

std::vector<ScoredToken> UniformRandomProvider::Propose(
    std::string_view input, const std::vector<std::string>& consumed) const {
  uint64_t key = Fnv1a(input, 0xcbf29ce484222325ULL ^ seed_);
  for (const auto& t : consumed) key = Fnv1a(t, Fnv1a("\x1f", key));
  std::mt19937_64 rng(key);
  std::vector<ScoredToken> out;
  out.reserve(vocabulary_.size());
  for (const auto& t : vocabulary_) out.push_back({t, UniformUnit(rng)});
  return out;
}

void GoldProvider::Add(std::string input, std::string_view target) {
  targets_[std::move(input)] = SplitWhitespace(target);
}

std::vector<ScoredToken> GoldProvider::Propose(std::string_view input,
                                               const std::vector<std::string>& consumed) const {
  auto it = targets_.find(input);
  if (it == targets_.end()) return {};
  const auto& gold = it->second;
  if (consumed.size() > gold.size() || !std::equal(consumed.begin(), consumed.end(), gold.begin())) {
    return {};
  }
  if (consumed.size() == gold.size()) return {{std::string(kEndToken), 0.0}};
  return {{gold[consumed.size()], 0.0}};
}

namespace {

struct Hypothesis {
  DecoderState state;
  double score = 0.0;
};

// Token that closes the current field soonest.
std::string ForcedToken(const std::set<std::string>& allowed) {
  if (allowed.contains(std::string(kEndToken))) return std::string(kEndToken);
  for (const auto& t : allowed) {
    if (IsReservedToken(t) && t != kSeparatorToken) return t;
  }
  if (allowed.contains(std::string(kSeparatorToken))) return std::string(kSeparatorToken);
  return *allowed.begin();
}

bool BetterHypothesis(const Hypothesis& a, const Hypothesis& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.state.consumed < b.state.consumed;
}

}  // namespace

GenerationResult ConstrainedGenerate(std::string_view input, const Sentence& sentence,
                                     const DecodingSchema& schema,
                                     const NextTokenDistributionProvider& provider,
                                     const GenerationOptions& options) {
  if (options.beam < 1) throw Error(ErrorCode::kRange, "beam width must be >= 1");
  ConstrainedDecoder decoder(schema, sentence);
  std::vector<Hypothesis> beam{{decoder.Start(), 0.0}};
  bool hit_cap = false;

  for (size_t step = 0;; ++step) {
    bool all_done = std::all_of(beam.begin(), beam.end(),
                                [](const Hypothesis& h) { return h.state.finished; });
    if (all_done) break;
    const bool forced = step >= options.max_steps;
    hit_cap = hit_cap || forced;

    std::vector<Hypothesis> pool;
    for (const auto& hyp : beam) {
      if (hyp.state.finished) {
        pool.push_back(hyp);
        continue;
      }
      auto allowed = decoder.NextAllowed(hyp.state);
      if (allowed.empty()) {
        throw Error(ErrorCode::kDeadEnd, "no allowed continuation after " +
                                             std::to_string(hyp.state.consumed.size()) + " tokens");
      }
      std::map<std::string, double> survivors;
      double floor = 0.0;
      if (!forced) {
        auto proposals = provider.Propose(input, hyp.state.consumed);
        for (size_t i = 0; i < proposals.size(); ++i) {
          const auto& p = proposals[i];
          floor = i == 0 ? p.score : std::min(floor, p.score);
          if (!allowed.contains(p.token)) continue;
          auto [it, inserted] = survivors.emplace(p.token, p.score);
          if (!inserted) it->second = std::max(it->second, p.score);
        }
      }
      if (survivors.empty()) survivors.emplace(ForcedToken(allowed), floor);

      std::vector<std::pair<std::string, double>> ranked(survivors.begin(), survivors.end());
      std::stable_sort(ranked.begin(), ranked.end(),
                       [](const auto& a, const auto& b) { return a.second > b.second; });
      if (ranked.size() > options.beam) ranked.resize(options.beam);
      for (const auto& [tok, score] : ranked) {
        pool.push_back({decoder.Advance(hyp.state, tok), hyp.score + score});
      }
    }
    std::sort(pool.begin(), pool.end(), BetterHypothesis);
    if (pool.size() > options.beam) pool.resize(options.beam);
    beam = std::move(pool);
  }

  const Hypothesis& best = beam.front();
  GenerationResult result;
  for (size_t i = 0; i < best.state.consumed.size(); ++i) {
    if (i > 0) result.sequence += ' ';
    result.sequence += best.state.consumed[i];
  }
  result.score = best.score;
  result.hit_step_cap = hit_cap;
  return result;
}

}  // namespace star
