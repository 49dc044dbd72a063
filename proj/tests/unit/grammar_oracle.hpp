#pragma once

// Reference recognizer for quad targets, written from the grammar rather
// than from the decoder's state machine: split on [SSEP], then on markers,
// then check each field's content on its own.

#include <algorithm>
#include <functional>
#include <set>
#include <string>
#include <vector>

namespace star::testing {

struct ToyGrammar {
  std::vector<std::string> markers;                  // in the expected order, e.g. [A] [C] [O] [S]
  std::vector<char> fields;                          // matching letters: 'A','C','O','S'
  std::set<std::string> span_words;                  // sentence tokens plus "it"
  std::vector<std::vector<std::string>> categories;  // tokenised categories
  std::set<std::string> sentiments = {"great", "bad", "ok"};
  std::string separator = "[SSEP]";

  bool IsStructural(const std::string& t) const {
    return t == separator || std::find(markers.begin(), markers.end(), t) != markers.end();
  }

  // `closed`: the field has been followed by another marker or the segment ended.
  bool FieldOk(char field, const std::vector<std::string>& content, bool closed) const {
    switch (field) {
      case 'A':
      case 'O':
        if (closed && content.empty()) return false;
        return std::all_of(content.begin(), content.end(),
                           [&](const std::string& t) { return span_words.count(t) > 0; });
      case 'C':
        for (const auto& cat : categories) {
          if (closed) {
            if (content == cat) return true;
          } else if (content.size() <= cat.size() &&
                     std::equal(content.begin(), content.end(), cat.begin())) {
            return true;
          }
        }
        return false;
      case 'S':
        if (content.size() > 1) return false;
        if (content.empty()) return !closed;
        return sentiments.count(content[0]) > 0;
    }
    return false;
  }

  // A whole segment when `complete`, else a prefix of one.
  bool SegmentOk(const std::vector<std::string>& seg, bool complete) const {
    if (seg.empty()) return !complete;
    // Reserved tokens inside the segment must be the leading markers in order.
    std::vector<size_t> marker_at;
    for (size_t i = 0; i < seg.size(); ++i) {
      if (!IsStructural(seg[i])) continue;
      if (marker_at.size() >= markers.size() || seg[i] != markers[marker_at.size()]) return false;
      marker_at.push_back(i);
    }
    if (marker_at.empty() || marker_at[0] != 0) return false;
    if (complete && marker_at.size() != markers.size()) return false;
    for (size_t f = 0; f < marker_at.size(); ++f) {
      size_t begin = marker_at[f] + 1;
      size_t end = f + 1 < marker_at.size() ? marker_at[f + 1] : seg.size();
      std::vector<std::string> content(seg.begin() + begin, seg.begin() + end);
      bool closed = f + 1 < marker_at.size() || complete;
      if (!FieldOk(fields[f], content, closed)) return false;
    }
    return true;
  }

  std::vector<std::vector<std::string>> Segments(const std::vector<std::string>& tokens) const {
    std::vector<std::vector<std::string>> segs(1);
    for (const auto& t : tokens) {
      if (t == separator) {
        segs.emplace_back();
      } else {
        segs.back().push_back(t);
      }
    }
    return segs;
  }

  bool Accepts(const std::vector<std::string>& tokens) const {
    if (tokens.empty()) return false;
    for (const auto& seg : Segments(tokens))
      if (!SegmentOk(seg, true)) return false;
    return true;
  }

  // Some continuation of `tokens` is accepted.
  bool Viable(const std::vector<std::string>& tokens) const {
    auto segs = Segments(tokens);
    for (size_t i = 0; i + 1 < segs.size(); ++i)
      if (!SegmentOk(segs[i], true)) return false;
    return SegmentOk(segs.back(), false);
  }

  // Expected verdict: index of the first token whose prefix is not viable,
  // or the token count when every prefix is viable but the whole is not
  // accepted.
  std::pair<bool, size_t> Verdict(const std::vector<std::string>& tokens) const {
    std::vector<std::string> prefix;
    for (size_t i = 0; i < tokens.size(); ++i) {
      prefix.push_back(tokens[i]);
      if (!Viable(prefix)) return {false, i};
    }
    return {Accepts(tokens), tokens.size()};
  }

  // Every accepted string of at most `max_len` tokens, built generatively.
  std::set<std::vector<std::string>> EnumerateAccepted(size_t max_len) const {
    std::set<std::vector<std::string>> out;
    std::vector<std::string> cur;
    std::vector<std::vector<std::string>> span_contents;
    std::function<void(std::vector<std::string>&, size_t)> spans =
        [&](std::vector<std::string>& acc, size_t budget) {
          if (!acc.empty()) span_contents.push_back(acc);
          if (budget == 0) return;
          for (const auto& w : span_words) {
            acc.push_back(w);
            spans(acc, budget - 1);
            acc.pop_back();
          }
        };
    std::vector<std::string> acc;
    spans(acc, max_len);

    std::vector<std::vector<std::string>> sentiment_contents;
    for (const auto& w : sentiments) sentiment_contents.push_back({w});

    std::function<void(size_t)> field = [&](size_t f) {
      if (f == fields.size()) {
        out.insert(cur);
        if (cur.size() + 1 < max_len) {
          cur.push_back(separator);
          field(0);
          cur.pop_back();
        }
        return;
      }
      cur.push_back(markers[f]);
      const auto& options = fields[f] == 'C'   ? categories
                            : fields[f] == 'S' ? sentiment_contents
                                               : span_contents;
      const size_t rest = 2 * (fields.size() - f - 1);  // marker + one token per later field
      for (const auto& o : options) {
        if (cur.size() + o.size() + rest > max_len) continue;
        cur.insert(cur.end(), o.begin(), o.end());
        field(f + 1);
        cur.resize(cur.size() - o.size());
      }
      cur.pop_back();
    };
    field(0);
    return out;
  }
};

}  // namespace star::testing
