#include "star/dataset_io.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace star {

namespace {

constexpr std::string_view kRecordSeparator = "####";

[[noreturn]] void ParseFail(size_t line_number, const std::string& what) {
  throw Error(ErrorCode::kParse, "line " + std::to_string(line_number) + ": " + what);
}

// Recursive-descent reader for `[[ "x", 'y', ... ], ...]` literals.
class ListLiteralReader {
 public:
  ListLiteralReader(std::string_view src, size_t line_number)
      : src_(src), line_(line_number) {}

  std::vector<std::vector<std::string>> ReadOuter() {
    std::vector<std::vector<std::string>> result;
    SkipSpace();
    Expect('[');
    SkipSpace();
    if (Peek() == ']') {
      ++pos_;
    } else {
      while (true) {
        result.push_back(ReadInner());
        SkipSpace();
        if (Peek() == ',') {
          ++pos_;
          SkipSpace();
          if (Peek() == ']') { ++pos_; break; }
          continue;
        }
        Expect(']');
        break;
      }
    }
    SkipSpace();
    if (pos_ != src_.size()) Fail("trailing characters after quad list");
    return result;
  }

 private:
  std::vector<std::string> ReadInner() {
    std::vector<std::string> items;
    SkipSpace();
    Expect('[');
    SkipSpace();
    if (Peek() == ']') { ++pos_; return items; }
    while (true) {
      SkipSpace();
      items.push_back(ReadString());
      SkipSpace();
      if (Peek() == ',') {
        ++pos_;
        SkipSpace();
        if (Peek() == ']') { ++pos_; break; }
        continue;
      }
      Expect(']');
      break;
    }
    return items;
  }

  std::string ReadString() {
    char quote = Peek();
    if (quote != '"' && quote != '\'') Fail("expected quoted string");
    ++pos_;
    std::string out;
    while (true) {
      if (pos_ >= src_.size()) Fail("unterminated string");
      char c = src_[pos_++];
      if (c == quote) break;
      if (c == '\\') {
        if (pos_ >= src_.size()) Fail("dangling escape");
        char e = src_[pos_++];
        switch (e) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          default: out.push_back(e); break;
        }
        continue;
      }
      out.push_back(c);
    }
    return out;
  }

  char Peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

  void Expect(char c) {
    if (Peek() != c) Fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void SkipSpace() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  [[noreturn]] void Fail(const std::string& what) const {
    ParseFail(line_, what + " at column " + std::to_string(pos_ + 1));
  }

  std::string_view src_;
  size_t line_;
  size_t pos_ = 0;
};

Quad QuadFromJson(const nlohmann::json& j) {
  return Quad{j.at("aspect").get<std::string>(), j.at("category").get<std::string>(),
              j.at("opinion").get<std::string>(),
              ParsePolarity(j.at("polarity").get<std::string>())};
}

}  // namespace

size_t Dataset::QuadCount() const {
  size_t n = 0;
  for (const auto& s : sentences) n += s.quads.size();
  return n;
}

ElementOrder::ElementOrder() : position_{0, 1, 2, 3} {}

ElementOrder ElementOrder::Parse(std::string_view spec) {
  if (spec.size() != 4) {
    throw Error(ErrorCode::kConfig,
                "element order must be a permutation of 'acos', got '" + std::string(spec) + "'");
  }
  ElementOrder order;
  std::array<bool, 4> seen{};
  for (size_t i = 0; i < 4; ++i) {
    size_t kind;
    switch (std::tolower(static_cast<unsigned char>(spec[i]))) {
      case 'a': kind = 0; break;
      case 'c': kind = 1; break;
      case 'o': kind = 2; break;
      case 's': kind = 3; break;
      default:
        throw Error(ErrorCode::kConfig, "element order has unknown letter in '" +
                                            std::string(spec) + "'");
    }
    if (seen[kind]) {
      throw Error(ErrorCode::kConfig,
                  "element order repeats a letter in '" + std::string(spec) + "'");
    }
    seen[kind] = true;
    order.position_[kind] = i;
  }
  return order;
}

std::string ElementOrder::ToString() const {
  std::string s(4, '?');
  const char letters[] = {'a', 'c', 'o', 's'};
  for (size_t k = 0; k < 4; ++k) s[position_[k]] = letters[k];
  return s;
}

AnnotatedSentence ParseDatasetLine(std::string_view line, const ElementOrder& order,
                                   size_t line_number, std::string id) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  size_t sep = line.find(kRecordSeparator);
  if (sep == std::string_view::npos) ParseFail(line_number, "missing '####' separator");
  std::string_view text = line.substr(0, sep);
  std::string_view literal = line.substr(sep + kRecordSeparator.size());
  if (literal.find(kRecordSeparator) != std::string_view::npos) {
    ParseFail(line_number, "more than one '####' separator");
  }
  if (Trim(text).empty()) ParseFail(line_number, "empty sentence text");

  AnnotatedSentence result;
  result.sentence = Sentence{std::move(id), std::string(text)};
  auto entries = ListLiteralReader(literal, line_number).ReadOuter();
  for (size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.size() != 4) {
      ParseFail(line_number, "quad " + std::to_string(i + 1) + " has " +
                                 std::to_string(e.size()) + " elements, expected 4");
    }
    Quad q;
    q.aspect = e[order.PositionOf(ElementKind::kA)];
    q.category = e[order.PositionOf(ElementKind::kC)];
    q.opinion = e[order.PositionOf(ElementKind::kO)];
    try {
      q.polarity = ParsePolarity(e[order.PositionOf(ElementKind::kS)]);
    } catch (const Error& err) {
      ParseFail(line_number, err.what());
    }
    result.quads.push_back(std::move(q));
  }
  return result;
}

Dataset ReadRawDataset(std::istream& in, const ElementOrder& order, const std::string& id_prefix) {
  Dataset d;
  d.name = id_prefix;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (Trim(line).empty()) continue;
    d.sentences.push_back(ParseDatasetLine(line, order, line_number,
                                           id_prefix + "-" + std::to_string(line_number)));
  }
  return d;
}

Dataset ReadRawDatasetFile(const std::string& path, const ElementOrder& order) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::string stem = std::filesystem::path(path).stem().string();
  try {
    return ReadRawDataset(in, order, stem);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

std::string CanonicalJsonLine(const AnnotatedSentence& s) {
  nlohmann::ordered_json j;
  j["id"] = s.sentence.id;
  j["text"] = s.sentence.text;
  j["quads"] = nlohmann::ordered_json::array();
  for (const auto& q : s.quads) {
    nlohmann::ordered_json jq;
    jq["aspect"] = q.aspect;
    jq["category"] = q.category;
    jq["opinion"] = q.opinion;
    jq["polarity"] = std::string(PolarityLabel(q.polarity));
    j["quads"].push_back(std::move(jq));
  }
  return j.dump();
}

void WriteCanonicalJsonl(const Dataset& d, std::ostream& out) {
  for (const auto& s : d.sentences) out << CanonicalJsonLine(s) << '\n';
}

void WriteCanonicalJsonlFile(const Dataset& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  WriteCanonicalJsonl(d, out);
}

Dataset ReadCanonicalJsonl(std::istream& in, const std::string& name) {
  Dataset d;
  d.name = name;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (Trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      AnnotatedSentence s;
      s.sentence.id = j.at("id").get<std::string>();
      s.sentence.text = j.at("text").get<std::string>();
      for (const auto& jq : j.at("quads")) s.quads.push_back(QuadFromJson(jq));
      d.sentences.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      ParseFail(line_number, e.what());
    } catch (const Error& e) {
      ParseFail(line_number, e.what());
    }
  }
  CheckDataset(d);
  return d;
}

Dataset ReadCanonicalJsonlFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  try {
    return ReadCanonicalJsonl(in, std::filesystem::path(path).stem().string());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

DatasetStats ComputeStats(const Dataset& d) {
  return DatasetStats{d.sentences.size(), d.QuadCount()};
}

Taxonomy TaxonomyFromDataset(const Dataset& d) {
  Taxonomy t;
  for (const auto& s : d.sentences)
    for (const auto& q : s.quads) t.insert(q.category);
  return t;
}

Taxonomy ReadTaxonomyFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open taxonomy '" + path + "'");
  Taxonomy t;
  std::string line;
  while (std::getline(in, line)) {
    std::string c = Trim(line);
    if (!c.empty()) t.insert(std::move(c));
  }
  if (t.empty()) throw Error(ErrorCode::kConfig, "taxonomy '" + path + "' is empty");
  return t;
}

void CheckTaxonomy(const Dataset& d, const Taxonomy& taxonomy) {
  for (const auto& s : d.sentences) {
    for (const auto& q : s.quads) {
      if (!taxonomy.contains(q.category)) {
        throw Error(ErrorCode::kParse, "sentence '" + s.sentence.id + "': category '" +
                                           q.category + "' is not in the taxonomy");
      }
    }
  }
}

void CheckDataset(const Dataset& d) {
  std::unordered_set<std::string> ids;
  for (const auto& s : d.sentences) {
    if (!ids.insert(s.sentence.id).second) {
      throw Error(ErrorCode::kParse, "duplicate sentence id '" + s.sentence.id + "'");
    }
    if (Trim(s.sentence.text).empty()) {
      throw Error(ErrorCode::kParse, "sentence '" + s.sentence.id + "' has empty text");
    }
  }
}

}  // namespace star
