#pragma once

#include <random>
#include <string>
#include <vector>

#include "star/core_model.hpp"
#include "star/rng.hpp"

namespace star::testing {

inline std::string FixturePath(const std::string& name) {
  return std::string(STAR_FIXTURE_DIR) + "/" + name;
}

// Random label-space quad. Spans are 1-3 words drawn from a small pool so
// that collisions happen; NULL appears for aspect and opinion.
inline Quad RandomQuad(std::mt19937_64& rng) {
  static const std::vector<std::string> words = {"pizza", "service", "wine", "the", "very",
                                                 "slow", "great", "bad", "ok",  "it's",
                                                 "menu", "5$",   "n't",  "a-b", "(so)"};
  static const std::vector<std::string> categories = {"food quality", "service general",
                                                      "drinks prices", "restaurant general",
                                                      "ambience#general"};
  auto span = [&] {
    if (UniformIndex(rng, 6) == 0) return std::string(kNullLabel);
    size_t n = 1 + UniformIndex(rng, 3);
    std::string s;
    for (size_t i = 0; i < n; ++i) {
      if (i) s += ' ';
      s += words[UniformIndex(rng, words.size())];
    }
    return s;
  };
  Quad q;
  q.aspect = span();
  q.category = categories[UniformIndex(rng, categories.size())];
  q.opinion = span();
  q.polarity = static_cast<Polarity>(UniformIndex(rng, 3));
  return q;
}

}  // namespace star::testing
