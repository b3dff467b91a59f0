#pragma once

#include <memory>
#include <random>
#include <vector>

#include "hyperwalk/schottky.hpp"
#include "hyperwalk/walk.hpp"
#include "hyperwalk/word.hpp"

namespace fixtures {

inline hyperwalk::MobiusMap dilation3() { return {3.0, 0.0, 0.0, 1.0 / 3.0}; }
inline hyperwalk::MobiusMap boost53() { return {5.0 / 3.0, -4.0 / 3.0, -4.0 / 3.0, 5.0 / 3.0}; }

inline std::vector<hyperwalk::SchottkyGenerator> pair_generators() {
  using hyperwalk::BoundaryDisk;
  return {
      {dilation3(), BoundaryDisk::inside(0.0, 1.0 / 3.0), BoundaryDisk::outside(0.0, 3.0)},
      {boost53(), BoundaryDisk::inside(1.25, 0.75), BoundaryDisk::inside(-1.25, 0.75)},
  };
}

inline std::shared_ptr<const hyperwalk::SchottkyGroup> schottky_pair() {
  static const auto group = std::make_shared<const hyperwalk::SchottkyGroup>(pair_generators());
  return group;
}

inline hyperwalk::StepDistribution biased() {
  using hyperwalk::ReducedWord;
  return hyperwalk::StepDistribution({{ReducedWord::parse("a"), 0.4},
                                      {ReducedWord::parse("A"), 0.1},
                                      {ReducedWord::parse("b"), 0.25},
                                      {ReducedWord::parse("B"), 0.25}});
}

inline hyperwalk::ReducedWord random_word(std::mt19937_64& rng, int k, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<int> code(0, 2 * k - 1);
  std::vector<hyperwalk::Letter> letters;
  const std::size_t n = len(rng);
  while (letters.size() < n) {
    const auto x = hyperwalk::Letter::from_code(static_cast<std::uint8_t>(code(rng)));
    if (!letters.empty() && letters.back() == x.inverse()) continue;
    letters.push_back(x);
  }
  return hyperwalk::ReducedWord(letters);
}

}  // namespace fixtures
