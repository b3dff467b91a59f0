#pragma once

#include <memory>
#include <string>
#include <variant>

#include "hyperwalk/mobius.hpp"
#include "hyperwalk/schottky.hpp"
#include "hyperwalk/word.hpp"

namespace hyperwalk {

// F_k acting on its Cayley tree.
struct TreeModel {
  int k = 2;
  ReducedWord basepoint;
};

// Certified Schottky group acting on the upper half-plane; group elements
// are words in its generators.
struct HalfplaneModel {
  std::shared_ptr<const SchottkyGroup> group;
  HPoint basepoint{0.0, 1.0};
};

using Model = std::variant<TreeModel, HalfplaneModel>;

inline bool is_tree(const Model& m) { return std::holds_alternative<TreeModel>(m); }
int model_rank(const Model& m);
std::string model_name(const Model& m);

// d(x0, g x0) with x0 the model basepoint.
double displacement(const Model& m, const ReducedWord& g);
double translation_length(const Model& m, const ReducedWord& g);
bool is_loxodromic(const Model& m, const ReducedWord& g);

}  // namespace hyperwalk
