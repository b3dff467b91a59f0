#include "hyperwalk/model.hpp"

namespace hyperwalk {

int model_rank(const Model& m) {
  if (const auto* t = std::get_if<TreeModel>(&m)) return t->k;
  return std::get<HalfplaneModel>(m).group->rank();
}

std::string model_name(const Model& m) { return is_tree(m) ? "tree" : "halfplane"; }

double displacement(const Model& m, const ReducedWord& g) {
  if (const auto* t = std::get_if<TreeModel>(&m)) {
    return static_cast<double>((t->basepoint.inverse() * g * t->basepoint).size());
  }
  const auto& h = std::get<HalfplaneModel>(m);
  return h.group->evaluate_scaled(g).displacement(h.basepoint);
}

double translation_length(const Model& m, const ReducedWord& g) {
  const CyclicReduction r = cyclic_reduce(g);
  if (is_tree(m)) return static_cast<double>(r.core.size());
  if (r.core.empty()) return 0.0;
  return std::get<HalfplaneModel>(m).group->evaluate_scaled(r.core.as_word()).translation_length();
}

bool is_loxodromic(const Model& m, const ReducedWord& g) {
  if (is_tree(m)) return !g.empty();
  const CyclicReduction r = cyclic_reduce(g);
  if (r.core.empty()) return false;
  return std::get<HalfplaneModel>(m).group->evaluate_scaled(r.core.as_word()).loxodromic();
}

}  // namespace hyperwalk
