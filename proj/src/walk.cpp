#include "hyperwalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "hyperwalk/errors.hpp"
#include "hyperwalk/mobius.hpp"
#include "hyperwalk/random.hpp"
#include "hyperwalk/schottky.hpp"

namespace hyperwalk {

StepDistribution::StepDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw InvalidArgument("step distribution has no atoms");
  double total = 0.0;
  for (const auto& a : atoms_) {
    if (!(a.probability > 0.0) || !std::isfinite(a.probability)) {
      throw InvalidArgument("atom " + a.element.str() + " has non-positive probability");
    }
    total += a.probability;
    cumulative_.push_back(total);
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream out;
    out.precision(17);
    out << "probabilities sum to " << total;
    throw InvalidArgument(out.str());
  }
  cumulative_.back() = 1.0;
}

StepDistribution StepDistribution::point_mass(const ReducedWord& g) {
  return StepDistribution({{g, 1.0}});
}

StepDistribution StepDistribution::uniform_nearest_neighbor(int k) {
  std::vector<Atom> atoms;
  for (int g = 0; g < k; ++g) {
    for (int s : {1, -1}) atoms.push_back({ReducedWord(std::vector{Letter::make(g, s)}), 1.0 / (2 * k)});
  }
  return StepDistribution(std::move(atoms));
}

std::size_t StepDistribution::sample(double u) const {
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), atoms_.size() - 1);
}

double StepDistribution::probability_of(const ReducedWord& g) const {
  double p = 0.0;
  for (const auto& a : atoms_) {
    if (a.element == g) p += a.probability;
  }
  return p;
}

bool StepDistribution::nearest_neighbor() const {
  return std::all_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.element.size() == 1; });
}

int StepDistribution::rank() const {
  int r = 0;
  for (const auto& a : atoms_) r = std::max(r, a.element.rank());
  return r;
}

std::string StepDistribution::str() const {
  std::ostringstream out;
  out.precision(17);
  out << "{";
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    out << (i ? ", " : "") << atoms_[i].element.str() << ": " << atoms_[i].probability;
  }
  out << "}";
  return out.str();
}

StepDistribution reflected(const StepDistribution& mu) {
  std::vector<StepDistribution::Atom> atoms;
  for (const auto& a : mu.atoms()) atoms.push_back({a.element.inverse(), a.probability});
  return StepDistribution(std::move(atoms));
}

ReducedWord SamplePath::word_at(std::int32_t node, std::size_t depth) const {
  std::vector<Letter> letters(nodes_[static_cast<std::size_t>(node)].depth);
  for (std::int32_t n = node; n != 0; n = nodes_[static_cast<std::size_t>(n)].parent) {
    letters[nodes_[static_cast<std::size_t>(n)].depth - 1] = nodes_[static_cast<std::size_t>(n)].letter;
  }
  letters.resize(std::min(depth, letters.size()));
  return ReducedWord(letters);
}

ReducedWord SamplePath::prefix(std::size_t m) const {
  const std::int32_t node = prefix_node_.at(m);
  return word_at(node, nodes_[static_cast<std::size_t>(node)].depth);
}

std::size_t SamplePath::stable_depth(std::size_t from, std::size_t to) const {
  if (from > to || to > steps()) throw InvalidArgument("bad stability window");
  std::size_t d = length(from);
  for (std::size_t m = from + 1; m <= to; ++m) d = std::min<std::size_t>(d, dip_[m]);
  return d;
}

ReducedWord SamplePath::stable_prefix(std::size_t from, std::size_t to) const {
  return word_at(prefix_node_[to], stable_depth(from, to));
}

std::size_t SamplePath::last_identity_visit() const {
  for (std::size_t m = steps(); m > 0; --m) {
    if (length(m) == 0) return m;
  }
  return 0;
}

SamplePath sample_path(const StepDistribution& mu, std::size_t n, std::uint64_t seed,
                       std::uint64_t path_index) {
  if (n < 1) throw InvalidArgument("sample_path needs n >= 1");
  SamplePath path;
  path.seed_ = seed;
  path.path_index_ = path_index;
  auto atoms = std::make_shared<std::vector<ReducedWord>>();
  for (const auto& a : mu.atoms()) atoms->push_back(a.element);
  path.atoms_ = atoms;

  path.nodes_.reserve(n + 1);
  path.nodes_.push_back({-1, Letter(), 0});
  path.increments_.reserve(n);
  path.prefix_node_.reserve(n + 1);
  path.prefix_node_.push_back(0);
  path.dip_.reserve(n + 1);
  path.dip_.push_back(0);

  const CounterStream stream(seed, path_index);
  std::int32_t cur = 0;
  for (std::size_t m = 1; m <= n; ++m) {
    const std::size_t idx = mu.sample(stream.uniform(m - 1));
    path.increments_.push_back(static_cast<std::uint32_t>(idx));
    std::uint32_t dip = path.nodes_[static_cast<std::size_t>(cur)].depth;
    for (Letter x : (*atoms)[idx].letters()) {
      const auto& node = path.nodes_[static_cast<std::size_t>(cur)];
      if (cur != 0 && node.letter == x.inverse()) {
        cur = node.parent;
        dip = std::min(dip, path.nodes_[static_cast<std::size_t>(cur)].depth);
      } else {
        path.nodes_.push_back({cur, x, node.depth + 1});
        cur = static_cast<std::int32_t>(path.nodes_.size() - 1);
      }
    }
    path.prefix_node_.push_back(cur);
    path.dip_.push_back(dip);
  }
  return path;
}

namespace {

bool distinct_axes(const ReducedWord& g, const ReducedWord& h, const SchottkyGroup* group) {
  if (group == nullptr) return g * h != h * g;
  const GeodesicH ag = axis_h(group->evaluate(g));
  const GeodesicH ah = axis_h(group->evaluate(h));
  const double same = std::max(boundary_distance(ag.from, ah.from), boundary_distance(ag.to, ah.to));
  const double swapped = std::max(boundary_distance(ag.from, ah.to), boundary_distance(ag.to, ah.from));
  return std::min(same, swapped) > 1e-9;
}

bool loxodromic(const ReducedWord& g, const SchottkyGroup* group) {
  if (group == nullptr) return !g.empty();
  return classify(group->evaluate(g)) == IsometryClass::Loxodromic;
}

}  // namespace

GenerationDiagnostic generation_check(const StepDistribution& mu, int radius, int k,
                                      const SchottkyGroup* group) {
  constexpr std::size_t kMaxElements = 50000;
  GenerationDiagnostic diag;
  std::set<ReducedWord> seen;
  std::vector<ReducedWord> frontier;
  for (const auto& a : mu.atoms()) {
    if (seen.insert(a.element).second) frontier.push_back(a.element);
  }
  for (int level = 1; level < radius && seen.size() < kMaxElements; ++level) {
    std::vector<ReducedWord> next;
    for (const auto& w : frontier) {
      for (const auto& a : mu.atoms()) {
        ReducedWord p = w * a.element;
        if (seen.insert(p).second) next.push_back(std::move(p));
      }
    }
    frontier = std::move(next);
  }
  diag.explored = seen.size();

  std::vector<ReducedWord> lox;
  for (const auto& w : seen) {
    if (loxodromic(w, group)) lox.push_back(w);
  }
  // Shortest elements first gives the most readable witnesses.
  std::stable_sort(lox.begin(), lox.end(),
                   [](const ReducedWord& a, const ReducedWord& b) { return a.size() < b.size(); });
  for (std::size_t i = 0; i < lox.size() && !diag.nonelementary; ++i) {
    for (std::size_t j = i + 1; j < lox.size() && j < i + 200; ++j) {
      if (distinct_axes(lox[i], lox[j], group)) {
        diag.nonelementary = true;
        diag.witness_first = lox[i].str();
        diag.witness_second = lox[j].str();
        break;
      }
    }
  }

  diag.generates = true;
  for (int g = 0; g < k; ++g) {
    for (int s : {1, -1}) {
      if (!seen.contains(ReducedWord(std::vector{Letter::make(g, s)}))) diag.generates = false;
    }
  }
  if (!diag.nonelementary) diag.warnings.push_back("no two loxodromics with distinct axes: elementary support");
  if (!diag.generates) {
    diag.warnings.push_back("support does not reach every generator and inverse within radius " +
                            std::to_string(radius));
  }
  return diag;
}

}  // namespace hyperwalk
