#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hyperwalk/word.hpp"

namespace hyperwalk {

class SchottkyGroup;

// Finitely supported probability measure on a free group. Half-plane models
// express their atoms as words in the Schottky generators.
class StepDistribution {
 public:
  struct Atom {
    ReducedWord element;
    double probability = 0.0;
  };

  StepDistribution() = default;
  // Throws InvalidArgument unless probabilities are positive and sum to 1
  // within 1e-12.
  explicit StepDistribution(std::vector<Atom> atoms);

  static StepDistribution point_mass(const ReducedWord& g);
  // Uniform on the 2k letters a, A, b, B, ...
  static StepDistribution uniform_nearest_neighbor(int k);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  // Atom index for a uniform draw u in [0, 1), by inverse-CDF lookup.
  std::size_t sample(double u) const;
  double probability_of(const ReducedWord& g) const;
  // Every atom is a single letter.
  bool nearest_neighbor() const;
  int rank() const;
  std::string str() const;

 private:
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
};

StepDistribution reflected(const StepDistribution& mu);

// Realized trajectory h_1, ..., h_n with prefix products omega_m = h_1...h_m.
// Prefixes share structure: each omega_m is a node of a parent-pointer tree
// over the letters, so the whole path costs O(n) memory.
class SamplePath {
 public:
  std::size_t steps() const { return increments_.size(); }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t path_index() const { return path_index_; }

  // omega_m for 0 <= m <= steps(); omega_0 is the identity.
  ReducedWord prefix(std::size_t m) const;
  std::size_t length(std::size_t m) const { return nodes_[prefix_node_[m]].depth; }
  std::size_t increment_index(std::size_t m) const { return increments_.at(m - 1); }
  const ReducedWord& increment(std::size_t m) const { return (*atoms_)[increment_index(m)]; }

  // Longest common prefix of all omega_m with from <= m <= to.
  std::size_t stable_depth(std::size_t from, std::size_t to) const;
  ReducedWord stable_prefix(std::size_t from, std::size_t to) const;
  // Largest m with omega_m = e (0 if the walk never returns).
  std::size_t last_identity_visit() const;

  friend SamplePath sample_path(const StepDistribution& mu, std::size_t n, std::uint64_t seed,
                                std::uint64_t path_index);

 private:
  struct Node {
    std::int32_t parent;
    Letter letter;
    std::uint32_t depth;
  };
  ReducedWord word_at(std::int32_t node, std::size_t depth) const;

  std::shared_ptr<const std::vector<ReducedWord>> atoms_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> increments_;
  std::vector<std::int32_t> prefix_node_;
  // dip_[m]: depth where the geodesic from omega_{m-1} to omega_m turns.
  std::vector<std::uint32_t> dip_;
  std::uint64_t seed_ = 0;
  std::uint64_t path_index_ = 0;
};

SamplePath sample_path(const StepDistribution& mu, std::size_t n, std::uint64_t seed,
                       std::uint64_t path_index);

struct GenerationDiagnostic {
  bool nonelementary = false;  // two loxodromics with distinct axes found
  bool generates = false;      // every generator and inverse reached
  std::string witness_first;
  std::string witness_second;
  std::size_t explored = 0;
  std::vector<std::string> warnings;
};

// Breadth-first closure of the support up to `radius` factors. Pass the
// Schottky group to judge axes in the half-plane; otherwise the tree on F_k.
GenerationDiagnostic generation_check(const StepDistribution& mu, int radius, int k,
                                      const SchottkyGroup* group = nullptr);

}  // namespace hyperwalk
