#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "hyperwalk/harmonic.hpp"
#include "hyperwalk/mobius.hpp"
#include "hyperwalk/model.hpp"
#include "hyperwalk/schottky.hpp"
#include "hyperwalk/walk.hpp"
#include "hyperwalk/word.hpp"

namespace hyperwalk {

// Measure on length-D non-backtracking words: the tree quotient's unit
// tangent bundle seen through depth-D windows.
struct TreeFlowMeasure {
  int k = 2;
  std::size_t depth = 0;
  std::map<ReducedWord, double> masses;
  std::map<ReducedWord, double> std_errors;  // empty for exact measures

  double mass(const ReducedWord& w) const;
  double std_error(const ReducedWord& w) const;
  double total() const;
  // max over w' of |sum_s m[s w'] - sum_t m[w' t]|, |w'| = D - 1.
  double shift_residual() const;
};

// Grid over fundamental-domain representatives: x bins, logarithmic y bins,
// and angle sectors; everything else goes to the overflow bin.
struct Chart {
  double x_min = -3.0, x_max = 3.0;
  double y_min = 0.2, y_max = 5.0;
  int nx = 8, ny = 8, na = 8;

  std::size_t bins() const { return static_cast<std::size_t>(nx) * ny * na; }
  // Bin of a tangent vector, or bins() for overflow.
  std::size_t locate(const TangentH& v) const;
  std::size_t index(int ix, int iy, int ia) const { return (static_cast<std::size_t>(ix) * ny + iy) * na + ia; }
  std::array<int, 3> coordinates(std::size_t bin) const;
  std::string str() const;
  friend bool operator==(const Chart&, const Chart&) = default;
};

struct BinnedMeasure {
  Chart chart;
  std::vector<double> masses;      // chart.bins() entries
  double overflow = 0.0;
  std::vector<double> std_errors;  // batch-means errors, may be empty
  std::size_t samples = 0;

  double total() const;
};

// Normalized arclength along a closed geodesic; `source` is the element.
struct ClosedGeodesicMeasure {
  std::variant<TreeFlowMeasure, BinnedMeasure> measure;
  double length = 0.0;
  std::string source;

  const TreeFlowMeasure& tree() const { return std::get<TreeFlowMeasure>(measure); }
  const BinnedMeasure& binned() const { return std::get<BinnedMeasure>(measure); }
};

// Frequencies of the length-D windows of the periodic core of g, with
// batch-means errors over 20 stretches of the period.
ClosedGeodesicMeasure loxo_occupation_tree(const ReducedWord& g, int k, std::size_t depth);

// Sliding-window frequencies along a boundary prefix; errors by batch means.
TreeFlowMeasure ray_oracle_tree(const TreeBoundaryPrefix& xi, int k, std::size_t depth);

// Stationary law of the kernel's letter chain.
std::vector<double> stationary_law(const HarmonicKernel& kernel);
// pi(w1) prod q(w_i -> w_{i+1}) on words of length D.
TreeFlowMeasure markov_flow_prediction(const HarmonicKernel& kernel, std::size_t depth);
// Throws ValidationFailed unless every mass agrees with the oracle within
// `sigmas` of its standard error. Returns the largest deviation in sigmas.
double validate_flow_prediction(const TreeFlowMeasure& prediction, const TreeFlowMeasure& oracle,
                                double sigmas = 3.0);

inline constexpr double kDefaultArcStep = 0.02;

// Samples one period of the axis of g, reduces each tangent vector into the
// fundamental domain and bins it.
ClosedGeodesicMeasure loxo_occupation_h2(const MobiusMap& g, const SchottkyGroup& group, const Chart& chart,
                                         double step = kDefaultArcStep);
// Same measure for an element given as a word in the generators; works for
// words whose matrices overflow.
ClosedGeodesicMeasure loxo_occupation_h2(const ReducedWord& g, const SchottkyGroup& group, const Chart& chart,
                                         double step = kDefaultArcStep);

// Bins the ray from the model basepoint toward the path's limit point over
// arclength [0, horizon].
BinnedMeasure ray_oracle_h2(const SamplePath& path, const HalfplaneModel& model, double horizon,
                            const Chart& chart, double step = kDefaultArcStep);

double tv_distance(const TreeFlowMeasure& a, const TreeFlowMeasure& b);
double tv_distance(const BinnedMeasure& a, const BinnedMeasure& b);

using BinSet = std::vector<std::size_t>;
using CylinderSet = std::vector<ReducedWord>;

// Default test family: 3x3x3 blocks of bins, sliding in every direction.
std::vector<BinSet> sliding_windows(const Chart& chart, int width = 3);

// Bins within Chebyshev distance r of the set (angle periodic, x and y
// clamped at the edges), and the bins whose whole r-neighborhood is inside.
BinSet dilate(const Chart& chart, const BinSet& set, int r);
BinSet erode(const Chart& chart, const BinSet& set, int r);

struct SandwichRow {
  double lower = 0.0;  // oracle mass of the interior
  double value = 0.0;  // loxodromic mass of the set
  double upper = 0.0;  // oracle mass of the neighborhood
  double slack = 0.0;
  double margin = 0.0;  // min distance to either bound, negative on failure
};

struct SandwichResult {
  bool pass = true;
  double worst_margin = 0.0;
  std::size_t worst_set = 0;
  std::vector<SandwichRow> rows;
};

// Checks oracle(I_r A) - slack <= loxo(A) <= oracle(N_r A) + slack for each
// set. `slack` has one entry per set, or a single shared entry.
SandwichResult portmanteau_sandwich(const BinnedMeasure& loxo, const BinnedMeasure& oracle, int r,
                                    const std::vector<BinSet>& family, const std::vector<double>& slack);
// Tree version: cylinders are clopen, so the interior is the set itself and
// the r-neighborhood drops the last r letters of each window.
SandwichResult portmanteau_sandwich(const TreeFlowMeasure& loxo, const TreeFlowMeasure& oracle, int r,
                                    const std::vector<CylinderSet>& family, const std::vector<double>& slack);

double bin_set_mass(const BinnedMeasure& m, const BinSet& set);

}  // namespace hyperwalk
