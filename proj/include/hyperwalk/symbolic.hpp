#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "hyperwalk/mobius.hpp"
#include "hyperwalk/schottky.hpp"
#include "hyperwalk/word.hpp"

namespace hyperwalk {

// Stretch of a geodesic inside the closed fundamental domain. `chart` sends
// the complete geodesic to the imaginary axis (backward end to 0), and the
// stretch is the set of chart points i*exp(s) with s_begin <= s <= s_end.
struct GeodesicPiece {
  MobiusMap chart;
  double s_begin = 0.0;
  double s_end = 0.0;

  double length() const { return s_end - s_begin; }
  // Point and forward direction in fundamental-domain coordinates.
  TangentH at(double s) const;
};

// Log-height where the chart image of a disk's boundary meets the imaginary axis.
double crossing_height(const MobiusMap& chart, const BoundaryDisk& disk);

// One period of the closed geodesic of a cyclically reduced word, cut into
// its pieces in the fundamental domain (one per letter). The lengths sum to
// the translation length of the word.
std::vector<GeodesicPiece> closed_geodesic_pieces(const SchottkyGroup& group, const CyclicWord& core);

// Geodesic ray from an origin in the fundamental domain toward the boundary
// point whose reduced expansion starts with `expansion`. Piece m is the ray's
// passage through the translate expansion[0..m) * F, pulled back to F. Deep
// points of the ray underflow doubles, so everything stays in these frames.
class SymbolicRay {
 public:
  SymbolicRay(std::shared_ptr<const SchottkyGroup> group, HPoint origin, ReducedWord expansion,
              std::size_t lookahead = 48);

  const ReducedWord& expansion() const { return expansion_; }
  BoundaryPointH endpoint() const { return endpoint_; }
  // Longest arclength the available letters determine.
  double available_length();
  std::size_t piece_count();

  const GeodesicPiece& piece(std::size_t m);
  // Arclength from the origin to the start of piece m.
  double piece_start(std::size_t m);
  std::size_t piece_at(double t);
  TangentH point_at(double t);

 private:
  bool extend();
  std::shared_ptr<const SchottkyGroup> group_;
  HPoint origin_;
  ReducedWord expansion_;
  std::size_t lookahead_;
  BoundaryPointH endpoint_;
  BoundaryPointH backward_;  // backward endpoint in the frame of the last piece
  std::vector<GeodesicPiece> pieces_;
  std::vector<double> starts_;
};

}  // namespace hyperwalk
