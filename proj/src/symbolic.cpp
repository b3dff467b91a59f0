#include "hyperwalk/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hyperwalk/errors.hpp"

namespace hyperwalk {

TangentH GeodesicPiece::at(double s) const {
  const MobiusMap inv = chart.inverse();
  const HPoint w{0.0, std::exp(s)};
  return {inv.apply(w), std::numbers::pi / 2.0 + inv.rotation_at(w)};
}

double crossing_height(const MobiusMap& chart, const BoundaryDisk& disk) {
  const GeodesicH edge = disk.edge();
  const BoundaryPointH p = chart.apply(edge.from);
  const BoundaryPointH q = chart.apply(edge.to);
  if (p.is_infinite() || q.is_infinite() || !(p.value() * q.value() < 0.0)) {
    throw Unstable("geodesic does not cross the boundary of " + disk.str());
  }
  // A geodesic with feet p < 0 < q meets the imaginary axis at height sqrt(-pq).
  return 0.5 * std::log(-p.value() * q.value());
}

std::vector<GeodesicPiece> closed_geodesic_pieces(const SchottkyGroup& group, const CyclicWord& core) {
  const std::size_t l = core.size();
  if (l == 0) throw NotLoxodromic("identity has no closed geodesic");
  std::vector<GeodesicPiece> pieces;
  pieces.reserve(l);
  constexpr std::size_t kUnbounded = static_cast<std::size_t>(-1);
  for (std::size_t j = 0; j < l; ++j) {
    const BoundaryPointH forward =
        group.limit_point([&](std::size_t i) { return core[(j + i) % l]; }, kUnbounded);
    const BoundaryPointH backward = group.limit_point(
        [&](std::size_t i) { return core[(j + l - 1 - (i % l)) % l].inverse(); }, kUnbounded);
    GeodesicPiece piece;
    piece.chart = frame_of(GeodesicH{backward, forward});
    piece.s_begin = crossing_height(piece.chart, group.target_disk(core[(j + l - 1) % l].inverse()));
    piece.s_end = crossing_height(piece.chart, group.target_disk(core[j]));
    if (!(piece.s_end > piece.s_begin)) throw Unstable("degenerate closed-geodesic piece");
    pieces.push_back(piece);
  }
  return pieces;
}

SymbolicRay::SymbolicRay(std::shared_ptr<const SchottkyGroup> group, HPoint origin,
                         ReducedWord expansion, std::size_t lookahead)
    : group_(std::move(group)), origin_(origin), expansion_(std::move(expansion)),
      lookahead_(lookahead) {
  if (!group_->in_fundamental_domain(origin_)) {
    throw InvalidArgument("ray origin must lie in the fundamental domain");
  }
  if (expansion_.size() < lookahead_) {
    throw Unstable("boundary expansion has " + std::to_string(expansion_.size()) +
                   " letters, need at least " + std::to_string(lookahead_));
  }
  endpoint_ = group_->limit_point([&](std::size_t i) { return expansion_[i]; }, expansion_.size());
  // Backward end of the complete geodesic through the origin: conjugate the
  // origin to i, where geodesics through i have feet b and -1/b.
  const double sy = std::sqrt(origin_.y);
  const MobiusMap to_origin(sy, origin_.x / sy, 0.0, 1.0 / sy);
  const auto [u, v] = to_origin.inverse().apply(endpoint_).homogeneous();
  backward_ = to_origin.apply(BoundaryPointH::from_homogeneous(-v, u));
}

bool SymbolicRay::extend() {
  const std::size_t m = pieces_.size();
  if (m + lookahead_ > expansion_.size()) return false;
  const std::size_t letters = expansion_.size();
  BoundaryPointH forward =
      group_->limit_point([&](std::size_t i) { return expansion_[m + i]; }, letters - m);
  GeodesicPiece piece;
  if (m == 0) {
    piece.chart = frame_of(GeodesicH{backward_, forward});
    const HPoint w = piece.chart.apply(origin_);
    piece.s_begin = std::log(std::hypot(w.x, w.y));
    starts_.push_back(0.0);
  } else {
    backward_ = group_->matrix(expansion_[m - 1].inverse()).apply(backward_);
    piece.chart = frame_of(GeodesicH{backward_, forward});
    piece.s_begin = crossing_height(piece.chart, group_->target_disk(expansion_[m - 1].inverse()));
    starts_.push_back(starts_.back() + pieces_.back().length());
  }
  piece.s_end = crossing_height(piece.chart, group_->target_disk(expansion_[m]));
  if (!(piece.s_end >= piece.s_begin)) throw Unstable("ray piece with negative length");
  pieces_.push_back(piece);
  return true;
}

double SymbolicRay::available_length() {
  while (extend()) {
  }
  return pieces_.empty() ? 0.0 : starts_.back() + pieces_.back().length();
}

std::size_t SymbolicRay::piece_count() {
  available_length();
  return pieces_.size();
}

const GeodesicPiece& SymbolicRay::piece(std::size_t m) {
  while (pieces_.size() <= m) {
    if (!extend()) throw TooShort("ray piece " + std::to_string(m) + " beyond available letters");
  }
  return pieces_[m];
}

double SymbolicRay::piece_start(std::size_t m) {
  piece(m);
  return starts_[m];
}

std::size_t SymbolicRay::piece_at(double t) {
  if (t < 0.0) throw InvalidArgument("negative ray time");
  while (pieces_.empty() || starts_.back() + pieces_.back().length() < t) {
    if (!extend()) {
      throw TooShort("ray time " + std::to_string(t) + " exceeds available length " +
                     std::to_string(pieces_.empty() ? 0.0 : starts_.back() + pieces_.back().length()));
    }
  }
  const auto it = std::upper_bound(starts_.begin(), starts_.end(), t);
  return static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - starts_.begin()) - 1));
}

TangentH SymbolicRay::point_at(double t) {
  const std::size_t m = piece_at(t);
  const GeodesicPiece& p = pieces_[m];
  return p.at(std::min(p.s_end, p.s_begin + (t - starts_[m])));
}

}  // namespace hyperwalk
