#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hyperwalk/mobius.hpp"
#include "hyperwalk/word.hpp"

namespace hyperwalk {

// Closed hyperbolic half-space bounded by a geodesic: the inside or outside of
// a Euclidean circle centered on the real line, or a vertical half-plane.
struct BoundaryDisk {
  enum class Kind { Inside, Outside, Left, Right };

  Kind kind = Kind::Inside;
  double center = 0.0;  // cut position for Left/Right
  double radius = 1.0;

  static BoundaryDisk inside(double center, double radius) { return {Kind::Inside, center, radius}; }
  static BoundaryDisk outside(double center, double radius) { return {Kind::Outside, center, radius}; }
  static BoundaryDisk left_of(double cut) { return {Kind::Left, cut, 0.0}; }
  static BoundaryDisk right_of(double cut) { return {Kind::Right, cut, 0.0}; }

  // Signed margin: positive strictly inside, negative outside, in units
  // comparable to Euclidean distance.
  double margin(const HPoint& z) const;
  bool contains(const HPoint& z, double tol = 0.0) const { return margin(z) > tol; }
  bool contains(const BoundaryPointH& p) const;
  // Boundary geodesic, oriented so that the disk lies to its left.
  GeodesicH edge() const;
  // Closed arc of the Cayley circle, as [start, start + length] in angle.
  std::pair<double, double> arc() const;
  // Point on the boundary geodesic, s in (0, 1) sweeping between its ends.
  HPoint boundary_sample(double s) const;
  std::string str() const;
};

struct SchottkyGenerator {
  MobiusMap map;
  BoundaryDisk repelling;   // D-: the map sends its exterior into D+
  BoundaryDisk attracting;  // D+
};

struct CertificationResult {
  bool certified = false;
  bool elementary = false;  // fewer than two generators
  std::string failure;      // empty when certified
  std::vector<std::string> notes;
};

// Tries ping-pong on the given generators and disks. Throws DisksOverlap or
// MappingViolation on failure; samples `samples` points per boundary circle.
CertificationResult schottky_certify(std::span<const SchottkyGenerator> generators,
                                     int samples = 1000);

struct Reduction {
  HPoint point;
  MobiusMap map;      // point = map(z)
  ReducedWord word;   // map as a word in the generators
  double angle = 0.0; // tangent direction after reduction, when tracked
};

// Certified Schottky group with its ping-pong fundamental domain (the common
// exterior of all disks).
class SchottkyGroup {
 public:
  // Certifies on construction.
  explicit SchottkyGroup(std::vector<SchottkyGenerator> generators, int samples = 1000);

  int rank() const { return static_cast<int>(generators_.size()); }
  bool elementary() const { return certification_.elementary; }
  const CertificationResult& certification() const { return certification_; }
  const std::vector<SchottkyGenerator>& generators() const { return generators_; }

  const MobiusMap& matrix(Letter x) const;
  // Half-space containing the image of everything outside the disk of x^{-1}.
  const BoundaryDisk& target_disk(Letter x) const;
  MobiusMap evaluate(const ReducedWord& w) const;
  ScaledMatrix evaluate_scaled(const ReducedWord& w) const;

  bool in_fundamental_domain(const HPoint& z, double tol = 1e-12) const;
  Reduction reduce(const HPoint& z, int max_steps = 10000) const;
  Reduction reduce(const TangentH& v, int max_steps = 10000) const;
  // Expresses g as a word by reducing g applied to an interior point.
  std::optional<ReducedWord> decompose(const MobiusMap& g, double tol = 1e-7) const;

  // A boundary point outside every disk (midpoint of the widest gap).
  BoundaryPointH free_boundary_point() const { return free_point_; }
  // An interior point of the fundamental domain.
  HPoint interior_point() const { return interior_point_; }

  // Boundary point with the infinite reduced expansion given lazily by
  // letter(i), i = 0, 1, ...; iterates until the estimate settles.
  template <class LetterAt>
  BoundaryPointH limit_point(LetterAt letter_at, std::size_t available) const;
  // Limit of the reduced word w followed by period^infinity (w * period
  // must be reduced, period cyclically reduced).
  BoundaryPointH limit_point(const ReducedWord& head, const ReducedWord& period) const;
  // Image of a boundary point under a long word, in homogeneous coordinates
  // so that no intermediate matrix overflows.
  BoundaryPointH apply_word(std::span<const Letter> letters, const BoundaryPointH& start) const;

 private:
  BoundaryPointH apply_letters(std::span<const Letter> letters) const;
  std::vector<SchottkyGenerator> generators_;
  std::vector<MobiusMap> letter_maps_;
  CertificationResult certification_;
  BoundaryPointH free_point_;
  HPoint interior_point_;
};

template <class LetterAt>
BoundaryPointH SchottkyGroup::limit_point(LetterAt letter_at, std::size_t available) const {
  std::vector<Letter> letters;
  std::size_t depth = std::min<std::size_t>(32, available);
  BoundaryPointH previous;
  bool have_previous = false;
  while (true) {
    while (letters.size() < depth) letters.push_back(letter_at(letters.size()));
    BoundaryPointH estimate = apply_letters(letters);
    if (depth >= available) return estimate;
    if (have_previous && boundary_distance(previous, estimate) <= 1e-15) return estimate;
    if (depth >= 4096) return estimate;
    previous = estimate;
    have_previous = true;
    depth = std::min(available, depth * 2);
  }
}

}  // namespace hyperwalk
