#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>

namespace hyperwalk {

inline constexpr double kClassifyTolerance = 1e-8;

// Point of the upper half-plane.
struct HPoint {
  double x = 0.0;
  double y = 1.0;

  std::complex<double> z() const { return {x, y}; }
  static HPoint from(std::complex<double> z) { return {z.real(), z.imag()}; }
};

// Point of the real projective line R u {infinity}. Infinity is a tag, not a
// large sentinel; formulas that break at infinity go through the chart swap
// z -> -1/z or through homogeneous coordinates.
class BoundaryPointH {
 public:
  BoundaryPointH() = default;
  static BoundaryPointH finite(double x) { return BoundaryPointH(false, x); }
  static BoundaryPointH infinity() { return BoundaryPointH(true, 0.0); }
  // [u : v]; v == 0 is infinity.
  static BoundaryPointH from_homogeneous(double u, double v);

  bool is_infinite() const { return infinite_; }
  double value() const { return value_; }
  // Unit-norm homogeneous coordinates with a nonnegative second entry.
  std::array<double, 2> homogeneous() const;
  // Image on the unit circle under the Cayley map x -> (x - i)/(x + i).
  std::complex<double> on_circle() const;
  std::string str() const;

 private:
  BoundaryPointH(bool inf, double x) : infinite_(inf), value_(x) {}
  bool infinite_ = false;
  double value_ = 0.0;
};

// Chordal distance between boundary points on the Cayley circle; takes values in [0, 2].
double boundary_distance(const BoundaryPointH& p, const BoundaryPointH& q);

// Oriented complete geodesic, from the negative endpoint to the positive one.
struct GeodesicH {
  BoundaryPointH from;
  BoundaryPointH to;
};

enum class IsometryClass { Identity, Elliptic, Parabolic, Loxodromic };
std::string to_string(IsometryClass c);

// Unit-tangent vector: base point and direction angle measured from the
// positive real direction in half-plane coordinates.
struct TangentH {
  HPoint point;
  double angle = 0.0;
};

// Orientation-preserving isometry z -> (az + b)/(cz + d) stored with unit
// determinant. Construction and products rescale by sqrt(det).
class MobiusMap {
 public:
  MobiusMap() = default;
  MobiusMap(double a, double b, double c, double d);
  static MobiusMap identity() { return {}; }

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }
  double det() const { return a_ * d_ - b_ * c_; }
  double trace() const { return a_ + d_; }

  MobiusMap inverse() const;
  friend MobiusMap operator*(const MobiusMap& g, const MobiusMap& h);

  HPoint apply(const HPoint& z) const;
  BoundaryPointH apply(const BoundaryPointH& p) const;
  TangentH apply(const TangentH& v) const;
  // arg g'(z): the rotation g applies to tangent directions at z.
  double rotation_at(const HPoint& z) const;

  // Representative of +-g with the first nonzero entry positive.
  MobiusMap sign_normalized() const;
  bool projectively_equal(const MobiusMap& h, double tol) const;
  std::string str() const;

 private:
  double a_ = 1.0, b_ = 0.0, c_ = 0.0, d_ = 1.0;
};

HPoint mobius_apply(const MobiusMap& g, const HPoint& z);
double hyp_distance(const HPoint& z, const HPoint& w);
IsometryClass classify(const MobiusMap& g, double tol = kClassifyTolerance);
double translation_length_h(const MobiusMap& g);
GeodesicH axis_h(const MobiusMap& g);

// Unit-determinant T with T(gamma.from) = 0 and T(gamma.to) = infinity.
MobiusMap frame_of(const GeodesicH& gamma);
double dist_to_geodesic(const HPoint& z, const GeodesicH& gamma);
// Unit-speed point at signed arclength t from base, moving toward gamma.to.
HPoint geodesic_point(const GeodesicH& gamma, const HPoint& base, double t);
// Direction of gamma (toward gamma.to) at a point on it.
double tangent_angle(const GeodesicH& gamma, const HPoint& on);

// Long products overflow doubles well before 10^3 factors; this keeps the
// entries in [0.5, 1) times 2^exponent. The represented matrix has unit
// determinant, so the determinant of the mantissa part is 4^-exponent.
class ScaledMatrix {
 public:
  ScaledMatrix() = default;
  explicit ScaledMatrix(const MobiusMap& g);

  ScaledMatrix& operator*=(const MobiusMap& h);
  friend ScaledMatrix operator*(const MobiusMap& g, const ScaledMatrix& m);
  friend ScaledMatrix operator*(const ScaledMatrix& m, const MobiusMap& h);

  std::array<double, 4> mantissa() const { return {a_, b_, c_, d_}; }
  std::int64_t exponent() const { return exponent_; }
  // Exact MobiusMap when the entries fit in a double.
  bool fits_double() const { return exponent_ < 900; }
  MobiusMap to_mobius() const;

  // log |trace|.
  double log_abs_trace() const;
  double translation_length() const;
  bool loxodromic(double tol = kClassifyTolerance) const;
  // d(base, g base).
  double displacement(const HPoint& base) const;
  // Distance from g z to the imaginary axis; stays finite when g z itself
  // would underflow.
  double offset_from_imaginary_axis(const HPoint& z) const;
  GeodesicH axis() const;

 private:
  void normalize();
  double a_ = 1.0, b_ = 0.0, c_ = 0.0, d_ = 1.0;
  std::int64_t exponent_ = 0;
};

}  // namespace hyperwalk
