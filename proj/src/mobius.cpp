#include "hyperwalk/mobius.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hyperwalk/errors.hpp"

namespace hyperwalk {

namespace {

constexpr double kLn2 = std::numbers::ln2;

struct Eigen2 {
  double attracting_lambda;
  double repelling_lambda;
};

// Eigenvector of [[a,b],[c,d]] for eigenvalue lambda as a boundary point.
BoundaryPointH eigen_point(double a, double b, double c, double d, double lambda) {
  const double u1 = b, v1 = lambda - a;
  const double u2 = lambda - d, v2 = c;
  if (std::hypot(u1, v1) >= std::hypot(u2, v2)) return BoundaryPointH::from_homogeneous(u1, v1);
  return BoundaryPointH::from_homogeneous(u2, v2);
}

GeodesicH axis_from_entries(double a, double b, double c, double d, double det) {
  const double tr = a + d;
  const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
  const double big = 0.5 * (tr + std::copysign(disc, tr));
  const double small = det / big;
  return GeodesicH{eigen_point(a, b, c, d, small), eigen_point(a, b, c, d, big)};
}

}  // namespace

BoundaryPointH BoundaryPointH::from_homogeneous(double u, double v) {
  if (v == 0.0) {
    if (u == 0.0) throw InvalidArgument("homogeneous coordinates [0:0]");
    return infinity();
  }
  const double x = u / v;
  if (!std::isfinite(x)) return infinity();
  return finite(x);
}

std::array<double, 2> BoundaryPointH::homogeneous() const {
  if (infinite_) return {1.0, 0.0};
  const double n = std::hypot(value_, 1.0);
  return {value_ / n, 1.0 / n};
}

std::complex<double> BoundaryPointH::on_circle() const {
  using namespace std::complex_literals;
  if (infinite_) return 1.0;
  if (std::abs(value_) <= 1.0) return (value_ - 1i) / (value_ + 1i);
  // Chart swap: with u = 1/x the Cayley image is (1 - iu)/(1 + iu).
  const double u = 1.0 / value_;
  return (1.0 - 1i * u) / (1.0 + 1i * u);
}

std::string BoundaryPointH::str() const {
  if (infinite_) return "inf";
  std::ostringstream out;
  out.precision(17);
  out << value_;
  return out.str();
}

double boundary_distance(const BoundaryPointH& p, const BoundaryPointH& q) {
  return std::abs(p.on_circle() - q.on_circle());
}

std::string to_string(IsometryClass c) {
  switch (c) {
    case IsometryClass::Identity: return "identity";
    case IsometryClass::Elliptic: return "elliptic";
    case IsometryClass::Parabolic: return "parabolic";
    case IsometryClass::Loxodromic: return "loxodromic";
  }
  return "unknown";
}

MobiusMap::MobiusMap(double a, double b, double c, double d) {
  const double det = a * d - b * c;
  if (!(det > 0.0) || !std::isfinite(det)) {
    std::ostringstream out;
    out << "matrix [[" << a << "," << b << "],[" << c << "," << d << "]] has determinant " << det;
    throw InvalidArgument(out.str());
  }
  const double s = std::sqrt(det);
  a_ = a / s;
  b_ = b / s;
  c_ = c / s;
  d_ = d / s;
}

MobiusMap MobiusMap::inverse() const {
  MobiusMap r;
  r.a_ = d_;
  r.b_ = -b_;
  r.c_ = -c_;
  r.d_ = a_;
  return r;
}

MobiusMap operator*(const MobiusMap& g, const MobiusMap& h) {
  MobiusMap r;
  r.a_ = g.a_ * h.a_ + g.b_ * h.c_;
  r.b_ = g.a_ * h.b_ + g.b_ * h.d_;
  r.c_ = g.c_ * h.a_ + g.d_ * h.c_;
  r.d_ = g.c_ * h.b_ + g.d_ * h.d_;
  // Renormalize while ad - bc is still well conditioned; past that point the
  // computed determinant is rounding noise and the factors' unit determinants
  // are the better estimate.
  const double ad = r.a_ * r.d_, bc = r.b_ * r.c_;
  const double det = ad - bc;
  if (std::abs(ad) + std::abs(bc) < 1e6 && det > 0.0) {
    const double s = std::sqrt(det);
    r.a_ /= s;
    r.b_ /= s;
    r.c_ /= s;
    r.d_ /= s;
  }
  return r;
}

HPoint MobiusMap::apply(const HPoint& z) const {
  const double ex = c_ * z.x + d_;
  const double ey = c_ * z.y;
  const double den = ex * ex + ey * ey;
  const double r2 = z.x * z.x + z.y * z.y;
  const double x = (a_ * c_ * r2 + (a_ * d_ + b_ * c_) * z.x + b_ * d_) / den;
  return {x, z.y / den};
}

BoundaryPointH MobiusMap::apply(const BoundaryPointH& p) const {
  const auto [u, v] = p.homogeneous();
  return BoundaryPointH::from_homogeneous(a_ * u + b_ * v, c_ * u + d_ * v);
}

double MobiusMap::rotation_at(const HPoint& z) const {
  return -2.0 * std::atan2(c_ * z.y, c_ * z.x + d_);
}

TangentH MobiusMap::apply(const TangentH& v) const {
  return {apply(v.point), v.angle + rotation_at(v.point)};
}

MobiusMap MobiusMap::sign_normalized() const {
  const double lead = a_ != 0.0 ? a_ : (b_ != 0.0 ? b_ : c_);
  if (lead >= 0.0) return *this;
  MobiusMap r;
  r.a_ = -a_;
  r.b_ = -b_;
  r.c_ = -c_;
  r.d_ = -d_;
  return r;
}

bool MobiusMap::projectively_equal(const MobiusMap& h, double tol) const {
  auto close = [tol](const MobiusMap& p, const MobiusMap& q) {
    return std::abs(p.a_ - q.a_) <= tol && std::abs(p.b_ - q.b_) <= tol &&
           std::abs(p.c_ - q.c_) <= tol && std::abs(p.d_ - q.d_) <= tol;
  };
  MobiusMap neg;
  neg.a_ = -h.a_;
  neg.b_ = -h.b_;
  neg.c_ = -h.c_;
  neg.d_ = -h.d_;
  return close(*this, h) || close(*this, neg);
}

std::string MobiusMap::str() const {
  std::ostringstream out;
  out.precision(17);
  out << "[[" << a_ << "," << b_ << "],[" << c_ << "," << d_ << "]]";
  return out.str();
}

HPoint mobius_apply(const MobiusMap& g, const HPoint& z) { return g.apply(z); }

double hyp_distance(const HPoint& z, const HPoint& w) {
  // sinh(d/2) = |z - w| / (2 sqrt(y_z y_w)), stable for nearby points.
  const double chord = std::hypot(z.x - w.x, z.y - w.y);
  return 2.0 * std::asinh(chord / (2.0 * std::sqrt(z.y * w.y)));
}

IsometryClass classify(const MobiusMap& g, double tol) {
  if (g.projectively_equal(MobiusMap::identity(), tol)) return IsometryClass::Identity;
  const double t = std::abs(g.trace());
  if (t > 2.0 + tol) return IsometryClass::Loxodromic;
  if (t < 2.0 - tol) return IsometryClass::Elliptic;
  return IsometryClass::Parabolic;
}

double translation_length_h(const MobiusMap& g) {
  if (classify(g) != IsometryClass::Loxodromic) return 0.0;
  return 2.0 * std::acosh(std::abs(g.trace()) / 2.0);
}

GeodesicH axis_h(const MobiusMap& g) {
  if (classify(g) != IsometryClass::Loxodromic) {
    throw NotLoxodromic("|trace| = " + std::to_string(std::abs(g.trace())));
  }
  return axis_from_entries(g.a(), g.b(), g.c(), g.d(), 1.0);
}

MobiusMap frame_of(const GeodesicH& gamma) {
  const auto [a1, a2] = gamma.from.homogeneous();
  const auto [b1, b2] = gamma.to.homogeneous();
  double p = a2, q = -a1;
  const double r = b2, s = -b1;
  if (p * s - q * r < 0.0) {
    p = -p;
    q = -q;
  }
  if (!(p * s - q * r > 0.0)) throw InvalidArgument("geodesic endpoints coincide");
  return MobiusMap(p, q, r, s);
}

double dist_to_geodesic(const HPoint& z, const GeodesicH& gamma) {
  const HPoint w = frame_of(gamma).apply(z);
  return std::asinh(std::abs(w.x) / w.y);
}

HPoint geodesic_point(const GeodesicH& gamma, const HPoint& base, double t) {
  const MobiusMap frame = frame_of(gamma);
  const HPoint w = frame.apply(base);
  if (std::asinh(std::abs(w.x) / w.y) > 1e-6) {
    throw BaseNotOnGeodesic("base point is " + std::to_string(std::asinh(std::abs(w.x) / w.y)) +
                            " away from the geodesic");
  }
  const double height = std::hypot(w.x, w.y) * std::exp(t);
  return frame.inverse().apply(HPoint{0.0, height});
}

double tangent_angle(const GeodesicH& gamma, const HPoint& on) {
  const MobiusMap frame = frame_of(gamma);
  const HPoint w = frame.apply(on);
  const HPoint up{0.0, std::hypot(w.x, w.y)};
  return std::numbers::pi / 2.0 + frame.inverse().rotation_at(up);
}

ScaledMatrix::ScaledMatrix(const MobiusMap& g) : a_(g.a()), b_(g.b()), c_(g.c()), d_(g.d()) {
  normalize();
}

void ScaledMatrix::normalize() {
  const double m = std::max({std::abs(a_), std::abs(b_), std::abs(c_), std::abs(d_)});
  if (!(m > 0.0) || !std::isfinite(m)) throw InvalidArgument("degenerate scaled matrix");
  int ex = 0;
  std::frexp(m, &ex);
  a_ = std::ldexp(a_, -ex);
  b_ = std::ldexp(b_, -ex);
  c_ = std::ldexp(c_, -ex);
  d_ = std::ldexp(d_, -ex);
  exponent_ += ex;
}

ScaledMatrix& ScaledMatrix::operator*=(const MobiusMap& h) {
  const double a = a_ * h.a() + b_ * h.c();
  const double b = a_ * h.b() + b_ * h.d();
  const double c = c_ * h.a() + d_ * h.c();
  const double d = c_ * h.b() + d_ * h.d();
  a_ = a;
  b_ = b;
  c_ = c;
  d_ = d;
  normalize();
  return *this;
}

ScaledMatrix operator*(const ScaledMatrix& m, const MobiusMap& h) {
  ScaledMatrix r = m;
  r *= h;
  return r;
}

ScaledMatrix operator*(const MobiusMap& g, const ScaledMatrix& m) {
  ScaledMatrix r = m;
  r.a_ = g.a() * m.a_ + g.b() * m.c_;
  r.b_ = g.a() * m.b_ + g.b() * m.d_;
  r.c_ = g.c() * m.a_ + g.d() * m.c_;
  r.d_ = g.c() * m.b_ + g.d() * m.d_;
  r.normalize();
  return r;
}

MobiusMap ScaledMatrix::to_mobius() const {
  if (!fits_double()) throw InvalidArgument("scaled matrix exponent too large for a MobiusMap");
  const int e = static_cast<int>(exponent_);
  return MobiusMap(std::ldexp(a_, e), std::ldexp(b_, e), std::ldexp(c_, e), std::ldexp(d_, e));
}

double ScaledMatrix::log_abs_trace() const {
  return std::log(std::abs(a_ + d_)) + static_cast<double>(exponent_) * kLn2;
}

double ScaledMatrix::translation_length() const {
  const double lt = log_abs_trace();
  if (lt > 20.0) return 2.0 * lt;  // 2 acosh(t/2) = 2 log t - O(t^-2)
  const double t = std::abs(std::ldexp(a_ + d_, static_cast<int>(exponent_)));
  if (t <= 2.0 + kClassifyTolerance) return 0.0;
  return 2.0 * std::acosh(t / 2.0);
}

bool ScaledMatrix::loxodromic(double tol) const {
  const double lt = log_abs_trace();
  if (lt > 20.0) return true;
  return std::abs(std::ldexp(a_ + d_, static_cast<int>(exponent_))) > 2.0 + tol;
}

double ScaledMatrix::displacement(const HPoint& base) const {
  const double sy = std::sqrt(base.y);
  const MobiusMap to_base(sy, base.x / sy, 0.0, 1.0 / sy);
  const ScaledMatrix h = to_base.inverse() * (*this * to_base);
  const double log_norm2 = std::log(h.a_ * h.a_ + h.b_ * h.b_ + h.c_ * h.c_ + h.d_ * h.d_) +
                           2.0 * static_cast<double>(h.exponent_) * kLn2;
  // cosh d = |h|^2 / 2, so d = log |h|^2 - O(|h|^-4) once |h|^2 is large.
  if (log_norm2 > 40.0) return log_norm2;
  const HPoint i{0.0, 1.0};
  return hyp_distance(i, h.to_mobius().apply(i));
}

double ScaledMatrix::offset_from_imaginary_axis(const HPoint& z) const {
  // Re(gz) / Im(gz) = Re((Az + B)(C conj z + D)) / (det(mantissa) y), and the
  // mantissa determinant is 4^-exponent.
  const double re = a_ * c_ * (z.x * z.x + z.y * z.y) + (a_ * d_ + b_ * c_) * z.x + b_ * d_;
  if (re == 0.0) return 0.0;
  const double log_ratio = std::log(std::abs(re)) + 2.0 * static_cast<double>(exponent_) * kLn2 - std::log(z.y);
  if (log_ratio > 30.0) return kLn2 + log_ratio;
  return std::asinh(std::exp(log_ratio));
}

GeodesicH ScaledMatrix::axis() const {
  if (!loxodromic()) throw NotLoxodromic("scaled matrix is not loxodromic");
  const double det = std::ldexp(1.0, static_cast<int>(std::max<std::int64_t>(-2 * exponent_, -2000)));
  return axis_from_entries(a_, b_, c_, d_, det);
}

}  // namespace hyperwalk
