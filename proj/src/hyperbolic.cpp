#include "geodual/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "geodual/error.hpp"

namespace geodual {

namespace {

// Hyperboloid model, signature (-,+,+).
struct Lorentz {
  double t, x, y;
};

double minkowski(const Lorentz& u, const Lorentz& v) { return -u.t * v.t + u.x * v.x + u.y * v.y; }

// Cayley-compatible embedding: spatial part is 2w / (1 - |w|^2).
Lorentz lift(const PlanePoint& p) {
  const double y = p.y();
  const double r2 = std::norm(p.z());
  return {(r2 + 1.0) / (2.0 * y), (r2 - 1.0) / (2.0 * y), -p.x() / y};
}

PlanePoint drop(const Lorentz& v) {
  // t - x without cancellation, using t^2 - x^2 - y^2 = 1.
  const double inv_y = v.x > 0.0 ? (1.0 + v.y * v.y) / (v.t + v.x) : v.t - v.x;
  return PlanePoint(Complex(-v.y / inv_y, 1.0 / inv_y));
}

// Unit normal of the plane cut by the geodesic u1 -> u2, pointing left.
Lorentz normal_of(Complex u1, Complex u2) {
  const Complex e = (u2 - u1) / std::abs(u2 - u1);
  const Complex n = Complex(0.0, 1.0) * e;
  const double t0 = n.real() * u1.real() + n.imag() * u1.imag();
  const double s = std::abs(u2 - u1) / 2.0;
  return {t0 / s, n.real() / s, n.imag() / s};
}

double chord_half_sine(double a, double b) { return std::abs(std::sin((a - b) / 2.0)); }

}  // namespace

// ---- Isometry ----

Isometry::Isometry(double a, double b, double c, double d) : m_{a, b, c, d} { normalize(); }

void Isometry::normalize() {
  for (double v : m_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidMatrix, "non-finite entry");
  }
  const double dt = det();
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidMatrix, "determinant must be positive");
  const double s = std::sqrt(dt);
  double big = 0.0;
  for (double& v : m_) {
    v /= s;
    big = std::max(big, std::abs(v));
  }
  for (double v : m_) {
    if (std::abs(v) > 1e-12 * big) {
      if (v < 0.0) {
        for (double& w : m_) w = -w;
      }
      break;
    }
  }
}

Isometry Isometry::checked(const std::array<double, 4>& e, double det_tol) {
  for (double v : e) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidMatrix, "non-finite entry");
  }
  const double dt = e[0] * e[3] - e[1] * e[2];
  if (dt <= 0.0 || std::abs(dt - 1.0) > det_tol) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "det = %.12g", dt);
    throw Error(ErrorCode::InvalidMatrix, buf);
  }
  return Isometry(e[0], e[1], e[2], e[3]);
}

IsometryClass Isometry::classify() const {
  if (is_identity()) return IsometryClass::identity;
  const double t = std::abs(trace());
  if (t > 2.0 + kTraceTol) return IsometryClass::hyperbolic;
  if (t >= 2.0 - kTraceTol) return IsometryClass::parabolic;
  return IsometryClass::elliptic;
}

Isometry Isometry::operator*(const Isometry& r) const {
  const auto& m = m_;
  const auto& n = r.m_;
  return Isometry(m[0] * n[0] + m[1] * n[2], m[0] * n[1] + m[1] * n[3], m[2] * n[0] + m[3] * n[2],
                  m[2] * n[1] + m[3] * n[3]);
}

double Isometry::distance_to(const Isometry& o) const {
  double plus = 0.0;
  double minus = 0.0;
  for (int k = 0; k < 4; ++k) {
    plus = std::max(plus, std::abs(m_[k] - o.m_[k]));
    minus = std::max(minus, std::abs(m_[k] + o.m_[k]));
  }
  return std::min(plus, minus);
}

bool Isometry::is_identity(double tol) const { return distance_to(Isometry()) <= tol; }

std::array<Complex, 2> Isometry::disk_coefficients() const {
  const double a = m_[0], b = m_[1], c = m_[2], d = m_[3];
  return {Complex((a + d) / 2.0, (b - c) / 2.0), Complex((a - d) / 2.0, -(b + c) / 2.0)};
}

std::string Isometry::to_string() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "[[%.17g,%.17g],[%.17g,%.17g]]", m_[0], m_[1], m_[2], m_[3]);
  return buf;
}

// ---- points ----

PlanePoint::PlanePoint(Complex z) : z_(z) {
  if (!(z.imag() > 0.0) || !std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw Error(ErrorCode::InvalidPoint, "point must lie in the upper half-plane");
  }
}

PlanePoint PlanePoint::from_disk(Complex w) {
  if (!(std::norm(w) < 1.0)) throw Error(ErrorCode::InvalidPoint, "disk point outside unit disk");
  return PlanePoint(Complex(0.0, 1.0) * (1.0 + w) / (1.0 - w));
}

PlanePoint PlanePoint::from_klein(Complex k) {
  const double k2 = std::norm(k);
  if (!(k2 < 1.0)) throw Error(ErrorCode::InvalidPoint, "Klein point outside unit disk");
  return from_disk(k / (1.0 + std::sqrt(1.0 - k2)));
}

PlanePoint PlanePoint::polar(double r, double theta) {
  // Through the hyperboloid so large r stays accurate.
  const Lorentz v{std::cosh(r), std::sinh(r) * std::cos(theta), std::sinh(r) * std::sin(theta)};
  return drop(v);
}

Complex PlanePoint::disk() const { return (z_ - Complex(0.0, 1.0)) / (z_ + Complex(0.0, 1.0)); }

Complex PlanePoint::klein() const {
  const Complex w = disk();
  return 2.0 * w / (1.0 + std::norm(w));
}

double PlanePoint::disk_conformal_gap() const { return 4.0 * y() / std::norm(z_ + Complex(0.0, 1.0)); }

BoundaryPoint::BoundaryPoint(double angle) : angle_(normalize_angle(angle)) {
  if (!std::isfinite(angle)) throw Error(ErrorCode::InvalidArgument, "non-finite boundary angle");
}

BoundaryPoint BoundaryPoint::from_real(double x) {
  if (std::isinf(x)) return infinity();
  // x = -cot(theta / 2)
  return BoundaryPoint(2.0 * std::atan2(1.0, -x));
}

BoundaryPoint BoundaryPoint::from_unit(Complex u) { return BoundaryPoint(std::arg(u)); }

bool BoundaryPoint::is_infinity(double tol) const { return angular_distance(angle_, 0.0) <= tol; }

double BoundaryPoint::to_real() const {
  if (angle_ == 0.0) return std::numeric_limits<double>::infinity();
  return -std::cos(angle_ / 2.0) / std::sin(angle_ / 2.0);
}

double normalize_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

double ccw_offset(double from, double to) { return normalize_angle(to - from); }

double angular_distance(double a, double b) {
  const double d = ccw_offset(a, b);
  return std::min(d, kTwoPi - d);
}

// ---- geodesics ----

Geodesic::Geodesic(BoundaryPoint p, BoundaryPoint q) {
  if (angular_distance(p.angle(), q.angle()) < kSeparationTol) {
    throw Error(ErrorCode::CoincidentPoints, "geodesic endpoints coincide");
  }
  if (p.angle() <= q.angle()) {
    p_ = p;
    q_ = q;
  } else {
    p_ = q;
    q_ = p;
  }
}

double Geodesic::chord_angle() const { return angular_distance(p_.angle(), q_.angle()); }

double Geodesic::distance_from_basepoint() const {
  const double s = chord_half_sine(p_.angle(), q_.angle());
  const double c = std::abs(std::cos((p_.angle() - q_.angle()) / 2.0));
  return std::asinh(c / s);
}

double Geodesic::side(const PlanePoint& x) const {
  return minkowski(lift(x), normal_of(p_.unit(), q_.unit()));
}

double Geodesic::distance_to(const PlanePoint& x) const { return std::asinh(std::abs(side(x))); }

bool Geodesic::links(const Geodesic& o) const {
  const double lo = p_.angle();
  const double hi = q_.angle();
  auto strictly_in = [&](double t) { return t > lo + kSeparationTol && t < hi - kSeparationTol; };
  auto strictly_out = [&](double t) { return t < lo - kSeparationTol || t > hi + kSeparationTol; };
  const double u = o.p_.angle();
  const double v = o.q_.angle();
  return (strictly_in(u) && strictly_out(v)) || (strictly_out(u) && strictly_in(v));
}

bool Geodesic::same_as(const Geodesic& o, double tol) const {
  return angular_distance(p_.angle(), o.p_.angle()) <= tol &&
         angular_distance(q_.angle(), o.q_.angle()) <= tol;
}

PlanePoint Geodesic::foot() const { return point_at(0.0); }

PlanePoint Geodesic::point_at(double s) const {
  const Complex u1 = p_.unit();
  const Complex u2 = q_.unit();
  const Complex m = (u1 + u2) / 2.0;
  const double half = std::abs(u2 - u1) / 2.0;
  const Complex e = (u2 - u1) / (2.0 * half);
  const double ch = std::cosh(s);
  const double sh = std::sinh(s);
  return drop({ch / half, ch * m.real() / half + sh * e.real(), ch * m.imag() / half + sh * e.imag()});
}

double Geodesic::coordinate_of(const PlanePoint& x) const {
  const Complex u1 = p_.unit();
  const Complex u2 = q_.unit();
  const Complex e = (u2 - u1) / std::abs(u2 - u1);
  const Lorentz v = lift(x);
  const double c = minkowski(v, normal_of(u1, u2));
  return std::asinh((v.x * e.real() + v.y * e.imag()) / std::sqrt(1.0 + c * c));
}

// ---- segments ----

Segment::Segment(PlanePoint a, PlanePoint b, bool include_a, bool include_b)
    : a_(a), b_(b), include_a_(include_a), include_b_(include_b) {
  singleton_ = hyp_distance(a, b) < 1e-14;
  if (singleton_ && !(include_a && include_b)) {
    throw Error(ErrorCode::DegenerateSegment, "singleton segment needs both endpoints included");
  }
}

double Segment::length() const { return hyp_distance(a_, b_); }

Geodesic Segment::extension() const {
  if (singleton_) throw Error(ErrorCode::DegenerateSegment, "singleton has no extension");
  const Lorentz va = lift(a_);
  const Lorentz vb = lift(b_);
  const double q = std::exp(-hyp_distance(a_, b_));
  // Null vectors a - e^{-d} b and b - e^{-d} a point at the two ends.
  const Complex end_a(va.x - q * vb.x, va.y - q * vb.y);
  const Complex end_b(vb.x - q * va.x, vb.y - q * va.y);
  return Geodesic(BoundaryPoint::from_unit(end_a), BoundaryPoint::from_unit(end_b));
}

PlanePoint Segment::midpoint() const {
  if (singleton_) return a_;
  const Geodesic g = extension();
  return g.point_at((g.coordinate_of(a_) + g.coordinate_of(b_)) / 2.0);
}

double Segment::reach() const {
  const PlanePoint o(Complex(0.0, 1.0));
  return std::max(hyp_distance(o, a_), hyp_distance(o, b_));
}

// ---- intervals and boxes ----

BoundaryInterval::BoundaryInterval(BoundaryPoint start, BoundaryPoint end, bool include_start,
                                   bool include_end)
    : start_(start), end_(end), include_start_(include_start), include_end_(include_end) {}

bool BoundaryInterval::is_singleton() const {
  return angular_distance(start_.angle(), end_.angle()) < kSeparationTol && include_start_ &&
         include_end_;
}

bool BoundaryInterval::is_empty() const {
  return angular_distance(start_.angle(), end_.angle()) < kSeparationTol &&
         !(include_start_ && include_end_);
}

bool BoundaryInterval::contains(const BoundaryPoint& p) const {
  if (angular_distance(start_.angle(), end_.angle()) < kSeparationTol) {
    return include_start_ && include_end_ && angular_distance(p.angle(), start_.angle()) < kSeparationTol;
  }
  if (angular_distance(p.angle(), start_.angle()) < kSeparationTol) return include_start_;
  if (angular_distance(p.angle(), end_.angle()) < kSeparationTol) return include_end_;
  return ccw_offset(start_.angle(), p.angle()) < length();
}

Box::Box(BoundaryInterval i, BoundaryInterval j) : i_(i), j_(j) {
  const double a = i.start().angle(), b = i.end().angle(), c = j.start().angle(), d = j.end().angle();
  const double turn = ccw_offset(a, b) + ccw_offset(b, c) + ccw_offset(c, d) + ccw_offset(d, a);
  if (std::abs(turn - kTwoPi) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "box corners are not counter-clockwise");
  }
  if (closure_gap() < kSeparationTol) {
    throw Error(ErrorCode::NonCompactBox, "interval closures touch");
  }
}

Box Box::from_corners(double a, double b, double c, double d, bool closed) {
  return Box(BoundaryInterval(BoundaryPoint(a), BoundaryPoint(b), true, closed),
             BoundaryInterval(BoundaryPoint(c), BoundaryPoint(d), true, closed));
}

std::array<BoundaryPoint, 4> Box::corners() const { return {i_.start(), i_.end(), j_.start(), j_.end()}; }

double Box::closure_gap() const {
  return std::min(ccw_offset(i_.end().angle(), j_.start().angle()),
                  ccw_offset(j_.end().angle(), i_.start().angle()));
}

double Box::reach() const {
  const double phi = closure_gap();
  return std::asinh(std::abs(std::cos(phi / 2.0)) / std::sin(phi / 2.0));
}

PlanePoint Box::center() const {
  const Geodesic ac(i_.start(), j_.start());
  if (angular_distance(i_.end().angle(), j_.end().angle()) >= kSeparationTol) {
    const Geodesic bd(i_.end(), j_.end());
    if (ac.links(bd)) return intersection_point(ac, bd);
  }
  return ac.foot();
}

// ---- actions ----

PlanePoint apply(const Isometry& g, const PlanePoint& p) {
  const Complex z = p.z();
  const Complex num = g.a() * z + g.b();
  const Complex den = g.c() * z + g.d();
  const double n = std::norm(den);
  const double re = (num * std::conj(den)).real() / n;
  return PlanePoint(Complex(re, p.y() / n));
}

BoundaryPoint apply(const Isometry& g, const BoundaryPoint& p) {
  const auto [al, be] = g.disk_coefficients();
  const Complex u = p.unit();
  return BoundaryPoint::from_unit((al * u + be) / (std::conj(be) * u + std::conj(al)));
}

Geodesic apply(const Isometry& g, const Geodesic& geo) {
  return Geodesic(apply(g, geo.first()), apply(g, geo.second()));
}

Segment apply(const Isometry& g, const Segment& s) {
  return Segment(apply(g, s.a()), apply(g, s.b()), s.include_a(), s.include_b());
}

Box apply(const Isometry& g, const Box& box) {
  const auto& i = box.first();
  const auto& j = box.second();
  return Box(BoundaryInterval(apply(g, i.start()), apply(g, i.end()), i.include_start(), i.include_end()),
             BoundaryInterval(apply(g, j.start()), apply(g, j.end()), j.include_start(), j.include_end()));
}

double hyp_distance(const PlanePoint& p, const PlanePoint& q) {
  return 2.0 * std::asinh(std::abs(p.z() - q.z()) / (2.0 * std::sqrt(p.y() * q.y())));
}

std::array<BoundaryPoint, 2> fixed_points(const Isometry& g) {
  if (!(std::abs(g.trace()) > 2.0 + kTraceTol)) {
    throw Error(ErrorCode::NotHyperbolic, "element is not hyperbolic: " + g.to_string());
  }
  const auto [al, be] = g.disk_coefficients();
  const double r = std::sqrt(al.real() * al.real() - 1.0);
  const Complex u1 = Complex(r, al.imag()) / std::conj(be);
  const Complex u2 = Complex(-r, al.imag()) / std::conj(be);
  // |g'(u)| = |conj(beta) u + conj(alpha)|^{-2}; attracting where that is < 1.
  const double k1 = std::abs(std::conj(be) * u1 + std::conj(al));
  const double k2 = std::abs(std::conj(be) * u2 + std::conj(al));
  const BoundaryPoint p1 = BoundaryPoint::from_unit(u1);
  const BoundaryPoint p2 = BoundaryPoint::from_unit(u2);
  if (k1 >= k2) return {p1, p2};
  return {p2, p1};
}

Geodesic axis(const Isometry& g) {
  const auto fp = fixed_points(g);
  return Geodesic(fp[0], fp[1]);
}

double trace_translation_length(const Isometry& g) {
  const double t = std::abs(g.trace());
  if (!(t > 2.0 + kTraceTol)) throw Error(ErrorCode::NotHyperbolic, "element is not hyperbolic");
  return 2.0 * std::acosh(t / 2.0);
}

Crossing crosses(const Geodesic& geo, const Segment& s) {
  if (s.is_singleton()) throw Error(ErrorCode::DegenerateSegment, "use pencil operations for points");
  const double sa = geo.side(s.a());
  const double sb = geo.side(s.b());
  const bool on_a = std::asinh(std::abs(sa)) <= kOnGeodesicTol;
  const bool on_b = std::asinh(std::abs(sb)) <= kOnGeodesicTol;
  if (on_a && on_b) return Crossing::none;
  if (on_a) return Crossing::at_a;
  if (on_b) return Crossing::at_b;
  return (sa < 0.0) != (sb < 0.0) ? Crossing::interior : Crossing::none;
}

bool box_contains(const Box& box, const Geodesic& geo) {
  const auto& i = box.first();
  const auto& j = box.second();
  return (i.contains(geo.first()) && j.contains(geo.second())) ||
         (i.contains(geo.second()) && j.contains(geo.first()));
}

Box opposite_box(const Box& box) {
  const auto& i = box.first();
  const auto& j = box.second();
  return Box(BoundaryInterval(j.end(), i.start(), !j.include_end(), !i.include_start()),
             BoundaryInterval(i.end(), j.start(), !i.include_end(), !j.include_start()));
}

double cross_ratio_log(const BoundaryPoint& a, const BoundaryPoint& b, const BoundaryPoint& c,
                       const BoundaryPoint& d) {
  const std::array<double, 4> t{a.angle(), b.angle(), c.angle(), d.angle()};
  for (int x = 0; x < 4; ++x) {
    for (int y = x + 1; y < 4; ++y) {
      if (angular_distance(t[x], t[y]) < kSeparationTol) {
        throw Error(ErrorCode::CoincidentPoints, "cross-ratio needs four distinct points");
      }
    }
  }
  const double ac = chord_half_sine(t[0], t[2]);
  const double bd = chord_half_sine(t[1], t[3]);
  const double ad = chord_half_sine(t[0], t[3]);
  const double bc = chord_half_sine(t[1], t[2]);
  return std::abs(std::log(ac / ad) + std::log(bd / bc));
}

PlanePoint intersection_point(const Geodesic& g, const Geodesic& h) {
  if (!g.links(h)) throw Error(ErrorCode::InvalidArgument, "geodesics do not cross");
  const Lorentz n1 = normal_of(g.first().unit(), g.second().unit());
  const Lorentz n2 = normal_of(h.first().unit(), h.second().unit());
  // J (n1 x n2) is Minkowski-orthogonal to both.
  Lorentz v{-(n1.x * n2.y - n1.y * n2.x), n1.y * n2.t - n1.t * n2.y, n1.t * n2.x - n1.x * n2.t};
  const double norm = std::sqrt(-minkowski(v, v));
  const double sgn = v.t < 0.0 ? -1.0 : 1.0;
  return drop({sgn * v.t / norm, sgn * v.x / norm, sgn * v.y / norm});
}

}  // namespace geodual
