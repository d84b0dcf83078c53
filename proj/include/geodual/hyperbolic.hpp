#pragma once

// Hyperbolic plane primitives. Group elements act on the upper half-plane;
// the boundary circle is parameterized by the angle of the Cayley image
// w = (z - i) / (z + i), so the basepoint i sits at the disk center and
// "counter-clockwise" always means increasing angle.

#include <array>
#include <complex>
#include <numbers>
#include <string>

namespace geodual {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kTraceTol = 1e-9;
inline constexpr double kOnGeodesicTol = 1e-10;
inline constexpr double kSeparationTol = 1e-9;

enum class IsometryClass { identity, elliptic, parabolic, hyperbolic };

class PlanePoint;
class BoundaryPoint;

// Element of PSL(2,R). Stored with det = 1 and the first nonzero entry
// (row-major) positive.
class Isometry {
 public:
  Isometry() : m_{1.0, 0.0, 0.0, 1.0} {}
  Isometry(double a, double b, double c, double d);

  // Throws InvalidMatrix when |det - 1| exceeds det_tol or det <= 0.
  static Isometry checked(const std::array<double, 4>& entries, double det_tol = 1e-9);

  double a() const { return m_[0]; }
  double b() const { return m_[1]; }
  double c() const { return m_[2]; }
  double d() const { return m_[3]; }
  const std::array<double, 4>& entries() const { return m_; }

  double trace() const { return m_[0] + m_[3]; }
  double det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }
  IsometryClass classify() const;

  Isometry operator*(const Isometry& rhs) const;
  Isometry inverse() const { return Isometry(m_[3], -m_[1], -m_[2], m_[0]); }

  // Max-norm distance between the normalized representatives.
  double distance_to(const Isometry& other) const;
  bool is_identity(double tol = 1e-9) const;

  // Coefficients (alpha, beta) of the conjugate acting on the unit disk as
  // w -> (alpha w + beta) / (conj(beta) w + conj(alpha)).
  std::array<Complex, 2> disk_coefficients() const;

  std::string to_string() const;

 private:
  void normalize();
  std::array<double, 4> m_;
};

class PlanePoint {
 public:
  // Throws InvalidPoint unless Im(z) > 0.
  explicit PlanePoint(Complex z);
  static PlanePoint from_disk(Complex w);
  static PlanePoint from_klein(Complex k);
  // Point at hyperbolic distance r from i in disk direction theta.
  static PlanePoint polar(double r, double theta);

  Complex z() const { return z_; }
  double x() const { return z_.real(); }
  double y() const { return z_.imag(); }

  Complex disk() const;
  Complex klein() const;
  // 1 - |w|^2 evaluated without cancellation.
  double disk_conformal_gap() const;

  bool operator==(const PlanePoint&) const = default;

 private:
  Complex z_;
};

class BoundaryPoint {
 public:
  BoundaryPoint() = default;
  explicit BoundaryPoint(double angle);
  static BoundaryPoint from_real(double x);
  static BoundaryPoint infinity() { return BoundaryPoint(0.0); }
  static BoundaryPoint from_unit(Complex u);

  double angle() const { return angle_; }
  Complex unit() const { return std::polar(1.0, angle_); }
  bool is_infinity(double tol = 1e-15) const;
  // Extended-real coordinate; returns +inf for the point at infinity.
  double to_real() const;

  bool operator==(const BoundaryPoint&) const = default;

 private:
  double angle_ = 0.0;
};

// Angle in [0, 2pi).
double normalize_angle(double theta);
// Counter-clockwise angular offset from `from` to `to`, in [0, 2pi).
double ccw_offset(double from, double to);
// Shortest angular distance, in [0, pi].
double angular_distance(double a, double b);

// Unoriented geodesic, stored with endpoints sorted by angle.
class Geodesic {
 public:
  // Throws CoincidentPoints when the endpoints are closer than kSeparationTol.
  Geodesic(BoundaryPoint p, BoundaryPoint q);

  const BoundaryPoint& first() const { return p_; }
  const BoundaryPoint& second() const { return q_; }

  // Smaller of the two arcs cut out by the endpoints, in (0, pi].
  double chord_angle() const;
  // Hyperbolic distance from the basepoint i.
  double distance_from_basepoint() const;
  double distance_to(const PlanePoint& x) const;
  // sinh of the signed distance; positive to the left of first() -> second().
  double side(const PlanePoint& x) const;

  bool links(const Geodesic& other) const;
  bool same_as(const Geodesic& other, double tol = kSeparationTol) const;

  // Closest point to the basepoint i.
  PlanePoint foot() const;
  // Point at signed arc length s from foot(), positive toward second().
  PlanePoint point_at(double s) const;
  // Arc-length coordinate of the orthogonal projection of x.
  double coordinate_of(const PlanePoint& x) const;
  PlanePoint project(const PlanePoint& x) const { return point_at(coordinate_of(x)); }

 private:
  BoundaryPoint p_;
  BoundaryPoint q_;
};

// Geodesic segment with endpoint-inclusion flags.
class Segment {
 public:
  // Throws DegenerateSegment when a == b unless both flags are set.
  Segment(PlanePoint a, PlanePoint b, bool include_a = true, bool include_b = true);

  const PlanePoint& a() const { return a_; }
  const PlanePoint& b() const { return b_; }
  bool include_a() const { return include_a_; }
  bool include_b() const { return include_b_; }
  bool is_singleton() const { return singleton_; }
  double length() const;
  // Full geodesic through a and b. Throws DegenerateSegment for singletons.
  Geodesic extension() const;
  PlanePoint midpoint() const;
  // Smallest R with the segment inside the ball of radius R about i.
  double reach() const;

 private:
  PlanePoint a_;
  PlanePoint b_;
  bool include_a_;
  bool include_b_;
  bool singleton_;
};

class BoundaryInterval {
 public:
  BoundaryInterval(BoundaryPoint start, BoundaryPoint end, bool include_start, bool include_end);

  const BoundaryPoint& start() const { return start_; }
  const BoundaryPoint& end() const { return end_; }
  bool include_start() const { return include_start_; }
  bool include_end() const { return include_end_; }
  double length() const { return ccw_offset(start_.angle(), end_.angle()); }
  bool is_singleton() const;
  bool is_empty() const;
  bool contains(const BoundaryPoint& p) const;

 private:
  BoundaryPoint start_;
  BoundaryPoint end_;
  bool include_start_;
  bool include_end_;
};

// I x J with corners a, b, c, d counter-clockwise, I = I_{a,b}, J = I_{c,d}.
class Box {
 public:
  // Throws InvalidArgument if the corners are not in counter-clockwise order,
  // NonCompactBox if the closures of I and J meet.
  Box(BoundaryInterval i, BoundaryInterval j);
  // Half-open [a,b) x [c,d) unless closed.
  static Box from_corners(double a, double b, double c, double d, bool closed = false);

  const BoundaryInterval& first() const { return i_; }
  const BoundaryInterval& second() const { return j_; }
  std::array<BoundaryPoint, 4> corners() const;
  // Smallest angular gap between the closures of I and J.
  double closure_gap() const;
  // Radius of a ball about i met by every geodesic in the box.
  double reach() const;
  // Intersection of the diagonals a-c and b-d.
  PlanePoint center() const;

 private:
  BoundaryInterval i_;
  BoundaryInterval j_;
};

enum class Crossing { none, interior, at_a, at_b };

PlanePoint apply(const Isometry& g, const PlanePoint& p);
BoundaryPoint apply(const Isometry& g, const BoundaryPoint& p);
Geodesic apply(const Isometry& g, const Geodesic& geo);
Segment apply(const Isometry& g, const Segment& s);
Box apply(const Isometry& g, const Box& box);

double hyp_distance(const PlanePoint& p, const PlanePoint& q);

// Throws NotHyperbolic unless |tr g| > 2 + kTraceTol.
Geodesic axis(const Isometry& g);
double trace_translation_length(const Isometry& g);
// Attracting and repelling boundary fixed points of a hyperbolic element.
std::array<BoundaryPoint, 2> fixed_points(const Isometry& g);

// Throws DegenerateSegment for singleton segments.
Crossing crosses(const Geodesic& geo, const Segment& s);

bool box_contains(const Box& box, const Geodesic& geo);
Box opposite_box(const Box& box);

// |log(|a-c||b-d| / (|a-d||b-c|))|; throws CoincidentPoints.
double cross_ratio_log(const BoundaryPoint& a, const BoundaryPoint& b, const BoundaryPoint& c,
                       const BoundaryPoint& d);

// Intersection point of two linked geodesics. Throws InvalidArgument otherwise.
PlanePoint intersection_point(const Geodesic& g, const Geodesic& h);

}  // namespace geodual
