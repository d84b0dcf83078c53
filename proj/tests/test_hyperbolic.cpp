#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "geodual/error.hpp"
#include "geodual/hyperbolic.hpp"

using namespace geodual;

namespace {

const PlanePoint kI(Complex(0.0, 1.0));

// Textbook upper half-plane distance.
double uhp_distance(Complex z, Complex w) {
  return std::acosh(1.0 + std::norm(z - w) / (2.0 * z.imag() * w.imag()));
}

PlanePoint random_uhp(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> x(-3.0, 3.0), ly(-2.0, 2.0);
  return PlanePoint(Complex(x(rng), std::exp(ly(rng))));
}

Isometry random_isometry(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const Isometry t(1.0, u(rng), 0.0, 1.0);
  const double s = std::exp(u(rng));
  const Isometry d(std::sqrt(s), 0.0, 0.0, 1.0 / std::sqrt(s));
  const Isometry j(0.0, -1.0, 1.0, 0.0);
  return t * d * j * Isometry(1.0, u(rng), 0.0, 1.0);
}

// Semicircle or vertical line through real endpoints p, q; sign of the
// power of z with respect to it.
double semicircle_power(double p, double q, Complex z) {
  if (std::isinf(p)) return z.real() - q;
  if (std::isinf(q)) return z.real() - p;
  const double c = (p + q) / 2.0, r = std::abs(q - p) / 2.0;
  return std::norm(z - c) - r * r;
}

}  // namespace

TEST(PlanePoint, RejectsLowerHalfPlane) {
  EXPECT_THROW(PlanePoint(Complex(0.0, -1.0)), Error);
  EXPECT_THROW(PlanePoint(Complex(1.0, 0.0)), Error);
}

TEST(PlanePoint, ModelRoundTrips) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 200; ++k) {
    const PlanePoint p = random_uhp(rng);
    EXPECT_NEAR(std::abs(PlanePoint::from_disk(p.disk()).z() - p.z()), 0.0, 1e-9 * (1 + std::abs(p.z())));
    EXPECT_NEAR(std::abs(PlanePoint::from_klein(p.klein()).z() - p.z()), 0.0, 1e-8 * (1 + std::abs(p.z())));
  }
  EXPECT_NEAR(std::abs(kI.disk()), 0.0, 1e-15);
}

TEST(PlanePoint, PolarIsAtRequestedDistance) {
  for (double r : {0.0, 0.3, 2.0, 9.0, 20.0}) {
    for (double th : {0.0, 1.0, 3.5}) {
      EXPECT_NEAR(hyp_distance(kI, PlanePoint::polar(r, th)), r, 1e-9 * (1 + r));
    }
  }
}

TEST(HypDistance, MatchesTextbookFormula) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 500; ++k) {
    const PlanePoint p = random_uhp(rng), q = random_uhp(rng);
    EXPECT_NEAR(hyp_distance(p, q), uhp_distance(p.z(), q.z()), 1e-9);
  }
  EXPECT_NEAR(hyp_distance(kI, PlanePoint(Complex(0.0, 2.0))), std::log(2.0), 1e-15);
}

TEST(Isometry, PreservesDistanceAndKeepsDeterminant) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    const Isometry g = random_isometry(rng) * random_isometry(rng);
    EXPECT_NEAR(g.det(), 1.0, 1e-12);
    const PlanePoint p = random_uhp(rng), q = random_uhp(rng);
    EXPECT_NEAR(hyp_distance(apply(g, p), apply(g, q)), hyp_distance(p, q), 1e-8);
  }
}

TEST(Isometry, CheckedRejectsBadDeterminant) {
  EXPECT_THROW(Isometry::checked({1.0, 1.0, 1.0, 2.5}), Error);
  try {
    Isometry::checked({2.0, 0.0, 0.0, 2.0});
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidMatrix);
  }
  EXPECT_NO_THROW(Isometry::checked({1.0, 1.0, 1.0, 2.0}));
}

TEST(Isometry, Classification) {
  EXPECT_EQ(Isometry().classify(), IsometryClass::identity);
  EXPECT_EQ(Isometry(1.0, 1.0, 0.0, 1.0).classify(), IsometryClass::parabolic);
  EXPECT_EQ(Isometry(0.0, -1.0, 1.0, 0.0).classify(), IsometryClass::elliptic);
  EXPECT_EQ(Isometry(1.0, 1.0, 1.0, 2.0).classify(), IsometryClass::hyperbolic);
}

TEST(BoundaryPoint, AngleConvention) {
  EXPECT_NEAR(BoundaryPoint::from_real(-1.0).angle(), std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(BoundaryPoint::from_real(0.0).angle(), std::numbers::pi, 1e-15);
  EXPECT_NEAR(BoundaryPoint::from_real(1.0).angle(), 3 * std::numbers::pi / 2, 1e-15);
  EXPECT_TRUE(BoundaryPoint::infinity().is_infinity());
  for (double x : {-7.0, -0.3, 0.2, 4.0}) EXPECT_NEAR(BoundaryPoint::from_real(x).to_real(), x, 1e-12 * (1 + x * x));
}

TEST(Geodesic, AxisEndpointsSolveFixedPointEquation) {
  // z = (z + 1) / (z + 2)  <=>  z^2 + z - 1 = 0.
  const Geodesic ax = axis(Isometry(1.0, 1.0, 1.0, 2.0));
  std::array<double, 2> ends{ax.first().to_real(), ax.second().to_real()};
  std::sort(ends.begin(), ends.end());
  EXPECT_NEAR(ends[0], (-1.0 - std::sqrt(5.0)) / 2.0, 1e-12);
  EXPECT_NEAR(ends[1], (-1.0 + std::sqrt(5.0)) / 2.0, 1e-12);
}

TEST(Geodesic, ParabolicHasNoAxis) { EXPECT_THROW(axis(Isometry(1.0, 1.0, 0.0, 1.0)), Error); }

TEST(Geodesic, CoincidentEndpointsThrow) {
  EXPECT_THROW(Geodesic(BoundaryPoint(1.0), BoundaryPoint(1.0)), Error);
}

TEST(Geodesic, ArcLengthParameterization) {
  const Geodesic g(BoundaryPoint(0.4), BoundaryPoint(2.9));
  for (double s : {-3.0, -0.5, 0.0, 1.2, 6.0}) {
    const PlanePoint p = g.point_at(s);
    EXPECT_LT(g.distance_to(p), 1e-10);
    EXPECT_NEAR(g.coordinate_of(p), s, 1e-9);
    EXPECT_NEAR(hyp_distance(p, g.point_at(0.7)), std::abs(s - 0.7), 1e-9);
  }
  EXPECT_NEAR(hyp_distance(kI, g.foot()), g.distance_from_basepoint(), 1e-12);
}

TEST(Geodesic, SideIsSinhOfSignedDistance) {
  std::mt19937_64 rng(4);
  const Geodesic g(BoundaryPoint(1.0), BoundaryPoint(4.0));
  for (int k = 0; k < 100; ++k) {
    const PlanePoint p = random_uhp(rng);
    EXPECT_NEAR(std::abs(g.side(p)), std::sinh(g.distance_to(p)), 1e-9 * std::cosh(g.distance_to(p)));
  }
}

TEST(Geodesic, LinksMatchesEndpointInterleaving) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  for (int k = 0; k < 500; ++k) {
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    if (angular_distance(a, b) < 1e-3 || angular_distance(c, d) < 1e-3) continue;
    if (std::min({angular_distance(a, c), angular_distance(a, d), angular_distance(b, c), angular_distance(b, d)}) < 1e-6) {
      continue;
    }
    const Geodesic g{BoundaryPoint(a), BoundaryPoint(b)}, h{BoundaryPoint(c), BoundaryPoint(d)};
    const bool c_in = ccw_offset(a, c) < ccw_offset(a, b);
    const bool d_in = ccw_offset(a, d) < ccw_offset(a, b);
    EXPECT_EQ(g.links(h), c_in != d_in);
    if (g.links(h)) {
      const PlanePoint x = intersection_point(g, h);
      EXPECT_LT(g.distance_to(x), 1e-9);
      EXPECT_LT(h.distance_to(x), 1e-9);
    }
  }
}

TEST(Crosses, MatchesSemicircleOracle) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> e(-4.0, 4.0);
  int interior = 0;
  for (int k = 0; k < 2000; ++k) {
    double p = e(rng), q = e(rng);
    if (std::abs(p - q) < 1e-3) continue;
    const Geodesic g(BoundaryPoint::from_real(p), BoundaryPoint::from_real(q));
    const PlanePoint a = random_uhp(rng), b = random_uhp(rng);
    const double sa = semicircle_power(p, q, a.z()), sb = semicircle_power(p, q, b.z());
    if (std::abs(sa) < 1e-6 || std::abs(sb) < 1e-6) continue;
    const bool expect = (sa < 0) != (sb < 0);
    interior += expect;
    EXPECT_EQ(crosses(g, Segment(a, b)) == Crossing::interior, expect);
    EXPECT_NE(crosses(g, Segment(a, b)), Crossing::at_a);
  }
  EXPECT_GT(interior, 100);
}

TEST(Crosses, EndpointsAndTangency) {
  const Geodesic imag_axis(BoundaryPoint::from_real(0.0), BoundaryPoint::infinity());
  const PlanePoint on(Complex(0.0, 1.0)), right(Complex(1.0, 1.0)), left(Complex(-1.0, 2.0));
  EXPECT_EQ(crosses(imag_axis, Segment(on, right)), Crossing::at_a);
  EXPECT_EQ(crosses(imag_axis, Segment(right, on)), Crossing::at_b);
  EXPECT_EQ(crosses(imag_axis, Segment(left, right)), Crossing::interior);
  EXPECT_EQ(crosses(imag_axis, Segment(on, PlanePoint(Complex(0.0, 3.0)))), Crossing::none);
  EXPECT_EQ(crosses(imag_axis, Segment(right, PlanePoint(Complex(2.0, 1.0)))), Crossing::none);
  EXPECT_THROW(crosses(imag_axis, Segment(on, on, true, true)), Error);
}

TEST(Segment, DegenerateAndReach) {
  EXPECT_THROW(Segment(kI, kI, true, false), Error);
  EXPECT_TRUE(Segment(kI, kI, true, true).is_singleton());
  std::mt19937_64 rng(7);
  for (int k = 0; k < 100; ++k) {
    const Segment s(random_uhp(rng), random_uhp(rng));
    const Geodesic line = s.extension();
    const double t0 = line.coordinate_of(s.a()), t1 = line.coordinate_of(s.b());
    double far = 0.0;
    for (int j = 0; j <= 200; ++j) far = std::max(far, hyp_distance(kI, line.point_at(t0 + (t1 - t0) * j / 200)));
    EXPECT_LE(far, s.reach() + 1e-9);
    EXPECT_GE(far, s.reach() - 1e-3);
    EXPECT_NEAR(hyp_distance(s.a(), s.midpoint()), s.length() / 2, 1e-9);
  }
}

TEST(CrossRatio, HarmonicQuadruple) {
  EXPECT_NEAR(cross_ratio_log(BoundaryPoint::from_real(-1.0), BoundaryPoint::from_real(0.0),
                              BoundaryPoint::from_real(1.0), BoundaryPoint::infinity()),
              std::log(2.0), 1e-12);
  EXPECT_THROW(cross_ratio_log(BoundaryPoint(1.0), BoundaryPoint(1.0), BoundaryPoint(2.0), BoundaryPoint(3.0)), Error);
}

TEST(CrossRatio, InvariantUnderIsometries) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  for (int k = 0; k < 100; ++k) {
    std::array<double, 4> t{u(rng), u(rng), u(rng), u(rng)};
    std::sort(t.begin(), t.end());
    std::array<BoundaryPoint, 4> p{BoundaryPoint(t[0]), BoundaryPoint(t[1]), BoundaryPoint(t[2]), BoundaryPoint(t[3])};
    const Isometry g = random_isometry(rng);
    EXPECT_NEAR(cross_ratio_log(p[0], p[1], p[2], p[3]),
                cross_ratio_log(apply(g, p[0]), apply(g, p[1]), apply(g, p[2]), apply(g, p[3])), 1e-7);
  }
}

TEST(Box, CornerOrderAndCompactness) {
  EXPECT_NO_THROW(Box::from_corners(0.0, 1.0, 2.0, 3.0));
  EXPECT_THROW(Box::from_corners(0.0, 2.0, 1.0, 3.0), Error);
  try {
    Box::from_corners(0.0, 1.0, 1.0, 3.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonCompactBox);
  }
}

TEST(Box, ContainmentMatchesIntervals) {
  const Box b = Box::from_corners(0.5, 1.5, 3.0, 4.0);
  EXPECT_TRUE(box_contains(b, Geodesic(BoundaryPoint(1.0), BoundaryPoint(3.5))));
  EXPECT_TRUE(box_contains(b, Geodesic(BoundaryPoint(0.5), BoundaryPoint(3.0))));   // closed starts
  EXPECT_FALSE(box_contains(b, Geodesic(BoundaryPoint(1.5), BoundaryPoint(3.5))));  // open end
  EXPECT_FALSE(box_contains(b, Geodesic(BoundaryPoint(1.0), BoundaryPoint(2.0))));
  const Box c = Box::from_corners(0.5, 1.5, 3.0, 4.0, true);
  EXPECT_TRUE(box_contains(c, Geodesic(BoundaryPoint(1.5), BoundaryPoint(4.0))));
}

TEST(Box, OppositeUsesComplementaryArcs) {
  const Box b = Box::from_corners(0.5, 1.5, 3.0, 4.0);
  const Box o = opposite_box(b);
  EXPECT_TRUE(box_contains(o, Geodesic(BoundaryPoint(2.0), BoundaryPoint(5.0))));
  EXPECT_FALSE(box_contains(o, Geodesic(BoundaryPoint(1.0), BoundaryPoint(3.5))));
  // Twice opposite is the same box with its two arcs swapped.
  const Box back = opposite_box(o);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(back.corners()[k].angle(), b.corners()[(k + 2) % 4].angle(), 1e-15);
}

TEST(Box, ReachBoundsEveryGeodesic) {
  std::mt19937_64 rng(9);
  const Box b = Box::from_corners(0.2, 1.1, 2.0, 2.4);
  std::uniform_real_distribution<double> i(0.2, 1.1), j(2.0, 2.4);
  for (int k = 0; k < 200; ++k) {
    EXPECT_LE(Geodesic(BoundaryPoint(i(rng)), BoundaryPoint(j(rng))).distance_from_basepoint(), b.reach() + 1e-9);
  }
  const PlanePoint c = b.center();
  const auto q = b.corners();
  EXPECT_LT(Geodesic(q[0], q[2]).distance_to(c), 1e-9);
  EXPECT_LT(Geodesic(q[1], q[3]).distance_to(c), 1e-9);
}

TEST(Translation, TraceLengthIsDisplacementOnAxis) {
  const Isometry g(2.0, 1.0, 3.0, 2.0);
  const Geodesic ax = axis(g);
  EXPECT_NEAR(trace_translation_length(g), 2.0 * std::acosh(2.0), 1e-12);
  for (double s : {-1.0, 0.0, 2.0}) {
    const PlanePoint x = ax.point_at(s);
    EXPECT_NEAR(hyp_distance(x, apply(g, x)), trace_translation_length(g), 1e-9);
  }
  const auto fp = fixed_points(g);
  PlanePoint z(Complex(0.3, 0.7));
  for (int k = 0; k < 30; ++k) z = apply(g, z);
  EXPECT_NEAR(z.disk().real(), fp[0].unit().real(), 1e-6);
  EXPECT_NEAR(z.disk().imag(), fp[0].unit().imag(), 1e-6);
}
