#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "geodual/dual_metric.hpp"
#include "geodual/error.hpp"
#include "test_support.hpp"

using namespace geodual;
using geodual::testing::genus2;
using geodual::testing::torus;

namespace {

const double kLog2 = std::log(2.0);

GeodesicCurrent atoms(const PresentationPtr& g, std::vector<std::pair<std::string, double>> parts) {
  return GeodesicCurrent::atomic(g, parts);
}

PlanePoint sample(std::mt19937_64& rng, double r) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return PlanePoint::polar(r * u(rng), kTwoPi * u(rng));
}

// Power of z with respect to the geodesic with real endpoints e1, e2.
double power(double e1, double e2, Complex z) {
  if (std::isinf(e1)) return z.real() - e2;
  if (std::isinf(e2)) return z.real() - e1;
  return std::norm(z - (e1 + e2) / 2.0) - (e1 - e2) * (e1 - e2) / 4.0;
}

}  // namespace

TEST(DualDistance, LiouvilleIsHyperbolicDistance) {
  std::mt19937_64 rng(31);
  const auto L = GeodesicCurrent::liouville(1.0, torus());
  const auto L3 = GeodesicCurrent::liouville(3.0, torus());
  for (int k = 0; k < 300; ++k) {
    const PlanePoint p = sample(rng, 5.0), q = sample(rng, 5.0);
    EXPECT_NEAR(dual_distance(L, p, q), hyp_distance(p, q), 1e-9);
    EXPECT_NEAR(dual_distance(L3, p, q), 3.0 * hyp_distance(p, q), 1e-9);
  }
  EXPECT_NEAR(dual_distance(L, PlanePoint(Complex(0, 1)), PlanePoint(Complex(0, 2))), kLog2, 1e-15);
}

TEST(DualDistance, AtomicMatchesHalfOpenCount) {
  const auto g = torus();
  const auto mu = atoms(g, {{"a", 1}, {"b", 2}});
  const auto ta = axis_translates(*g, g->element("a"), 7.0);
  const auto tb = axis_translates(*g, g->element("b"), 7.0);
  std::mt19937_64 rng(32);
  for (int k = 0; k < 200; ++k) {
    const PlanePoint p = sample(rng, 2.5), q = sample(rng, 2.5);
    double expect = 0.0;
    for (const auto* list : {&ta, &tb}) {
      const double w = list == &ta ? 1.0 : 2.0;
      for (const auto& t : *list) {
        const double e1 = t.axis.first().to_real(), e2 = t.axis.second().to_real();
        expect += w * ((power(e1, e2, p.z()) < 0) != (power(e1, e2, q.z()) < 0));
      }
    }
    EXPECT_EQ(dual_distance(mu, p, q), expect);
  }
}

TEST(DualDistance, EndpointOnAnAtomCountsHalf) {
  const auto g = torus();
  const auto mu = atoms(g, {{"a", 1}});
  const Geodesic ax = axis(g->element("a").matrix);
  const PlanePoint on = ax.point_at(0.2);
  // Leave the axis perpendicularly by a small amount.
  const Geodesic perp(ax.first(), ax.second());
  PlanePoint off(Complex(on.x() + 0.01, on.y()));
  if (ax.distance_to(off) < 1e-6) off = PlanePoint(Complex(on.x(), on.y() * 1.01));
  EXPECT_EQ(dual_distance(mu, on, off), 0.5);
  EXPECT_EQ(dual_distance(mu, off, on), 0.5);
  (void)perp;
}

TEST(DualDistance, MetricAxiomsAndInvariance) {
  std::mt19937_64 rng(33);
  for (const auto& mu : {atoms(genus2(), {{"a", 1}, {"c", 2}, {"abAB", 1}}),
                         atoms(torus(), {{"ab", 1}}) + GeodesicCurrent::liouville(0.5, torus())}) {
    const auto& g = *mu.presentation();
    for (int k = 0; k < 100; ++k) {
      const PlanePoint x = sample(rng, 3.0), y = sample(rng, 3.0), z = sample(rng, 3.0);
      const double dxy = dual_distance(mu, x, y);
      EXPECT_GE(dxy, 0.0);
      EXPECT_EQ(dxy, dual_distance(mu, y, x));
      EXPECT_LE(dual_distance(mu, x, z), dxy + dual_distance(mu, y, z) + 1e-9);
      for (const auto& s : g.generators) {
        EXPECT_NEAR(dual_distance(mu, apply(s, x), apply(s, y)), dxy, 1e-9);
      }
    }
  }
}

TEST(DualDistance, GuirardelSum) {
  std::mt19937_64 rng(34);
  const auto g = torus();
  const auto a = atoms(g, {{"a", 1}}), b = atoms(g, {{"b", 1}});
  const auto ab = a + b;
  for (int k = 0; k < 300; ++k) {
    const PlanePoint x = sample(rng, 3.0), y = sample(rng, 3.0);
    EXPECT_NEAR(dual_distance(ab, x, y), dual_distance(a, x, y) + dual_distance(b, x, y), 1e-12);
  }
}

TEST(DualDistance, SameFaceCollapses) {
  const auto g = torus();
  const auto mu = atoms(g, {{"a", 1}});
  // o itself lies on the axis of a, so start from a generic point.
  const PlanePoint p(Complex(0.05, 0.9));
  std::mt19937_64 rng(35);
  int same = 0;
  for (int k = 0; k < 200; ++k) {
    const PlanePoint q = sample(rng, 1.0);
    const bool separated = crossing_tally(mu, Segment(p, q)).interior > 0;
    EXPECT_EQ(same_point(mu, p, q), !separated && transversal_measure(mu, Segment(p, q)) == 0.0);
    same += same_point(mu, p, q);
  }
  EXPECT_GT(same, 0);
}

TEST(TranslationLength, EqualsIntersection) {
  const auto g = torus();
  const auto b = atoms(g, {{"b", 1}});
  EXPECT_EQ(translation_length(b, g->element("a")), 1.0);
  EXPECT_EQ(translation_length(b, g->element("b")), 0.0);
  EXPECT_EQ(translation_length(b, g->element("ab")), 1.0);
  const auto L = GeodesicCurrent::liouville(1.0, g);
  for (const auto& c : conjugacy_classes(*g, 4)) {
    EXPECT_NEAR(translation_length(L, c), trace_translation_length(c.matrix), 1e-9);
  }
  const auto mu = atoms(genus2(), {{"a", 1}, {"b", 1}, {"abAB", 2}});
  for (const auto& c : conjugacy_classes(*genus2(), 3)) {
    EXPECT_EQ(translation_length(mu, c), intersection_with_curve(mu, c)) << c.word;
  }
}

TEST(FourPoint, LiouvilleDefectBounded) {
  std::mt19937_64 rng(36);
  const auto L = GeodesicCurrent::liouville(1.0, torus());
  for (int k = 0; k < 2000; ++k) {
    const auto r = four_point_defect(L, sample(rng, 6.0), sample(rng, 6.0), sample(rng, 6.0), sample(rng, 6.0));
    EXPECT_LE(r.defect, 2.0 * kLog2 + 1e-9);
    EXPECT_GE(r.defect, 0.0);
  }
}

TEST(FourPoint, SimpleCurveIsATree) {
  std::mt19937_64 rng(37);
  const auto mu = atoms(genus2(), {{"a", 1}, {"c", 1}, {"abAB", 1}});
  for (int k = 0; k < 300; ++k) {
    const auto r = four_point_defect(mu, sample(rng, 3.0), sample(rng, 3.0), sample(rng, 3.0), sample(rng, 3.0));
    EXPECT_LE(r.defect, 1e-9);
  }
}

TEST(Delta, LiouvilleIsLogTwo) {
  const auto cert = delta_lower_bound_boxes(GeodesicCurrent::liouville(1.0, torus()));
  EXPECT_NEAR(cert.value, kLog2, 1e-3);
  EXPECT_LE(cert.value, kLog2 + 1e-9);
  EXPECT_EQ(cert.method, DeltaMethod::box_grid);
}

TEST(Delta, SimpleCurveIsZero) {
  const auto cert = delta_lower_bound_boxes(atoms(torus(), {{"a", 1}}));
  EXPECT_EQ(cert.value, 0.0);
  EXPECT_EQ(cert.recomputed, 0.0);
}

TEST(Delta, CertificateIsConsistent) {
  for (const auto& mu : {atoms(torus(), {{"a", 1}, {"b", 1}}), atoms(genus2(), {{"a", 1}, {"b", 1}})}) {
    DeltaSearchOptions opt;
    opt.radius = 4.0;
    const auto cert = delta_lower_bound_boxes(mu, opt);
    EXPECT_EQ(cert.method, DeltaMethod::atom_combinatorial);
    // Linked lifts of a and b sit in opposite boxes.
    EXPECT_GE(cert.value, 1.0);
    EXPECT_EQ(cert.recomputed,
              std::min(box_measure(mu, cert.best_box), box_measure(mu, opposite_box(cert.best_box))));
    EXPECT_GT(cert.chords, 0u);
  }
}

TEST(Delta, MixedCurrentAtLeastEachPart) {
  const auto g = torus();
  const auto mu = atoms(g, {{"a", 1}}) + GeodesicCurrent::liouville(1.0, g);
  const auto cert = delta_lower_bound_boxes(mu);
  EXPECT_GE(cert.value, kLog2 - 1e-3);
  EXPECT_NEAR(cert.value, std::min(box_measure(mu, cert.best_box), box_measure(mu, opposite_box(cert.best_box))), 1e-9);
}

TEST(Delta, DoubleTransversals) {
  const auto L = GeodesicCurrent::liouville(1.0, torus());
  std::vector<std::array<PlanePoint, 4>> quads;
  for (double t : {2.0, 6.0, 12.0}) {
    quads.push_back(corner_quadruple(Box::from_corners(0.0, std::numbers::pi / 2, std::numbers::pi, 3 * std::numbers::pi / 2), t));
  }
  const double v = delta_via_double_transversals(L, quads);
  EXPECT_LE(v, kLog2 + 1e-9);
  EXPECT_GT(v, kLog2 - 1e-3);
  const PlanePoint o(Complex(0, 1));
  EXPECT_THROW(double_transversal_value(L, {o, PlanePoint::polar(1, 0), PlanePoint::polar(1, 2), PlanePoint::polar(0.1, 1)}),
               Error);
}

TEST(Delta, CornerQuadrupleAndWitness) {
  const Box b = Box::from_corners(0.0, std::numbers::pi / 2, std::numbers::pi, 3 * std::numbers::pi / 2);
  for (const auto& p : corner_quadruple(b, 3.0)) EXPECT_NEAR(hyp_distance(PlanePoint(Complex(0, 1)), p), 3.0, 1e-9);
  const auto w = optimality_witness(GeodesicCurrent::liouville(1.0, torus()), b, {2.0, 8.0, 14.0});
  EXPECT_GT(w.defect, 2.0 * kLog2 - 1e-2);
  EXPECT_LE(w.defect, 2.0 * kLog2 + 1e-6);
  EXPECT_EQ(w.depth, 14.0);
}

TEST(FillingProbe, CompactFillingIsBounded) {
  // a, b, c, d alone miss the separating curve abAB; bc crosses it.
  const auto mu = atoms(genus2(), {{"a", 1}, {"b", 1}, {"c", 1}, {"d", 1}, {"bc", 1}});
  const auto r = filling_ball_probe(mu, PlanePoint(Complex(0, 1)), 2.0, 16);
  EXPECT_TRUE(r.bounded);
  EXPECT_FALSE(r.escape_direction.has_value());
}

TEST(FillingProbe, MissedCurveLetsTheBallEscape) {
  const auto g = genus2();
  const auto mu = atoms(g, {{"a", 1}, {"b", 1}, {"c", 1}, {"d", 1}});
  const Geodesic ax = axis(g->element("abAB").matrix);
  const auto r = filling_ball_probe(mu, ax.point_at(0.0), 2.0, 8, {ax.first(), ax.second()});
  EXPECT_FALSE(r.bounded);
}

TEST(FillingProbe, SingleCurveEscapesAlongItsAxis) {
  const auto g = genus2();
  const auto mu = atoms(g, {{"a", 1}});
  const Geodesic ax = axis(g->element("a").matrix);
  const auto r = filling_ball_probe(mu, ax.point_at(0.1), 0.5, 8, {ax.first(), ax.second()});
  EXPECT_FALSE(r.bounded);
  ASSERT_TRUE(r.escape_direction.has_value());
}
