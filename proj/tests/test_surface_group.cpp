#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "geodual/error.hpp"
#include "test_support.hpp"

using namespace geodual;
using geodual::testing::all_words;
using geodual::testing::data_path;
using geodual::testing::genus2;
using geodual::testing::torus;

namespace {

const PlanePoint kO(Complex(0.0, 1.0));

ErrorCode code_of(const std::string& json) {
  try {
    parse_presentation(json);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidArgument;
}

std::string torus_json(const std::string& gens, const std::string& extra = "") {
  return R"({"name": "t", "labels": ["a", "b"], "generators": )" + gens + R"(, "relators": [])" + extra + "}";
}

}  // namespace

TEST(Presentation, ShippedPresetsLoad) {
  EXPECT_EQ(torus()->generators.size(), 2u);
  EXPECT_TRUE(torus()->cusped);
  EXPECT_EQ(genus2()->generators.size(), 4u);
  EXPECT_FALSE(genus2()->cusped);
  for (const auto& g : genus2()->generators) EXPECT_NEAR(g.det(), 1.0, 1e-12);
}

TEST(Presentation, OctagonRelatorIsIdentity) {
  EXPECT_TRUE(genus2()->evaluate("abABcdCD").is_identity(1e-8));
  EXPECT_FALSE(genus2()->evaluate("abAB").is_identity(1e-3));
}

TEST(Presentation, PuncturedTorusCommutatorIsParabolic) {
  // tr [a, b] = -2 for a once-punctured torus; PSL normalizes the sign.
  EXPECT_NEAR(std::abs(torus()->evaluate("abAB").trace()), 2.0, 1e-12);
  EXPECT_EQ(torus()->evaluate("abAB").classify(), IsometryClass::parabolic);
}

TEST(Presentation, Errors) {
  EXPECT_EQ(code_of("{not json"), ErrorCode::ParseError);
  EXPECT_EQ(code_of(torus_json("[[1, 1, 1, 2.5], [1, -1, -1, 2]]")), ErrorCode::InvalidMatrix);
  EXPECT_EQ(code_of(torus_json("[[0, -1, 1, 0], [1, -1, -1, 2]]")), ErrorCode::NonHyperbolicGenerator);
  EXPECT_EQ(code_of(torus_json("[[1, 1, 1, 2], [1, -1, -1, 2]]", R"(, "basepoint": [1, 1])")), ErrorCode::Unsupported);
  EXPECT_EQ(code_of(R"({"name": "t", "labels": ["a", "b"], "generators": [[1, 1, 1, 2], [1, -1, -1, 2]],
                      "relators": ["ab"]})"),
            ErrorCode::RelatorViolation);
  try {
    load_presentation(data_path("presets/missing.json"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FileNotFound);
  }
  try {
    load_presentation(data_path("fixtures/corrupted_preset.json"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidMatrix);
  }
}

TEST(Words, Reduction) {
  EXPECT_EQ(free_reduce("aAb"), "b");
  EXPECT_EQ(free_reduce("abBA"), "");
  EXPECT_EQ(inverse_word("abC"), "cBA");
  EXPECT_EQ(primitive_root("abab"), std::make_pair(std::string("ab"), 2));
  EXPECT_EQ(primitive_root("aab"), std::make_pair(std::string("aab"), 1));
  EXPECT_THROW(torus()->evaluate("ax"), Error);
}

TEST(Words, CanonicalFormIsAClassInvariant) {
  std::mt19937_64 rng(11);
  const auto& g = *genus2();
  const std::string letters = g.alphabet();
  std::uniform_int_distribution<std::size_t> pick(0, letters.size() - 1);
  for (int k = 0; k < 300; ++k) {
    std::string w;
    for (int j = 0; j < 6; ++j) w += letters[pick(rng)];
    w = free_reduce(w);
    if (w.empty()) continue;
    std::string u;
    for (int j = 0; j < 3; ++j) u += letters[pick(rng)];
    const std::string conj = free_reduce(u + w + inverse_word(u));
    const std::string c = canonical_cyclic_word(w);
    EXPECT_EQ(canonical_cyclic_word(conj), c);
    EXPECT_EQ(canonical_cyclic_word(inverse_word(w)), c);
    EXPECT_EQ(canonical_cyclic_word(c), c);
    const GroupElement r = cyclic_reduce(g, g.element(conj));
    EXPECT_EQ(r.word, c);
    EXPECT_EQ(cyclic_reduce(g, r).word, r.word);
    // Conjugates and inverses share the trace up to sign.
    EXPECT_NEAR(std::abs(r.matrix.trace()), std::abs(g.evaluate(w).trace()), 1e-7 * std::abs(r.matrix.trace()));
  }
}

TEST(OrbitBall, ContainsEveryShortWordInside) {
  for (const auto& gp : {torus(), genus2()}) {
    const auto& g = *gp;
    const double R = 4.0;
    const OrbitBall ball = enumerate_ball(g, R);
    EXPECT_EQ(ball.complete, !g.cusped);
    for (std::size_t k = 1; k < ball.elements.size(); ++k) {
      EXPECT_LE(hyp_distance(kO, apply(ball.elements[k - 1].matrix, kO)),
                hyp_distance(kO, apply(ball.elements[k].matrix, kO)) + 1e-12);
    }
    for (const auto& e : ball.elements) EXPECT_LE(hyp_distance(kO, apply(e.matrix, kO)), R + 1e-9);
    // Brute force: every word of length <= 5 landing inside the ball.
    for (const auto& w : all_words(g, 5)) {
      const PlanePoint p = apply(g.evaluate(w), kO);
      if (hyp_distance(kO, p) > R - 1e-6) continue;
      const bool found = std::any_of(ball.elements.begin(), ball.elements.end(),
                                     [&](const GroupElement& e) { return hyp_distance(apply(e.matrix, kO), p) < 1e-6; });
      EXPECT_TRUE(found) << g.name << " " << w;
    }
  }
}

TEST(OrbitBall, CapRaisesBallTooLarge) {
  EnumerationOptions opt;
  opt.cap = 50;
  try {
    enumerate_ball(*genus2(), 6.0, opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BallTooLarge);
  }
}

TEST(Descend, LandsWhereNoGeneratorHelps) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, kTwoPi), r(0.0, 7.0);
  const auto& g = *genus2();
  for (int k = 0; k < 100; ++k) {
    const PlanePoint p = PlanePoint::polar(r(rng), u(rng));
    const GroupElement h = descend(g, p);
    const PlanePoint q = apply(h.matrix, p);
    EXPECT_TRUE(h.matrix.distance_to(g.evaluate(h.word)) < 1e-6);
    for (const auto& s : g.generators) {
      EXPECT_GE(hyp_distance(kO, apply(s, q)), hyp_distance(kO, q) - 1e-12);
      EXPECT_GE(hyp_distance(kO, apply(s.inverse(), q)), hyp_distance(kO, q) - 1e-12);
    }
  }
}

TEST(AxisTranslates, MatchBruteForceConjugates) {
  struct Case {
    PresentationPtr g;
    std::string rep;
    double rho;
  };
  for (const auto& c : {Case{torus(), "a", 3.0}, Case{torus(), "ab", 3.0}, Case{genus2(), "a", 3.0},
                        Case{genus2(), "abAB", 2.5}}) {
    const auto& g = *c.g;
    const GroupElement rep = g.element(c.rep);
    const auto list = axis_translates(g, rep, c.rho);
    for (std::size_t i = 0; i < list.size(); ++i) {
      EXPECT_LE(list[i].distance, c.rho + 1e-12);
      EXPECT_NEAR(list[i].distance, list[i].axis.distance_from_basepoint(), 1e-12);
      for (std::size_t j = i + 1; j < list.size(); ++j) EXPECT_FALSE(list[i].axis.same_as(list[j].axis, 1e-7));
    }
    const Geodesic ax = axis(rep.matrix);
    for (const auto& w : all_words(g, c.g->cusped ? 6 : 4)) {
      const Geodesic t = apply(g.evaluate(w), ax);
      if (t.distance_from_basepoint() > c.rho - 1e-6) continue;
      const bool found = std::any_of(list.begin(), list.end(), [&](const AxisTranslate& x) { return x.axis.same_as(t, 1e-6); });
      EXPECT_TRUE(found) << c.rep << " translate by " << w;
    }
  }
}

TEST(AxisTranslates, SegmentHitsAreCrossings) {
  const auto& g = *torus();
  const Segment s(PlanePoint(Complex(-0.7, 0.4)), PlanePoint(Complex(1.3, 2.2)));
  const auto hits = axes_meeting_segment(g, g.element("a"), s);
  int expected = 0;
  for (const auto& t : axis_translates(g, g.element("a"), s.reach() + 1e-6)) expected += crosses(t.axis, s) != Crossing::none;
  EXPECT_EQ(static_cast<int>(hits.size()), expected);
  for (const auto& h : hits) {
    EXPECT_NE(h.crossing, Crossing::none);
    EXPECT_EQ(crosses(h.axis, s), h.crossing);
  }
}
