#include "geodual/dual_metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "geodual/error.hpp"

namespace geodual {

namespace {

const PlanePoint kOrigin(Complex(0.0, 1.0));

// Isometry taking i to x.
Isometry frame_at(const PlanePoint& x) {
  const double s = std::sqrt(x.y());
  return Isometry(s, x.x() / s, 0.0, 1.0 / s);
}

double box_score(const GeodesicCurrent& mu, const Box& b) {
  return std::min(box_measure(mu, b), box_measure(mu, opposite_box(b)));
}

// Box from a start angle and three positive gaps (the fourth closes the circle).
std::optional<Box> box_from_gaps(double a, double g1, double g2, double g3) {
  const double g4 = kTwoPi - g1 - g2 - g3;
  constexpr double kMin = 1e-6;
  if (g1 < kMin || g2 < kMin || g3 < kMin || g4 < kMin) return std::nullopt;
  return Box::from_corners(a, a + g1, a + g1 + g2, a + g1 + g2 + g3);
}

DeltaCertificate continuous_search(const GeodesicCurrent& mu, const DeltaSearchOptions& opt) {
  const int n = std::max(opt.grid, 4);
  const double h0 = kTwoPi / n;
  // Isometry-invariant part only: fix the first corner.
  const bool rotate = mu.has_atoms();
  const int a_steps = rotate ? n : 1;
  double best = -1.0;
  std::array<double, 4> arg{0.0, h0, h0, h0};
  for (int ia = 0; ia < a_steps; ++ia) {
    for (int i1 = 1; i1 < n; ++i1) {
      for (int i2 = 1; i1 + i2 < n; ++i2) {
        for (int i3 = 1; i1 + i2 + i3 < n; ++i3) {
          const auto b = box_from_gaps(ia * h0, i1 * h0, i2 * h0, i3 * h0);
          if (!b) continue;
          const double v = box_score(mu, *b);
          if (v > best + 1e-15) {
            best = v;
            arg = {ia * h0, i1 * h0, i2 * h0, i3 * h0};
          }
        }
      }
    }
  }
  double step = h0 / 2.0;
  for (int round = 0; round < opt.ascent_rounds && step > 1e-10; ++round) {
    bool moved = false;
    for (int k = rotate ? 0 : 1; k < 4; ++k) {
      for (double sgn : {1.0, -1.0}) {
        auto trial = arg;
        trial[static_cast<std::size_t>(k)] += sgn * step;
        const auto b = box_from_gaps(trial[0], trial[1], trial[2], trial[3]);
        if (!b) continue;
        const double v = box_score(mu, *b);
        if (v > best + 1e-15) {
          best = v;
          arg = trial;
          moved = true;
        }
      }
    }
    if (!moved) step /= 2.0;
  }
  const Box box = *box_from_gaps(arg[0], arg[1], arg[2], arg[3]);
  return {box, best, best, mu.has_atoms() ? opt.radius : 0.0, DeltaMethod::box_grid, 0};
}

DeltaCertificate atomic_search(const GeodesicCurrent& mu, const DeltaSearchOptions& opt) {
  const auto chords = support_within(mu, opt.radius);
  struct End {
    double angle;
    std::size_t chord;
  };
  std::vector<End> ends;
  for (std::size_t c = 0; c < chords.size(); ++c) {
    ends.push_back({chords[c].axis.first().angle(), c});
    ends.push_back({chords[c].axis.second().angle(), c});
  }
  std::sort(ends.begin(), ends.end(), [](const End& x, const End& y) { return x.angle < y.angle; });
  const std::size_t n = ends.size();
  const Box fallback = Box::from_corners(0.0, kTwoPi / 4, kTwoPi / 2, 3 * kTwoPi / 4);
  if (n < 4) return {fallback, 0.0, 0.0, opt.radius, DeltaMethod::atom_combinatorial, chords.size()};

  std::vector<std::size_t> pos(n);
  std::vector<std::array<std::size_t, 2>> chord_pos(chords.size(), {n, n});
  for (std::size_t p = 0; p < n; ++p) {
    auto& cp = chord_pos[ends[p].chord];
    (cp[0] == n ? cp[0] : cp[1]) = p;
  }
  // prefix[r][c] = sum of W[p][q] for p < r, q < c.
  std::vector<double> prefix((n + 1) * (n + 1), 0.0);
  auto P = [&](std::size_t r, std::size_t c) -> double& { return prefix[r * (n + 1) + c]; };
  for (std::size_t c = 0; c < chords.size(); ++c) {
    const auto [p, q] = chord_pos[c];
    P(p + 1, q + 1) += chords[c].weight;
    P(q + 1, p + 1) += chords[c].weight;
  }
  for (std::size_t r = 1; r <= n; ++r) {
    for (std::size_t c = 1; c <= n; ++c) P(r, c) += P(r - 1, c) + P(r, c - 1) - P(r - 1, c - 1);
  }
  // Inclusive endpoint ranges; empty when lo > hi.
  auto rect = [&](std::size_t r1, std::size_t r2, std::size_t c1, std::size_t c2) {
    if (r1 > r2 || c1 > c2) return 0.0;
    return P(r2 + 1, c2 + 1) - P(r1, c2 + 1) - P(r2 + 1, c1) + P(r1, c1);
  };
  auto corner = [&](std::size_t t) {
    const double lo = ends[t].angle;
    const double hi = ends[(t + 1) % n].angle;
    return lo + ccw_offset(lo, hi) / 2.0;
  };
  auto gap = [&](std::size_t t, std::size_t u) { return ccw_offset(corner(t), corner(u)); };

  double best = -1.0;
  double best_gap = -1.0;
  std::array<std::size_t, 4> arg{0, 1, 2, 3};
  auto consider = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l, double v) {
    if (v < best - 1e-12) return;
    const double g = std::min(gap(j, k), gap(l, i));
    if (v > best + 1e-12 || g > best_gap) {
      best = std::max(best, v);
      best_gap = g;
      arg = {i, j, k, l};
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k + 1 < n; ++k) {
        auto inside = [&](std::size_t l) { return rect(i + 1, j, k + 1, l); };
        auto opposite = [&](std::size_t l) {
          return rect(j + 1, k, l + 1, n - 1) + rect(j + 1, k, 0, i);
        };
        // inside(l) grows with l, opposite(l) shrinks.
        std::size_t lo = k + 1, hi = n - 1;
        while (lo < hi) {
          const std::size_t mid = (lo + hi + 1) / 2;
          if (inside(mid) <= opposite(mid)) {
            lo = mid;
          } else {
            hi = mid - 1;
          }
        }
        for (std::size_t l : {lo, std::min(lo + 1, n - 1)}) {
          if (l <= k) continue;
          consider(i, j, k, l, std::min(inside(l), opposite(l)));
        }
      }
    }
  }
  const auto [i, j, k, l] = arg;
  const Box box = Box::from_corners(corner(i), corner(j), corner(k), corner(l));
  // Direct sums over the truncated chords, so that empty sides give exact zeros.
  const Box perp = opposite_box(box);
  double in = 0.0, out = 0.0;
  for (const auto& c : chords) {
    if (box_contains(box, c.axis)) in += c.weight;
    if (box_contains(perp, c.axis)) out += c.weight;
  }
  const double value = std::min(in, out);
  double exact = std::numeric_limits<double>::quiet_NaN();
  try {
    exact = box_score(mu, box);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::BallTooLarge) throw;
  }
  return {box, value, exact, opt.radius, DeltaMethod::atom_combinatorial, chords.size()};
}

}  // namespace

double dual_distance(const GeodesicCurrent& mu, const PlanePoint& p, const PlanePoint& q) {
  if (hyp_distance(p, q) < 1e-14) return 0.0;
  const Segment s(p, q);
  double d = mu.liouville_scale() * s.length();
  if (mu.has_atoms()) {
    const CrossingTally t = crossing_tally(mu, s);
    d += t.interior + 0.5 * (t.at_a + t.at_b);
  }
  return d;
}

bool same_point(const GeodesicCurrent& mu, const PlanePoint& p, const PlanePoint& q, double tol) {
  return dual_distance(mu, p, q) <= tol;
}

double translation_length(const GeodesicCurrent& mu, const GroupElement& g) {
  const Geodesic ax = axis(g.matrix);
  // Any point of the axis realizes the infimum. Lifts often meet at the foot,
  // and then rounding at the far end decides the half-counts, so use a point
  // at least 1e-6 away from every atom.
  const double period = trace_translation_length(g.matrix);
  PlanePoint x = ax.foot();
  if (mu.has_atoms()) {
    const auto& group = *mu.presentation();
    for (int k = 1; k <= 16; ++k) {
      // Straddle the foot so x and g x are both about period/2 from it.
      x = ax.point_at(period * (-0.5 + 0.1 * (std::fmod(k * 0.6180339887498949, 1.0) - 0.5)));
      const Isometry h = descend(group, x).matrix;
      const PlanePoint y = apply(h, x);
      const Geodesic own = apply(h, ax);
      bool clear = true;
      for (const auto& s : support_within(mu, hyp_distance(kOrigin, y) + 1e-6)) {
        if (s.axis.distance_to(y) < 1e-6 && !s.axis.same_as(own, 1e-8)) {
          clear = false;
          break;
        }
      }
      if (clear) break;
    }
  }
  return dual_distance(mu, x, apply(g.matrix, x));
}

FourPointReport four_point_defect(const GeodesicCurrent& mu, const PlanePoint& p, const PlanePoint& q,
                                  const PlanePoint& r, const PlanePoint& s) {
  FourPointReport rep{{p, q, r, s}, {}, 0.0};
  rep.sums = {dual_distance(mu, p, q) + dual_distance(mu, r, s), dual_distance(mu, p, r) + dual_distance(mu, q, s),
              dual_distance(mu, q, r) + dual_distance(mu, p, s)};
  auto sorted = rep.sums;
  std::sort(sorted.begin(), sorted.end());
  rep.defect = sorted[2] - sorted[1];
  return rep;
}

std::string to_string(DeltaMethod m) {
  switch (m) {
    case DeltaMethod::box_grid: return "box_grid";
    case DeltaMethod::atom_combinatorial: return "atom_combinatorial";
    case DeltaMethod::double_transversal: return "double_transversal";
  }
  return "unknown";
}

DeltaCertificate delta_lower_bound_boxes(const GeodesicCurrent& mu, const DeltaSearchOptions& opt) {
  if (!(opt.radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "truncation radius must be positive");
  if (mu.liouville_scale() == 0.0) return atomic_search(mu, opt);
  return continuous_search(mu, opt);
}

double double_transversal_value(const GeodesicCurrent& mu, const std::array<PlanePoint, 4>& quad) {
  const auto& [x, y, z, w] = quad;
  try {
    const Segment xz(x, z);
    const Segment yw(y, w);
    if (xz.is_singleton() || yw.is_singleton() || crosses(yw.extension(), xz) != Crossing::interior ||
        crosses(xz.extension(), yw) != Crossing::interior) {
      throw Error(ErrorCode::NotConvexPosition, "diagonals do not cross");
    }
    for (std::size_t a = 0; a < 4; ++a) {
      const PlanePoint& u = quad[a];
      const PlanePoint& v = quad[(a + 1) % 4];
      const PlanePoint& t = quad[(a + 2) % 4];
      if (hyp_distance(u, v) < 1e-12 || Segment(u, v).extension().distance_to(t) <= kOnGeodesicTol) {
        throw Error(ErrorCode::NotConvexPosition, "three points are collinear");
      }
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotConvexPosition) throw;
    throw Error(ErrorCode::NotConvexPosition, e.what());
  }
  const double diag = dual_distance(mu, x, z) + dual_distance(mu, y, w);
  const double s1 = dual_distance(mu, x, y) + dual_distance(mu, z, w);
  const double s2 = dual_distance(mu, y, z) + dual_distance(mu, w, x);
  return std::max(0.0, 0.5 * std::min(diag - s1, diag - s2));
}

double delta_via_double_transversals(const GeodesicCurrent& mu, const std::vector<std::array<PlanePoint, 4>>& quads) {
  double best = 0.0;
  for (const auto& q : quads) best = std::max(best, double_transversal_value(mu, q));
  return best;
}

std::array<PlanePoint, 4> corner_quadruple(const Box& box, double t) {
  const auto c = box.corners();
  return {PlanePoint::polar(t, c[1].angle()), PlanePoint::polar(t, c[2].angle()),
          PlanePoint::polar(t, c[3].angle()), PlanePoint::polar(t, c[0].angle())};
}

OptimalityWitness optimality_witness(const GeodesicCurrent& mu, const Box& box, const std::vector<double>& depths) {
  OptimalityWitness best{corner_quadruple(box, depths.empty() ? 1.0 : depths.front()), -1.0, 0.0};
  for (double t : depths) {
    const auto q = corner_quadruple(box, t);
    try {
      const double d = four_point_defect(mu, q[0], q[1], q[2], q[3]).defect;
      if (d > best.defect) best = {q, d, t};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BallTooLarge) throw;
    }
  }
  best.defect = std::max(best.defect, 0.0);
  return best;
}

BallProbe filling_ball_probe(const GeodesicCurrent& mu, const PlanePoint& x, double r, int sample_rays,
                             const std::vector<BoundaryPoint>& extra_targets, double truncation) {
  if (r < 0.0) throw Error(ErrorCode::InvalidArgument, "radius must be non-negative");
  const Isometry frame = frame_at(x);
  const Isometry unframe = frame.inverse();
  std::vector<double> dirs;
  for (int k = 0; k < sample_rays; ++k) dirs.push_back(kTwoPi * k / sample_rays);
  for (const auto& t : extra_targets) dirs.push_back(apply(unframe, t).angle());

  BallProbe out{true, 0.0, std::nullopt};
  for (double theta : dirs) {
    auto at = [&](double t) { return apply(frame, PlanePoint::polar(t, theta)); };
    auto within = [&](double t) { return t <= 0.0 || dual_distance(mu, x, at(t)) <= r; };
    if (within(truncation)) {
      return {false, truncation, at(truncation)};
    }
    double lo = 0.0, hi = std::min(0.25, truncation);
    while (within(hi)) {
      lo = hi;
      hi = std::min(2.0 * hi, truncation);
    }
    for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
      const double mid = 0.5 * (lo + hi);
      (within(mid) ? lo : hi) = mid;
    }
    out.radius = std::max(out.radius, lo);
  }
  return out;
}

}  // namespace geodual
