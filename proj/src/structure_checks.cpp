#include "geodual/structure_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "geodual/error.hpp"

namespace geodual {

namespace {

constexpr std::size_t kMaxWitnesses = 8;
constexpr double kZeroTol = 1e-10;

std::string point_str(const PlanePoint& p) {
  std::ostringstream os;
  os.precision(12);
  os << p.x() << (p.y() >= 0 ? "+" : "") << p.y() << "i";
  return os.str();
}

GeodesicCurrent single_curve(const PresentationPtr& group, const GroupElement& c, double w) {
  return GeodesicCurrent::atomic(group, {{c.word, w}});
}

// Flattened component words and weights, for reconstruction checks.
std::map<std::string, double> weights_of(const GeodesicCurrent& mu) {
  std::map<std::string, double> m;
  for (const auto& c : mu.components()) m[c.rep.word] += c.weight;
  return m;
}

// Points where lifts of the special curves cross the open segment (x, y),
// ordered from x.
std::vector<PlanePoint> chain_points(const PresentationPtr& group, const DecompositionSpec& d,
                                     const PlanePoint& x, const PlanePoint& y) {
  const Segment s(x, y);
  const Geodesic line = s.extension();
  std::vector<std::pair<double, PlanePoint>> hits;
  for (const auto& sc : d.special_curves) {
    for (const auto& h : axes_meeting_segment(*group, sc.curve, s)) {
      if (h.crossing != Crossing::interior) continue;
      const PlanePoint p = intersection_point(h.axis, line);
      hits.emplace_back(hyp_distance(x, p), p);
    }
  }
  std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<PlanePoint> out;
  for (const auto& h : hits) out.push_back(h.second);
  return out;
}

}  // namespace

void CheckReport::fail(std::string witness) {
  passed = false;
  if (witnesses.size() < kMaxWitnesses) witnesses.push_back(std::move(witness));
}

PlanePoint random_point(std::mt19937_64& rng, double r) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double theta = kTwoPi * u(rng);
  return PlanePoint::polar(r * u(rng), theta);
}

DecompositionSpec parse_decomposition(const std::string& json_text, PresentationPtr group) {
  DecompositionSpec d;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
    for (const auto& s : j.value("subcurrents", nlohmann::json::array())) {
      const int type = s.value("type", 1);
      if (type != 1 && type != 3) throw Error(ErrorCode::ParseError, "subcurrent type must be 1 or 3");
      d.subcurrents.push_back({parse_current(s.at("current").dump(), group), type});
    }
    for (const auto& s : j.value("special_curves", nlohmann::json::array())) {
      const double w = s.value("weight", 1.0);
      if (!(w >= 0.0)) throw Error(ErrorCode::ParseError, "special curve weight must be >= 0");
      d.special_curves.push_back({cyclic_reduce(*group, group->element(s.at("word").get<std::string>())), w});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return d;
}

GeodesicCurrent assemble(const DecompositionSpec& d, PresentationPtr group) {
  GeodesicCurrent mu = GeodesicCurrent::atomic(group, {});
  for (const auto& s : d.subcurrents) mu = mu + s.current;
  for (const auto& s : d.special_curves) {
    if (s.weight > 0.0) mu = mu + single_curve(group, s.curve, s.weight);
  }
  return mu;
}

CheckReport verify_special_curves(const GeodesicCurrent& mu, const DecompositionSpec& d, int word_bound) {
  CheckReport r;
  r.name = "special_curves";
  const auto& group = mu.presentation();
  const GeodesicCurrent rebuilt = assemble(d, group);
  ++r.checked;
  if (std::abs(rebuilt.liouville_scale() - mu.liouville_scale()) > 1e-12 || weights_of(rebuilt) != weights_of(mu)) {
    r.fail("current is not the declared sum: " + mu.describe() + " vs " + rebuilt.describe());
  }
  const auto classes = conjugacy_classes(*group, word_bound);
  for (const auto& sc : d.special_curves) {
    const AxisOrbit self(group, sc.curve);
    ++r.checked;
    if (crossing_count(*group, sc.curve, self) != 0) r.fail(sc.curve.word + " is not simple");
    const double own = intersection_with_curve(mu, sc.curve);
    ++r.checked;
    r.worst = std::max(r.worst, own);
    if (own > kZeroTol) r.fail("i(mu, " + sc.curve.word + ") = " + std::to_string(own));
    for (const auto& s : d.subcurrents) {
      for (const auto& c : s.current.components()) {
        ++r.checked;
        if (crossing_count(*group, c.rep, self) != 0) {
          r.fail("subcurrent atom " + c.rep.word + " crosses " + sc.curve.word);
        }
      }
    }
    for (const auto& c : classes) {
      if (crossing_count(*group, c, self) == 0) continue;
      ++r.checked;
      if (intersection_with_curve(mu, c) <= kZeroTol) {
        r.fail(c.word + " crosses " + sc.curve.word + " but i(mu, " + c.word + ") = 0");
      }
    }
  }
  r.figures.push_back({"word_bound", word_bound});
  r.figures.push_back({"classes_scanned", static_cast<double>(classes.size())});
  return r;
}

CheckReport verify_chain_distance(const GeodesicCurrent& mu, const DecompositionSpec& d, int samples,
                                  std::uint64_t seed, double radius) {
  CheckReport r;
  r.name = "chain_distance";
  const auto& group = mu.presentation();
  std::vector<GeodesicCurrent> parts;
  for (const auto& s : d.subcurrents) parts.push_back(s.current);
  const std::size_t n_pieces = parts.size();
  for (const auto& s : d.special_curves) {
    if (s.weight > 0.0) parts.push_back(single_curve(group, s.curve, s.weight));
  }
  std::mt19937_64 rng(seed);
  int found = 0, attempts = 0, mixed_links = 0;
  const int max_attempts = 200 * std::max(samples, 1);
  while (found < samples && attempts < max_attempts) {
    ++attempts;
    const PlanePoint x = random_point(rng, radius);
    const PlanePoint y = random_point(rng, radius);
    if (hyp_distance(x, y) < 1e-6) continue;
    const auto mids = chain_points(group, d, x, y);
    if (mids.empty()) continue;
    ++found;
    std::vector<PlanePoint> chain{x};
    chain.insert(chain.end(), mids.begin(), mids.end());
    chain.push_back(y);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
      if (hyp_distance(chain[k], chain[k + 1]) < 1e-13) continue;
      int active = 0;
      for (std::size_t p = 0; p < parts.size(); ++p) {
        const double v = dual_distance(parts[p], chain[k], chain[k + 1]);
        if (p < n_pieces && v > kZeroTol) ++active;
        total += v;
      }
      if (active > 1) ++mixed_links;
    }
    const double direct = dual_distance(mu, x, y);
    const double err = std::abs(direct - total);
    r.worst = std::max(r.worst, err);
    ++r.checked;
    if (err > 1e-9) {
      r.fail(point_str(x) + " -> " + point_str(y) + ": d_mu " + std::to_string(direct) + " chain " +
             std::to_string(total));
    }
  }
  if (found < samples) r.fail("only " + std::to_string(found) + " cross-region pairs found");
  if (mixed_links > 0) r.fail(std::to_string(mixed_links) + " chain links see more than one piece");
  r.figures.push_back({"radius", radius});
  r.figures.push_back({"attempts", static_cast<double>(attempts)});
  return r;
}

CheckReport verify_piece_intersection(const GeodesicCurrent& mu, const DecompositionSpec& d, int samples,
                                      std::uint64_t seed) {
  CheckReport r;
  r.name = "piece_intersection";
  const auto& group = mu.presentation();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const auto& sc : d.special_curves) {
    for (const auto& t : axis_translates(*group, sc.curve, 1.5)) {
      for (int k = 0; k < samples; ++k) {
        const PlanePoint x = t.axis.point_at(u(rng));
        const PlanePoint y = t.axis.point_at(u(rng));
        if (hyp_distance(x, y) < 1e-9) continue;
        const double v = dual_distance(mu, x, y);
        r.worst = std::max(r.worst, v);
        ++r.checked;
        if (v > kZeroTol) {
          r.fail("lift of " + sc.curve.word + ": d_mu(" + point_str(x) + ", " + point_str(y) + ") = " +
                 std::to_string(v));
        }
      }
    }
  }
  return r;
}

CheckReport verify_delta_decomposition(const GeodesicCurrent& mu, const DecompositionSpec& d, double radius) {
  CheckReport r;
  r.name = "delta_decomposition";
  DeltaSearchOptions opt;
  opt.radius = radius;
  auto value = [&](const GeodesicCurrent& c) {
    const DeltaCertificate cert = delta_lower_bound_boxes(c, opt);
    return std::isnan(cert.recomputed) ? cert.value : cert.recomputed;
  };
  const double whole = value(mu);
  double biggest = 0.0, sum = 0.0;
  for (std::size_t k = 0; k < d.subcurrents.size(); ++k) {
    const double v = value(d.subcurrents[k].current);
    r.figures.push_back({"delta_piece_" + std::to_string(k), v});
    biggest = std::max(biggest, v);
    sum += v;
  }
  r.figures.push_back({"delta_mu", whole});
  r.figures.push_back({"radius", radius});
  r.checked = 2;
  if (biggest > whole + 1e-9) r.fail("max piece delta " + std::to_string(biggest) + " > " + std::to_string(whole));
  if (whole > sum + 1e-9) r.fail("delta_mu " + std::to_string(whole) + " > sum " + std::to_string(sum));
  r.worst = std::max(biggest - whole, whole - sum);
  return r;
}

EpsilonRelationReport gh_epsilon_related(const GeodesicCurrent& mu, const GeodesicCurrent& mu2,
                                         const std::vector<PlanePoint>& K, const std::vector<GroupElement>& P,
                                         double epsilon) {
  EpsilonRelationReport rep{K, P, epsilon, 0.0, true};
  for (std::size_t i = 0; i < K.size(); ++i) {
    for (std::size_t j = i + 1; j < K.size(); ++j) {
      rep.worst_distortion =
          std::max(rep.worst_distortion, std::abs(dual_distance(mu, K[i], K[j]) - dual_distance(mu2, K[i], K[j])));
    }
  }
  for (const auto& g : P) {
    for (const auto& x : K) {
      const PlanePoint gx = apply(g.matrix, x);
      for (const auto& y : K) {
        if (hyp_distance(gx, y) < 1e-12) continue;
        if (std::abs(dual_distance(mu, gx, y) - dual_distance(mu2, gx, y)) >= epsilon) rep.equivariance_ok = false;
      }
    }
  }
  return rep;
}

FixedPointProbe fixed_point_probe(const GeodesicCurrent& mu, const GroupElement& g, int samples) {
  const Geodesic ax = axis(g.matrix);
  const double period = trace_translation_length(g.matrix);
  FixedPointProbe out{std::nullopt, std::numeric_limits<double>::infinity()};
  const double t0 = ax.coordinate_of(mu.presentation()->basepoint());
  const auto& group = *mu.presentation();
  for (int k = 0; k < std::max(samples, 1); ++k) {
    // Window centred on the foot; pull x back near o so g x stays in reach.
    const PlanePoint x = ax.point_at(t0 + period * (static_cast<double>(k) / std::max(samples, 1) - 0.5));
    const Isometry h = descend(group, x).matrix;
    const double v = dual_distance(mu, apply(h, x), apply(h, apply(g.matrix, x)));
    if (v < out.min_displacement) out.min_displacement = v;
    if (v <= kZeroTol && !out.witness) out.witness = x;
  }
  return out;
}

CoboundednessProbe coboundedness_probe(const GeodesicCurrent& mu, const std::vector<PlanePoint>& samples,
                                       double base_radius_guess) {
  if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "no sample points");
  const auto& group = *mu.presentation();
  const PlanePoint o = group.basepoint();
  CoboundednessProbe out{0.0, 0.0};
  for (const auto& p : samples) {
    const PlanePoint q = apply(descend(group, p).matrix, p);
    const double h = hyp_distance(o, q);
    if (h > base_radius_guess) {
      throw Error(ErrorCode::BallTooLarge, "descent left a point at distance " + std::to_string(h));
    }
    out.max_hyp_radius = std::max(out.max_hyp_radius, h);
    if (h > 0.0) out.max_dual_radius = std::max(out.max_dual_radius, dual_distance(mu, o, q));
  }
  return out;
}

}  // namespace geodual
