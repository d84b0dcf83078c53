#include "geodual/currents.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "geodual/error.hpp"

namespace geodual {

namespace {

const PlanePoint kOrigin(Complex(0.0, 1.0));

// Neumaier compensated sum.
class Accumulator {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

const SurfacePresentation& require_group(const GeodesicCurrent& mu) {
  if (!mu.presentation()) throw Error(ErrorCode::InvalidArgument, "current has atoms but no presentation");
  return *mu.presentation();
}

bool is_hyperbolic(const Isometry& m) { return std::abs(m.trace()) > 2.0 + kTraceTol; }

template <class F>
void for_each_translate(const CurrentComponent& c, double rho, F f) {
  const auto snap = c.orbit->within(rho);
  for (const auto& t : *snap) {
    if (t.distance > rho) break;
    f(t);
  }
}


// Segments longer than this are cut into pieces, each recentered near o, so
// the translate lists stay small and well conditioned.
constexpr double kChunkLength = 3.0;

// visit(moved, rho, interior, at_a, at_b) adds the weight of translates
// within rho crossing the recentered piece.
template <class Visit>
CrossingTally chunked_tally(const SurfacePresentation& group, const Segment& s, Visit visit) {
  // Past this distance from o, upper half plane coordinates no longer pin
  // down crossings to the 1e-10 tolerances.
  constexpr double kPrecisionReach = 20.0;
  if (hyp_distance(kOrigin, s.a()) > kPrecisionReach || hyp_distance(kOrigin, s.b()) > kPrecisionReach) {
    throw Error(ErrorCode::BallTooLarge, "segment endpoint beyond double-precision reach");
  }
  const double len = s.length();
  const int m = std::max(1, static_cast<int>(std::ceil(len / kChunkLength)));
  std::vector<PlanePoint> cuts{s.a()};
  if (m > 1) {
    const Geodesic line = s.extension();
    const double t0 = line.coordinate_of(s.a());
    const double t1 = line.coordinate_of(s.b());
    // Irrational jitter keeps cuts off the symmetric points where lifts meet.
    for (int k = 1; k < m; ++k) {
      const double jitter = 0.2 * (std::fmod(k * 0.6180339887498949, 1.0) - 0.5);
      cuts.push_back(line.point_at(t0 + (t1 - t0) * (k + jitter) / m));
    }
  }
  cuts.push_back(s.b());
  Accumulator in, at_a, at_b;
  for (int k = 0; k < m; ++k) {
    const Segment piece(cuts[k], cuts[k + 1]);
    const GroupElement g = descend(group, piece.midpoint());
    const Segment moved = apply(g.matrix, piece);
    Accumulator pi, pa, pb;
    visit(moved, moved.reach() + 1e-9, pi, pa, pb);
    in.add(pi.value());
    // A crossing at an inner cut is interior to s.
    if (k == 0) at_a.add(pa.value());
    if (k + 1 < m) in.add(pb.value());
    else at_b.add(pb.value());
  }
  return {in.value(), at_a.value(), at_b.value()};
}

}  // namespace

double AxisOrbit::max_radius = 12.0;

AxisOrbit::AxisOrbit(PresentationPtr group, GroupElement rep) : group_(std::move(group)), rep_(std::move(rep)) {}

std::shared_ptr<const std::vector<AxisTranslate>> AxisOrbit::within(double rho) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (rho <= radius_) return cache_;
  if (rho > max_radius) {
    throw Error(ErrorCode::BallTooLarge, "axis translates needed out to radius " + std::to_string(rho));
  }
  const double target = std::min(max_radius, std::max({rho, radius_ + 0.5, 3.0}));
  cache_ = std::make_shared<const std::vector<AxisTranslate>>(axis_translates(*group_, rep_, target));
  radius_ = target;
  return cache_;
}

GeodesicCurrent GeodesicCurrent::liouville(double scale, PresentationPtr group) {
  if (!(scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "Liouville scale must be positive");
  GeodesicCurrent c;
  c.group_ = std::move(group);
  c.liouville_ = scale;
  return c;
}

void GeodesicCurrent::add_component(const GroupElement& rep, double weight, std::shared_ptr<const AxisOrbit> orbit) {
  for (auto& c : components_) {
    if (c.rep.word == rep.word) {
      c.weight += weight;
      return;
    }
  }
  // Different words for one class (relators) share an axis orbit.
  const Geodesic ax = axis(rep.matrix);
  for (auto& c : components_) {
    if (std::abs(std::abs(c.rep.matrix.trace()) - std::abs(rep.matrix.trace())) > 1e-9) continue;
    const GroupElement k = descend(*group_, ax.foot());
    const Geodesic moved = apply(k.matrix, ax);
    bool same = false;
    for_each_translate(c, moved.distance_from_basepoint() + 1e-6,
                       [&](const AxisTranslate& t) { same = same || t.axis.same_as(moved, 1e-8); });
    if (same) {
      c.weight += weight;
      return;
    }
  }
  if (!orbit) orbit = std::make_shared<AxisOrbit>(group_, rep);
  components_.push_back({rep, weight, std::move(orbit)});
}

GeodesicCurrent GeodesicCurrent::atomic(PresentationPtr group, const std::vector<std::pair<std::string, double>>& parts) {
  if (!group) throw Error(ErrorCode::InvalidArgument, "atomic current needs a presentation");
  GeodesicCurrent c;
  c.group_ = group;
  for (const auto& [word, weight] : parts) {
    if (!(weight > 0.0)) throw Error(ErrorCode::InvalidArgument, "component weights must be positive");
    const std::string canon = canonical_cyclic_word(word);
    if (canon.empty()) throw Error(ErrorCode::NotHyperbolic, "trivial word '" + word + "'");
    const auto [root, power] = primitive_root(canon);
    const GroupElement rep = group->element(root);
    if (!is_hyperbolic(rep.matrix)) throw Error(ErrorCode::NotHyperbolic, "word '" + word + "' is not hyperbolic");
    c.add_component(rep, weight * power, nullptr);
  }
  return c;
}

GeodesicCurrent GeodesicCurrent::operator+(const GeodesicCurrent& o) const {
  GeodesicCurrent r = *this;
  if (!r.group_) r.group_ = o.group_;
  if (o.has_atoms() && r.group_ != o.group_) {
    if (!r.group_ || !o.group_ || r.group_->name != o.group_->name) {
      throw Error(ErrorCode::InvalidArgument, "currents live on different presentations");
    }
  }
  r.liouville_ += o.liouville_;
  for (const auto& c : o.components_) r.add_component(c.rep, c.weight, c.orbit);
  return r;
}

GeodesicCurrent GeodesicCurrent::scaled(double s) const {
  if (!(s > 0.0)) throw Error(ErrorCode::InvalidArgument, "scale factor must be positive");
  GeodesicCurrent r = *this;
  r.liouville_ *= s;
  for (auto& c : r.components_) c.weight *= s;
  return r;
}

CurrentKind GeodesicCurrent::kind() const {
  if (liouville_ > 0.0 && !components_.empty()) return CurrentKind::sum;
  if (liouville_ > 0.0) return CurrentKind::liouville;
  return CurrentKind::atomic;
}

std::string GeodesicCurrent::describe() const {
  std::ostringstream os;
  bool first = true;
  if (liouville_ > 0.0) {
    os << liouville_ << "*L";
    first = false;
  }
  for (const auto& c : components_) {
    if (!first) os << " + ";
    os << c.weight << "*" << c.rep.word;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

namespace {

GeodesicCurrent from_json(const nlohmann::json& j, const PresentationPtr& group) {
  const std::string kind = j.value("kind", std::string("atomic"));
  if (kind == "liouville") return GeodesicCurrent::liouville(j.value("scale", 1.0), group);
  if (kind == "atomic") {
    std::vector<std::pair<std::string, double>> parts;
    for (const auto& c : j.value("components", nlohmann::json::array())) {
      parts.emplace_back(c.at("word").get<std::string>(), c.value("weight", 1.0));
    }
    return GeodesicCurrent::atomic(group, parts);
  }
  if (kind == "sum") {
    const auto& comps = j.at("components");
    if (comps.empty()) throw Error(ErrorCode::ParseError, "sum needs at least one component");
    GeodesicCurrent acc = from_json(comps.at(0), group);
    for (std::size_t k = 1; k < comps.size(); ++k) acc = acc + from_json(comps.at(k), group);
    return acc;
  }
  if (kind == "lamination" || kind == "measured_lamination") {
    throw Error(ErrorCode::Unsupported, "non-discrete measured laminations are not representable");
  }
  throw Error(ErrorCode::ParseError, "unknown current kind '" + kind + "'");
}

}  // namespace

GeodesicCurrent parse_current(const std::string& text, PresentationPtr group) {
  try {
    return from_json(nlohmann::json::parse(text), group);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

GeodesicCurrent load_current(const std::filesystem::path& path, PresentationPtr group) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_current(ss.str(), std::move(group));
}

std::vector<SupportGeodesic> support_within(const GeodesicCurrent& mu, double rho) {
  std::vector<SupportGeodesic> out;
  for (std::size_t k = 0; k < mu.components().size(); ++k) {
    const auto& c = mu.components()[k];
    for_each_translate(c, rho, [&](const AxisTranslate& t) { out.push_back({t.axis, t.distance, k, c.weight}); });
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const SupportGeodesic& x, const SupportGeodesic& y) { return x.distance < y.distance; });
  return out;
}

CrossingTally crossing_tally(const GeodesicCurrent& mu, const Segment& s) {
  if (s.is_singleton()) throw Error(ErrorCode::DegenerateSegment, "transversal of a single point");
  if (!mu.has_atoms()) return {};
  return chunked_tally(require_group(mu), s,
                       [&](const Segment& moved, double rho, Accumulator& in, Accumulator& at_a, Accumulator& at_b) {
                         for (const auto& c : mu.components()) {
                           for_each_translate(c, rho, [&](const AxisTranslate& t) {
                             switch (crosses(t.axis, moved)) {
                               case Crossing::interior: in.add(c.weight); break;
                               case Crossing::at_a: at_a.add(c.weight); break;
                               case Crossing::at_b: at_b.add(c.weight); break;
                               case Crossing::none: break;
                             }
                           });
                         }
                       });
}

double box_measure(const GeodesicCurrent& mu, const Box& box) {
  const auto& i = box.first();
  const auto& j = box.second();
  if (i.is_empty() || j.is_empty()) return 0.0;
  Accumulator acc;
  if (mu.liouville_scale() > 0.0 && !i.is_singleton() && !j.is_singleton()) {
    const auto c = box.corners();
    acc.add(mu.liouville_scale() * cross_ratio_log(c[0], c[1], c[2], c[3]));
  }
  if (mu.has_atoms()) {
    const auto& group = require_group(mu);
    const GroupElement k = descend(group, box.center());
    const Box moved = apply(k.matrix, box);
    const double rho = moved.reach() + 1e-9;
    for (const auto& c : mu.components()) {
      for_each_translate(c, rho, [&](const AxisTranslate& t) {
        if (box_contains(moved, t.axis)) acc.add(c.weight);
      });
    }
  }
  return acc.value();
}

double transversal_measure(const GeodesicCurrent& mu, const Segment& s) {
  if (s.is_singleton()) {
    // A point carries the atoms through it; Liouville has none.
    if (!mu.has_atoms()) return 0.0;
    const auto& group = require_group(mu);
    const GroupElement k = descend(group, s.a());
    const PlanePoint x = apply(k.matrix, s.a());
    const double rho = hyp_distance(kOrigin, x) + 1e-9;
    Accumulator acc;
    for (const auto& c : mu.components()) {
      for_each_translate(c, rho, [&](const AxisTranslate& t) {
        if (t.axis.distance_to(x) <= kOnGeodesicTol) acc.add(c.weight);
      });
    }
    return acc.value();
  }
  const CrossingTally t = crossing_tally(mu, s);
  Accumulator acc;
  acc.add(mu.liouville_scale() * s.length());
  acc.add(t.interior);
  if (s.include_a()) acc.add(t.at_a);
  if (s.include_b()) acc.add(t.at_b);
  return acc.value();
}

double pencil_measure(const GeodesicCurrent& mu, const BoundaryPoint& z, const BoundaryInterval& arc) {
  const double g1 = ccw_offset(z.angle(), arc.start().angle());
  const double g2 = ccw_offset(arc.end().angle(), z.angle());
  if (g1 < kSeparationTol || g2 < kSeparationTol || arc.contains(z) || g1 + g2 > kTwoPi + 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "pencil point must lie outside the closed arc");
  }
  if (!mu.has_atoms() || arc.is_empty()) return 0.0;
  const double gap = std::min(g1, g2);
  const double rho = std::asinh(std::abs(std::cos(gap / 2.0)) / std::sin(gap / 2.0)) + 1e-9;
  Accumulator acc;
  for (const auto& c : mu.components()) {
    for_each_translate(c, rho, [&](const AxisTranslate& t) {
      const auto& p = t.axis.first();
      const auto& q = t.axis.second();
      const bool hit = (angular_distance(p.angle(), z.angle()) < kSeparationTol && arc.contains(q)) ||
                       (angular_distance(q.angle(), z.angle()) < kSeparationTol && arc.contains(p));
      if (hit) acc.add(c.weight);
    });
  }
  return acc.value();
}

double has_atom(const GeodesicCurrent& mu, const Geodesic& geo) {
  if (!mu.has_atoms()) return 0.0;
  const auto& group = require_group(mu);
  const GroupElement k = descend(group, geo.foot());
  const Geodesic moved = apply(k.matrix, geo);
  const double rho = moved.distance_from_basepoint() + 1e-6;
  Accumulator acc;
  for (const auto& c : mu.components()) {
    for_each_translate(c, rho, [&](const AxisTranslate& t) {
      if (t.axis.same_as(moved)) acc.add(c.weight);
    });
  }
  return acc.value();
}

int crossing_count(const SurfacePresentation& group, const GroupElement& c1, const AxisOrbit& c2) {
  const Geodesic ax = axis(c1.matrix);
  const PlanePoint x = ax.foot();
  const Segment fundamental(x, apply(c1.matrix, x));
  const CrossingTally t = chunked_tally(
      group, fundamental, [&](const Segment& moved, double rho, Accumulator& in, Accumulator& at_a, Accumulator& at_b) {
        const auto snap = c2.within(rho);
        for (const auto& tr : *snap) {
          if (tr.distance > rho) break;
          switch (crosses(tr.axis, moved)) {
            case Crossing::interior: in.add(1.0); break;
            case Crossing::at_a: at_a.add(1.0); break;
            case Crossing::at_b: at_b.add(1.0); break;
            case Crossing::none: break;
          }
        }
      });
  // Half-open [x, c1 x): crossings at x count, crossings at c1 x do not.
  return static_cast<int>(std::lround(t.interior + t.at_a));
}

int crossing_count(const PresentationPtr& group, const GroupElement& c1, const GroupElement& c2) {
  const auto [root, power] = primitive_root(canonical_cyclic_word(c2.word));
  const AxisOrbit orbit(group, group->element(root));
  return power * crossing_count(*group, c1, orbit);
}

double intersection_number(const GeodesicCurrent& mu, const GeodesicCurrent& nu) {
  if (mu.liouville_scale() > 0.0 || nu.liouville_scale() > 0.0) {
    throw Error(ErrorCode::Unsupported, "intersection of Liouville parts needs integration over the quotient");
  }
  if (!mu.has_atoms() || !nu.has_atoms()) return 0.0;
  const auto& group = require_group(mu);
  Accumulator acc;
  for (const auto& a : mu.components()) {
    for (const auto& b : nu.components()) {
      acc.add(a.weight * b.weight * crossing_count(group, a.rep, *b.orbit));
    }
  }
  return acc.value();
}

double intersection_with_length(const GeodesicCurrent& liouville, const GroupElement& c) {
  if (liouville.kind() != CurrentKind::liouville) {
    throw Error(ErrorCode::InvalidArgument, "expected a Liouville current");
  }
  return liouville.liouville_scale() * trace_translation_length(c.matrix);
}

double intersection_with_curve(const GeodesicCurrent& mu, const GroupElement& c) {
  if (!is_hyperbolic(c.matrix)) throw Error(ErrorCode::NotHyperbolic, "curve '" + c.word + "' is not hyperbolic");
  Accumulator acc;
  if (mu.liouville_scale() > 0.0) acc.add(mu.liouville_scale() * trace_translation_length(c.matrix));
  if (mu.has_atoms()) {
    const auto& group = require_group(mu);
    const auto [root, power] = primitive_root(canonical_cyclic_word(c.word));
    const AxisOrbit orbit(mu.presentation(), group.element(root));
    for (const auto& comp : mu.components()) {
      acc.add(comp.weight * power * crossing_count(group, comp.rep, orbit));
    }
  }
  return acc.value();
}

std::vector<GroupElement> conjugacy_classes(const SurfacePresentation& group, int word_bound, bool primitive_only) {
  const std::string letters = group.alphabet();
  std::set<std::pair<std::size_t, std::string>> seen;
  std::vector<std::string> frontier{""};
  for (int len = 1; len <= word_bound; ++len) {
    std::vector<std::string> next;
    for (const auto& w : frontier) {
      for (char x : letters) {
        if (!w.empty() && w.back() == invert_letter(x)) continue;
        next.push_back(w + x);
      }
    }
    for (const auto& w : next) {
      const std::string canon = canonical_cyclic_word(w);
      if (canon.empty()) continue;
      if (primitive_only && primitive_root(canon).second != 1) continue;
      seen.insert({canon.size(), canon});
    }
    frontier = std::move(next);
  }
  std::vector<GroupElement> out;
  for (const auto& [len, w] : seen) {
    GroupElement e = group.element(w);
    if (is_hyperbolic(e.matrix)) out.push_back(std::move(e));
  }
  return out;
}

SystoleEstimate systole_estimate(const GeodesicCurrent& mu, int word_bound) {
  if (word_bound < 1) throw Error(ErrorCode::InvalidArgument, "word bound must be at least 1");
  const auto& group = require_group(mu);
  const auto classes = conjugacy_classes(group, word_bound);
  SystoleEstimate best{std::numeric_limits<double>::infinity(), {"", Isometry()}, classes.size()};
  for (const auto& c : classes) {
    const double v = intersection_with_curve(mu, c);
    if (v < best.value) {
      best.value = v;
      best.argmin = c;
    }
  }
  return best;
}

}  // namespace geodual
