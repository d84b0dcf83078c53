#include "geodual/surface_group.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "geodual/error.hpp"

namespace geodual {

namespace {

const PlanePoint kOrigin(Complex(0.0, 1.0));

int letter_rank(char c) {
  const int base = std::tolower(static_cast<unsigned char>(c)) - 'a';
  return 2 * base + (std::isupper(static_cast<unsigned char>(c)) ? 1 : 0);
}

bool word_less(const std::string& x, const std::string& y) {
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end(),
                                      [](char p, char q) { return letter_rank(p) < letter_rank(q); });
}

// Orbit points keyed by disk angle; two entries are the same element when
// their points are closer than any two distinct orbit points can be.
class OrbitPointSet {
 public:
  bool insert(const PlanePoint& p) {
    const double theta = normalize_angle(std::arg(p.disk()));
    if (contains_near(theta, p)) return false;
    points_.emplace(theta, p);
    return true;
  }
  std::size_t size() const { return points_.size(); }

 private:
  bool scan(double lo, double hi, const PlanePoint& p) const {
    for (auto it = points_.lower_bound(lo); it != points_.end() && it->first <= hi; ++it) {
      if (hyp_distance(it->second, p) < 1e-5) return true;
    }
    return false;
  }
  bool contains_near(double theta, const PlanePoint& p) const {
    constexpr double w = 1e-7;
    if (scan(theta - w, theta + w, p)) return true;
    if (theta < w && scan(kTwoPi + theta - w, kTwoPi, p)) return true;
    if (theta > kTwoPi - w && scan(0.0, theta + w - kTwoPi, p)) return true;
    return false;
  }
  std::multimap<double, PlanePoint> points_;
};

// Endpoint-pair dedupe, wrap-aware. Long words drift by ~1e-9 in angle, and
// distinct translates meeting the ball are far coarser than 1e-7.
class GeodesicSet {
 public:
  bool insert(const Geodesic& g) {
    const std::int64_t a = bucket(g.first().angle());
    const std::int64_t b = bucket(g.second().angle());
    for (int da = -1; da <= 1; ++da) {
      for (int db = -1; db <= 1; ++db) {
        if (keys_.count(key(wrap(a + da), wrap(b + db)))) return false;
      }
    }
    keys_.insert(key(a, b));
    return true;
  }

 private:
  static constexpr double kRes = 1e-7;
  static std::int64_t modulus() { return static_cast<std::int64_t>(std::ceil(kTwoPi / kRes)); }
  static std::int64_t bucket(double t) { return wrap(static_cast<std::int64_t>(std::floor(t / kRes))); }
  static std::int64_t wrap(std::int64_t v) {
    const std::int64_t m = modulus();
    return ((v % m) + m) % m;
  }
  static std::pair<std::int64_t, std::int64_t> key(std::int64_t a, std::int64_t b) {
    return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
  }
  struct Hash {
    std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& k) const {
      return std::hash<std::int64_t>()(k.first * 1000003 ^ k.second);
    }
  };
  std::unordered_set<std::pair<std::int64_t, std::int64_t>, Hash> keys_;
};

double margin_for(const SurfacePresentation& g, const EnumerationOptions& opt) {
  if (opt.prune_margin >= 0.0) return opt.prune_margin;
  return g.max_displacement();
}

GroupElement extend(const SurfacePresentation& g, const GroupElement& e, char letter) {
  return {free_reduce(e.word + letter), e.matrix * g.evaluate(std::string(1, letter))};
}

// BFS over right multiplication from `start`, keeping elements whose orbit
// point has score <= limit.
template <class Score>
std::vector<GroupElement> orbit_bfs(const SurfacePresentation& g, const GroupElement& start, double limit,
                                    std::size_t cap, Score score) {
  OrbitPointSet seen;
  std::vector<GroupElement> out;
  std::deque<GroupElement> queue;
  seen.insert(apply(start.matrix, kOrigin));
  queue.push_back(start);
  const std::string letters = g.alphabet();
  while (!queue.empty()) {
    GroupElement cur = std::move(queue.front());
    queue.pop_front();
    for (char x : letters) {
      GroupElement next = extend(g, cur, x);
      const PlanePoint p = apply(next.matrix, kOrigin);
      if (score(p) > limit) continue;
      if (!seen.insert(p)) continue;
      if (seen.size() > cap) throw Error(ErrorCode::BallTooLarge, "orbit enumeration exceeded cap");
      queue.push_back(next);
    }
    out.push_back(std::move(cur));
  }
  return out;
}

}  // namespace

double SurfacePresentation::max_displacement() const {
  double m = 0.0;
  for (const auto& gen : generators) m = std::max(m, hyp_distance(kOrigin, apply(gen, kOrigin)));
  return m;
}

std::string SurfacePresentation::alphabet() const {
  std::string s(labels.begin(), labels.end());
  for (char c : labels) s += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

Isometry SurfacePresentation::evaluate(const std::string& word) const {
  Isometry m;
  for (char c : word) {
    const char low = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    auto it = std::find(labels.begin(), labels.end(), low);
    if (it == labels.end()) throw Error(ErrorCode::InvalidArgument, std::string("unknown letter '") + c + "'");
    const Isometry& gen = generators[static_cast<std::size_t>(it - labels.begin())];
    m = m * (c == low ? gen : gen.inverse());
  }
  return m;
}

GroupElement SurfacePresentation::element(const std::string& word) const {
  const std::string w = free_reduce(word);
  return {w, evaluate(w)};
}

PresentationPtr parse_presentation(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  auto p = std::make_shared<SurfacePresentation>();
  try {
    p->name = j.value("name", std::string("unnamed"));
    const auto& gens = j.at("generators");
    std::vector<std::string> labels;
    if (j.contains("labels")) {
      labels = j.at("labels").get<std::vector<std::string>>();
    } else {
      for (std::size_t k = 0; k < gens.size(); ++k) labels.emplace_back(1, static_cast<char>('a' + k));
    }
    if (labels.size() != gens.size()) throw Error(ErrorCode::ParseError, "labels and generators differ in length");
    for (const auto& l : labels) {
      if (l.size() != 1 || !std::islower(static_cast<unsigned char>(l[0]))) {
        throw Error(ErrorCode::ParseError, "labels must be single lowercase letters");
      }
      p->labels.push_back(l[0]);
    }
    for (const auto& row : gens) {
      const auto e = row.get<std::vector<double>>();
      if (e.size() != 4) throw Error(ErrorCode::ParseError, "generator needs four entries");
      const Isometry m = Isometry::checked({e[0], e[1], e[2], e[3]});
      if (m.classify() != IsometryClass::hyperbolic) {
        throw Error(ErrorCode::NonHyperbolicGenerator, "generator " + m.to_string() + " is not hyperbolic");
      }
      p->generators.push_back(m);
    }
    if (j.contains("relators")) p->relators = j.at("relators").get<std::vector<std::string>>();
    if (j.contains("basepoint")) {
      const auto bp = j.at("basepoint").get<std::vector<double>>();
      if (bp.size() != 2 || bp[0] != 0.0 || bp[1] != 1.0) {
        throw Error(ErrorCode::Unsupported, "only the basepoint i is supported");
      }
    }
    p->cusped = j.value("cusped", false);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  for (const auto& r : p->relators) {
    const double err = p->evaluate(r).distance_to(Isometry());
    if (err > 1e-8) {
      std::ostringstream os;
      os << "relator " << r << " is off the identity by " << err;
      throw Error(ErrorCode::RelatorViolation, os.str());
    }
  }
  return p;
}

PresentationPtr load_presentation(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_presentation(ss.str());
}

char invert_letter(char c) {
  return std::isupper(static_cast<unsigned char>(c)) ? static_cast<char>(std::tolower(static_cast<unsigned char>(c)))
                                                     : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
}

std::string free_reduce(const std::string& word) {
  std::string out;
  for (char c : word) {
    if (!out.empty() && out.back() == invert_letter(c)) {
      out.pop_back();
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string inverse_word(const std::string& word) {
  std::string out(word.rbegin(), word.rend());
  for (char& c : out) c = invert_letter(c);
  return out;
}

std::string canonical_cyclic_word(const std::string& word) {
  std::string w = free_reduce(word);
  std::size_t lo = 0, hi = w.size();
  while (hi - lo >= 2 && w[lo] == invert_letter(w[hi - 1])) {
    ++lo;
    --hi;
  }
  w = w.substr(lo, hi - lo);
  if (w.empty()) return w;
  std::string best = w;
  for (const std::string& base : {w, inverse_word(w)}) {
    for (std::size_t k = 0; k < base.size(); ++k) {
      std::string rot = base.substr(k) + base.substr(0, k);
      if (word_less(rot, best)) best = rot;
    }
  }
  return best;
}

GroupElement cyclic_reduce(const SurfacePresentation& g, const GroupElement& e) {
  return g.element(canonical_cyclic_word(e.word));
}

std::pair<std::string, int> primitive_root(const std::string& word) {
  const std::size_t n = word.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p) continue;
    bool ok = true;
    for (std::size_t i = p; i < n && ok; ++i) ok = word[i] == word[i - p];
    if (ok) return {word.substr(0, p), static_cast<int>(n / p)};
  }
  return {word, 1};
}

OrbitBall enumerate_ball(const SurfacePresentation& g, double radius, const EnumerationOptions& opt) {
  if (radius < 0.0) throw Error(ErrorCode::InvalidArgument, "radius must be non-negative");
  const double margin = margin_for(g, opt);
  auto all = orbit_bfs(g, GroupElement{"", Isometry()}, radius + margin, opt.cap,
                       [](const PlanePoint& p) { return hyp_distance(kOrigin, p); });
  OrbitBall ball;
  ball.radius = radius;
  std::vector<std::pair<double, GroupElement>> keep;
  for (auto& e : all) {
    const double d = hyp_distance(kOrigin, apply(e.matrix, kOrigin));
    if (d <= radius) keep.emplace_back(d, std::move(e));
  }
  std::sort(keep.begin(), keep.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first < y.first;
    return word_less(x.second.word, y.second.word);
  });
  for (auto& k : keep) ball.elements.push_back(std::move(k.second));
  ball.complete = !g.cusped;
  return ball;
}

GroupElement descend(const SurfacePresentation& g, const PlanePoint& p) {
  GroupElement k{"", Isometry()};
  PlanePoint q = p;
  double best = hyp_distance(kOrigin, q);
  const std::string letters = g.alphabet();
  for (int iter = 0; iter < 100000; ++iter) {
    char pick = 0;
    double pick_d = best;
    for (char x : letters) {
      const double d = hyp_distance(kOrigin, apply(g.evaluate(std::string(1, x)), q));
      if (d < pick_d - 1e-12) {
        pick_d = d;
        pick = x;
      }
    }
    if (!pick) break;
    const Isometry step = g.evaluate(std::string(1, pick));
    k = {free_reduce(std::string(1, pick) + k.word), step * k.matrix};
    q = apply(k.matrix, p);
    best = hyp_distance(kOrigin, q);
  }
  return k;
}

std::vector<AxisTranslate> axis_translates(const SurfacePresentation& g, const GroupElement& rep, double rho,
                                           const EnumerationOptions& opt) {
  const Geodesic ax = axis(rep.matrix);
  const PlanePoint x0 = ax.foot();
  const double s1 = ax.coordinate_of(apply(rep.matrix, x0));
  const double lo = std::min(0.0, s1);
  const double hi = std::max(0.0, s1);
  // Distance from p to the fundamental segment [lo, hi] of the axis.
  auto to_segment = [&](const PlanePoint& p) {
    const double s = std::clamp(ax.coordinate_of(p), lo, hi);
    return hyp_distance(p, ax.point_at(s));
  };
  const GroupElement k0 = descend(g, x0);
  const GroupElement start{inverse_word(k0.word), k0.matrix.inverse()};
  const auto tube = orbit_bfs(g, start, rho + margin_for(g, opt), opt.cap, to_segment);

  GeodesicSet seen;
  std::vector<AxisTranslate> out;
  for (const auto& k : tube) {
    if (ax.distance_to(apply(k.matrix, kOrigin)) > rho + 1e-9) continue;
    const Isometry h = k.matrix.inverse();
    const Geodesic t = apply(h, ax);
    const double d = t.distance_from_basepoint();
    if (d > rho) continue;
    if (!seen.insert(t)) continue;
    out.push_back({t, d, inverse_word(k.word)});
  }
  std::sort(out.begin(), out.end(), [](const AxisTranslate& x, const AxisTranslate& y) {
    if (x.distance != y.distance) return x.distance < y.distance;
    return x.axis.first().angle() < y.axis.first().angle();
  });
  return out;
}

std::vector<AxisHit> axes_meeting_segment(const SurfacePresentation& g, const GroupElement& rep, const Segment& s,
                                          const EnumerationOptions& opt) {
  const GroupElement k = descend(g, s.midpoint());
  const Segment moved = apply(k.matrix, s);
  const Isometry back = k.matrix.inverse();
  std::vector<AxisHit> hits;
  for (const auto& t : axis_translates(g, rep, moved.reach() + 1e-9, opt)) {
    const Crossing c = crosses(t.axis, moved);
    if (c == Crossing::none) continue;
    const std::string w = free_reduce(inverse_word(k.word) + t.word);
    hits.push_back({{w, g.evaluate(w)}, apply(back, t.axis), c});
  }
  return hits;
}

}  // namespace geodual
