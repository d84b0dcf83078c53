#include "geodual/dual_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include <json.hpp>

#include "geodual/dual_metric.hpp"
#include "geodual/error.hpp"

namespace geodual {

namespace {

const PlanePoint kOrigin(Complex(0.0, 1.0));

double dot(Complex a, Complex b) { return a.real() * b.real() + a.imag() * b.imag(); }
double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

struct Vertex {
  Complex k;
  bool boundary;
  std::size_t crossing;  // index into arrangement crossings when !boundary
  std::vector<std::size_t> out;  // outgoing half-edges, ccw by direction
};

struct HalfEdge {
  std::size_t from, to;
  std::size_t twin = 0;
  std::ptrdiff_t piece = -1;  // -1 for window arcs
  Complex dir;
  std::vector<Complex> arc_samples;  // interior points of an arc, in travel order
};

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string to_string(ClassKind k) {
  switch (k) {
    case ClassKind::region: return "region";
    case ClassKind::axis_segment: return "axis_segment";
    case ClassKind::axis_ray_or_line: return "axis_ray_or_line";
    case ClassKind::crossing_point: return "crossing_point";
  }
  return "unknown";
}

Arrangement build_arrangement(const GeodesicCurrent& mu, double window) {
  if (!(window > 0.0)) throw Error(ErrorCode::InvalidArgument, "window radius must be positive");
  if (mu.liouville_scale() > 0.0) {
    throw Error(ErrorCode::Unsupported, "dual graphs need a purely atomic current");
  }
  Arrangement arr;
  arr.window = window;
  for (const auto& s : support_within(mu, window)) {
    if (s.distance < window - 1e-9) arr.axes.push_back({s.axis, s.component, s.weight});
  }
  for (std::size_t i = 0; i < arr.axes.size(); ++i) {
    for (std::size_t j = i + 1; j < arr.axes.size(); ++j) {
      if (!arr.axes[i].geodesic.links(arr.axes[j].geodesic)) continue;
      const PlanePoint p = intersection_point(arr.axes[i].geodesic, arr.axes[j].geodesic);
      if (hyp_distance(kOrigin, p) >= window - 1e-9) continue;
      bool merged = false;
      for (auto& c : arr.crossings) {
        if (hyp_distance(c.point, p) < 1e-9) {
          for (std::size_t a : {i, j}) {
            if (std::find(c.axes.begin(), c.axes.end(), a) == c.axes.end()) c.axes.push_back(a);
          }
          merged = true;
          break;
        }
      }
      if (!merged) arr.crossings.push_back({p, {i, j}});
    }
  }
  for (auto& c : arr.crossings) std::sort(c.axes.begin(), c.axes.end());
  return arr;
}

QuotientClasses quotient_classes(const GeodesicCurrent& mu, const Arrangement& arr) {
  QuotientClasses out;
  const double rk = std::tanh(arr.window);
  if (mu.empty()) return out;  // the dual of the zero current is a point
  if (arr.axes.empty()) {
    std::vector<Complex> poly;
    for (int k = 0; k < 16; ++k) poly.push_back(std::polar(rk, kTwoPi * k / 16));
    out.classes.push_back({ClassKind::region, kOrigin, true, {}, poly});
    return out;
  }

  std::vector<Vertex> verts;
  for (std::size_t c = 0; c < arr.crossings.size(); ++c) {
    verts.push_back({arr.crossings[c].point.klein(), false, c, {}});
  }
  // Per axis: (parameter, vertex) along the chord u1 -> u2.
  std::vector<std::vector<std::pair<double, std::size_t>>> along(arr.axes.size());
  for (std::size_t a = 0; a < arr.axes.size(); ++a) {
    const Complex u1 = arr.axes[a].geodesic.first().unit();
    const Complex d = arr.axes[a].geodesic.second().unit() - u1;
    const double qa = std::norm(d);
    const double qb = 2.0 * dot(u1, d);
    const double qc = 1.0 - rk * rk;
    const double disc = std::sqrt(std::max(0.0, qb * qb - 4.0 * qa * qc));
    for (double t : {(-qb - disc) / (2.0 * qa), (-qb + disc) / (2.0 * qa)}) {
      verts.push_back({u1 + t * d, true, 0, {}});
      along[a].emplace_back(t, verts.size() - 1);
    }
  }
  for (std::size_t c = 0; c < arr.crossings.size(); ++c) {
    for (std::size_t a : arr.crossings[c].axes) {
      const Complex u1 = arr.axes[a].geodesic.first().unit();
      const Complex d = arr.axes[a].geodesic.second().unit() - u1;
      along[a].emplace_back(dot(verts[c].k - u1, d) / std::norm(d), c);
    }
  }

  std::vector<HalfEdge> hes;
  struct Piece {
    std::size_t axis, v0, v1;
  };
  std::vector<Piece> pieces;
  auto add_pair = [&](std::size_t u, std::size_t v, std::ptrdiff_t piece, Complex du, Complex dv,
                      std::vector<Complex> samples) {
    HalfEdge h1{u, v, hes.size() + 1, piece, du, samples};
    std::reverse(samples.begin(), samples.end());
    HalfEdge h2{v, u, hes.size(), piece, dv, samples};
    verts[u].out.push_back(hes.size());
    verts[v].out.push_back(hes.size() + 1);
    hes.push_back(h1);
    hes.push_back(h2);
  };
  for (std::size_t a = 0; a < arr.axes.size(); ++a) {
    auto& list = along[a];
    std::sort(list.begin(), list.end());
    for (std::size_t k = 0; k + 1 < list.size(); ++k) {
      const std::size_t u = list[k].second, v = list[k + 1].second;
      if (u == v) continue;
      pieces.push_back({a, u, v});
      const Complex d = verts[v].k - verts[u].k;
      add_pair(u, v, static_cast<std::ptrdiff_t>(pieces.size() - 1), d, -d, {});
    }
  }
  std::vector<std::size_t> ring;
  for (std::size_t v = 0; v < verts.size(); ++v) {
    if (verts[v].boundary) ring.push_back(v);
  }
  std::sort(ring.begin(), ring.end(), [&](std::size_t x, std::size_t y) {
    return normalize_angle(std::arg(verts[x].k)) < normalize_angle(std::arg(verts[y].k));
  });
  for (std::size_t k = 0; k < ring.size(); ++k) {
    const std::size_t u = ring[k], v = ring[(k + 1) % ring.size()];
    const double t0 = std::arg(verts[u].k);
    const double span = ccw_offset(t0, std::arg(verts[v].k));
    const int n = std::max(2, static_cast<int>(std::ceil(span / 0.2)));
    std::vector<Complex> samples;
    for (int s = 1; s < n; ++s) samples.push_back(std::polar(rk, t0 + span * s / n));
    const Complex iu = Complex(0.0, 1.0) * verts[u].k;
    const Complex iv = Complex(0.0, 1.0) * verts[v].k;
    add_pair(u, v, -1, iu, -iv, samples);
  }
  for (auto& v : verts) {
    std::sort(v.out.begin(), v.out.end(), [&](std::size_t x, std::size_t y) {
      return std::arg(hes[x].dir) < std::arg(hes[y].dir);
    });
  }
  auto next_of = [&](std::size_t h) {
    const auto& out_list = verts[hes[h].to].out;
    const std::size_t t = hes[h].twin;
    const auto it = std::find(out_list.begin(), out_list.end(), t);
    const std::size_t pos = static_cast<std::size_t>(it - out_list.begin());
    return out_list[(pos + out_list.size() - 1) % out_list.size()];
  };

  // Classes: regions, then pieces, then crossings.
  std::vector<std::vector<std::size_t>> faces;
  std::vector<bool> used(hes.size(), false);
  for (std::size_t h0 = 0; h0 < hes.size(); ++h0) {
    if (used[h0]) continue;
    std::vector<std::size_t> cyc;
    std::size_t h = h0;
    do {
      used[h] = true;
      cyc.push_back(h);
      h = next_of(h);
    } while (h != h0 && cyc.size() <= hes.size());
    faces.push_back(std::move(cyc));
  }

  std::vector<std::ptrdiff_t> crossing_class(arr.crossings.size(), -1);
  std::vector<std::size_t> piece_class(pieces.size());
  std::vector<std::vector<std::size_t>> face_pieces, face_crossings;
  for (const auto& cyc : faces) {
    std::vector<Complex> poly;
    bool truncated = false;
    std::set<std::size_t> bounding, fp, fc;
    for (std::size_t h : cyc) {
      poly.push_back(verts[hes[h].from].k);
      for (Complex s : hes[h].arc_samples) poly.push_back(s);
      if (hes[h].piece < 0) {
        truncated = true;
      } else {
        fp.insert(static_cast<std::size_t>(hes[h].piece));
        bounding.insert(pieces[static_cast<std::size_t>(hes[h].piece)].axis);
      }
      if (!verts[hes[h].from].boundary) fc.insert(verts[hes[h].from].crossing);
    }
    double area = 0.0;
    Complex cen = 0.0;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const Complex p = poly[k], q = poly[(k + 1) % poly.size()];
      const double w = cross(p, q);
      area += w;
      cen += (p + q) * w;
    }
    if (area <= 0.0) continue;  // outside the window
    cen /= 3.0 * area;
    out.classes.push_back({ClassKind::region, PlanePoint::from_klein(cen), truncated,
                           std::vector<std::size_t>(bounding.begin(), bounding.end()), poly});
    face_pieces.emplace_back(fp.begin(), fp.end());
    face_crossings.emplace_back(fc.begin(), fc.end());
  }
  const std::size_t n_regions = out.classes.size();

  std::map<std::size_t, double> transverse_mass;  // per component, i(mu, c)
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    const auto& pc = pieces[p];
    const bool end0 = verts[pc.v0].boundary, end1 = verts[pc.v1].boundary;
    ClassKind kind = ClassKind::axis_segment;
    bool truncated = false;
    if (end0 || end1) {
      kind = ClassKind::axis_ray_or_line;
      truncated = true;
      if (end0 && end1) {
        const std::size_t comp = arr.axes[pc.axis].component;
        if (!transverse_mass.count(comp)) {
          transverse_mass[comp] = intersection_with_curve(mu, mu.components()[comp].rep);
        }
        truncated = transverse_mass[comp] > 0.0;
      }
    }
    const Complex mid = (verts[pc.v0].k + verts[pc.v1].k) / 2.0;
    piece_class[p] = out.classes.size();
    out.classes.push_back({kind, PlanePoint::from_klein(mid), truncated, {pc.axis}, {verts[pc.v0].k, verts[pc.v1].k}});
  }
  for (std::size_t c = 0; c < arr.crossings.size(); ++c) {
    crossing_class[c] = static_cast<std::ptrdiff_t>(out.classes.size());
    out.classes.push_back({ClassKind::crossing_point, arr.crossings[c].point, false, arr.crossings[c].axes,
                           {verts[c].k}});
  }

  std::set<std::pair<std::size_t, std::size_t>> inc;
  for (std::size_t r = 0; r < n_regions; ++r) {
    for (std::size_t p : face_pieces[r]) inc.insert({r, piece_class[p]});
    for (std::size_t c : face_crossings[r]) inc.insert({r, static_cast<std::size_t>(crossing_class[c])});
  }
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    for (std::size_t v : {pieces[p].v0, pieces[p].v1}) {
      if (!verts[v].boundary) {
        inc.insert({piece_class[p], static_cast<std::size_t>(crossing_class[verts[v].crossing])});
      }
    }
  }
  for (const auto& [a, b] : inc) out.incidences.push_back({a, b});
  return out;
}

PlanePoint sample_class_point(const DualClass& c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (c.kind) {
    case ClassKind::crossing_point:
      return c.representative;
    case ClassKind::axis_segment:
    case ClassKind::axis_ray_or_line: {
      const double t = 0.05 + 0.9 * u(rng);
      return PlanePoint::from_klein(c.klein[0] + t * (c.klein[1] - c.klein[0]));
    }
    case ClassKind::region: {
      const Complex cen = c.representative.klein();
      Complex acc = 0.0;
      double total = 0.0;
      for (Complex v : c.klein) {
        const double w = -std::log(1.0 - u(rng));
        acc += w * v;
        total += w;
      }
      return PlanePoint::from_klein(cen + 0.95 * (acc / total - cen));
    }
  }
  return c.representative;
}

bool adjacent_points(const Arrangement& arr, const PlanePoint& p, const PlanePoint& q) {
  if (hyp_distance(p, q) < 1e-14) return false;
  const Segment s(p, q);
  bool at_a = false, at_b = false;
  for (const auto& ax : arr.axes) {
    switch (crosses(ax.geodesic, s)) {
      case Crossing::interior: return false;
      case Crossing::at_a: at_a = true; break;
      case Crossing::at_b: at_b = true; break;
      case Crossing::none: break;
    }
  }
  return !(at_a && at_b);
}

DualGraph build_dual_graph(const QuotientClasses& qc, const Arrangement& arr, const GeodesicCurrent& mu) {
  DualGraph g;
  g.nodes = qc.classes;
  for (const auto& inc : qc.incidences) {
    const auto& pa = g.nodes[inc.a].representative;
    const auto& pb = g.nodes[inc.b].representative;
    if (!adjacent_points(arr, pa, pb)) continue;
    g.edges.push_back({inc.a, inc.b, dual_distance(mu, pa, pb)});
  }
  return g;
}

double graph_distance(const DualGraph& g, std::size_t n1, std::size_t n2) {
  if (n1 >= g.nodes.size() || n2 >= g.nodes.size()) throw Error(ErrorCode::InvalidArgument, "node out of range");
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(g.nodes.size());
  for (const auto& e : g.edges) {
    adj[e.a].emplace_back(e.b, e.length);
    adj[e.b].emplace_back(e.a, e.length);
  }
  std::vector<double> dist(g.nodes.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[n1] = 0.0;
  pq.push({0.0, n1});
  while (!pq.empty()) {
    const auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    if (v == n2) return d;
    for (const auto& [w, len] : adj[v]) {
      if (d + len < dist[w]) {
        dist[w] = d + len;
        pq.push({dist[w], w});
      }
    }
  }
  throw Error(ErrorCode::Disconnected, "nodes are not connected inside the window");
}

std::string graph_to_json(const DualGraph& g) {
  nlohmann::ordered_json j;
  j["nodes"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < g.nodes.size(); ++k) {
    j["nodes"].push_back({{"id", k}, {"kind", to_string(g.nodes[k].kind)}, {"truncated", g.nodes[k].truncated}});
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : g.edges) j["edges"].push_back({{"a", e.a}, {"b", e.b}, {"len", e.length}});
  return j.dump(2) + "\n";
}

std::string render_svg(const Arrangement& arr, const DualGraph* graph) {
  constexpr double kSize = 800.0, kC = 400.0, kS = 380.0;
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  auto sx = [&](Complex w) { return fmt6(kC + kS * w.real()); };
  auto sy = [&](Complex w) { return fmt6(kC - kS * w.imag()); };
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt6(kSize) << "\" height=\""
     << fmt6(kSize) << "\" viewBox=\"0 0 " << fmt6(kSize) << " " << fmt6(kSize) << "\">\n";
  os << "<circle cx=\"" << fmt6(kC) << "\" cy=\"" << fmt6(kC) << "\" r=\"" << fmt6(kS)
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.500000\"/>\n";
  if (!arr.axes.empty()) {
    os << "<circle cx=\"" << fmt6(kC) << "\" cy=\"" << fmt6(kC) << "\" r=\"" << fmt6(kS * std::tanh(arr.window / 2.0))
       << "\" fill=\"none\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 4\"/>\n";
  }
  for (const auto& ax : arr.axes) {
    const Complex u1 = ax.geodesic.first().unit();
    const Complex u2 = ax.geodesic.second().unit();
    const Complex m = ax.geodesic.foot().disk();
    const char* color = kPalette[ax.component % 8];
    const double phi = ax.geodesic.chord_angle();
    os << "<path d=\"M " << sx(u1) << " " << sy(u1) << " ";
    if (std::abs(phi - std::numbers::pi) < 1e-9) {
      os << "L " << sx(u2) << " " << sy(u2);
    } else {
      const double r = kS * std::tan(phi / 2.0);
      const Complex p1(kC + kS * u1.real(), kC - kS * u1.imag());
      const Complex pm(kC + kS * m.real(), kC - kS * m.imag());
      const Complex p2(kC + kS * u2.real(), kC - kS * u2.imag());
      const int sweep = cross(pm - p1, p2 - pm) > 0.0 ? 1 : 0;
      os << "A " << fmt6(r) << " " << fmt6(r) << " 0 0 " << sweep << " " << sx(u2) << " " << sy(u2);
    }
    os << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << fmt6(1.0 + ax.weight) << "\"/>\n";
  }
  for (const auto& c : arr.crossings) {
    const Complex w = c.point.disk();
    os << "<circle cx=\"" << sx(w) << "\" cy=\"" << sy(w) << "\" r=\"3.000000\" fill=\"black\"/>\n";
  }
  if (graph) {
    for (const auto& e : graph->edges) {
      const Complex a = graph->nodes[e.a].representative.disk();
      const Complex b = graph->nodes[e.b].representative.disk();
      os << "<line x1=\"" << sx(a) << "\" y1=\"" << sy(a) << "\" x2=\"" << sx(b) << "\" y2=\"" << sy(b)
         << "\" stroke=\"#777777\" stroke-width=\"0.800000\"/>\n";
    }
    for (const auto& n : graph->nodes) {
      const Complex w = n.representative.disk();
      const char* fill = n.kind == ClassKind::region ? "#ffcc00" : n.kind == ClassKind::crossing_point ? "#000000" : "#555555";
      os << "<circle class=\"" << to_string(n.kind) << "\" cx=\"" << sx(w) << "\" cy=\"" << sy(w)
         << "\" r=\"2.500000\" fill=\"" << fill << "\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace geodual
