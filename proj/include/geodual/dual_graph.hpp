#pragma once

// Geometric realization of X_mu for weighted multi-curves: the axis
// arrangement inside a window about o, its zero-distance classes, and the
// adjacency graph with d_mu edge lengths.

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "geodual/currents.hpp"

namespace geodual {

struct ArrangementAxis {
  Geodesic geodesic;
  std::size_t component;
  double weight;
};

struct ArrangementCrossing {
  PlanePoint point;
  std::vector<std::size_t> axes;  // indices into Arrangement::axes
};

struct Arrangement {
  double window = 0.0;  // hyperbolic radius about o
  std::vector<ArrangementAxis> axes;
  std::vector<ArrangementCrossing> crossings;
};

// Throws Unsupported for currents with a Liouville part.
Arrangement build_arrangement(const GeodesicCurrent& mu, double window);

enum class ClassKind { region, axis_segment, axis_ray_or_line, crossing_point };
std::string to_string(ClassKind k);

struct DualClass {
  ClassKind kind;
  PlanePoint representative;
  bool truncated;
  std::vector<std::size_t> axes;   // axes carrying the class (pieces, crossings) or bounding it (regions)
  std::vector<Complex> klein;      // polygon (region), endpoints (piece), point (crossing)
};

struct ClassIncidence {
  std::size_t a;
  std::size_t b;
};

struct QuotientClasses {
  std::vector<DualClass> classes;
  std::vector<ClassIncidence> incidences;  // candidate adjacencies from the arrangement
};

QuotientClasses quotient_classes(const GeodesicCurrent& mu, const Arrangement& arr);

// A uniformly-ish random point of the class geometry, kept off its boundary.
PlanePoint sample_class_point(const DualClass& c, std::mt19937_64& rng);

// Segment test for adjacency: no support geodesic crosses the interior, and
// transverse meetings happen at one endpoint at most.
bool adjacent_points(const Arrangement& arr, const PlanePoint& p, const PlanePoint& q);

struct DualEdge {
  std::size_t a;
  std::size_t b;
  double length;
};

struct DualGraph {
  std::vector<DualClass> nodes;
  std::vector<DualEdge> edges;
};

DualGraph build_dual_graph(const QuotientClasses& classes, const Arrangement& arr, const GeodesicCurrent& mu);

// Shortest path length; throws Disconnected.
double graph_distance(const DualGraph& g, std::size_t n1, std::size_t n2);
// Union-find cycle test on the subgraph of nodes passing keep().
template <class Keep>
bool is_acyclic(const DualGraph& g, Keep keep);

std::string graph_to_json(const DualGraph& g);
std::string render_svg(const Arrangement& arr, const DualGraph* graph);
void write_text(const std::filesystem::path& path, const std::string& text);

template <class Keep>
bool is_acyclic(const DualGraph& g, Keep keep) {
  std::vector<std::size_t> parent(g.nodes.size());
  for (std::size_t k = 0; k < parent.size(); ++k) parent[k] = k;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : g.edges) {
    if (!keep(g.nodes[e.a]) || !keep(g.nodes[e.b])) continue;
    const std::size_t ra = find(e.a), rb = find(e.b);
    if (ra == rb) return false;
    parent[ra] = rb;
  }
  return true;
}

}  // namespace geodual
