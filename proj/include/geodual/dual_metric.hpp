#pragma once

// The dual pseudo-distance d_mu, translation lengths, four-point defects and
// the hyperbolicity constant delta_mu via boxes and double transversals.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geodual/currents.hpp"

namespace geodual {

// 1/2 (mu(G[p,q)) + mu(G(p,q])).
double dual_distance(const GeodesicCurrent& mu, const PlanePoint& p, const PlanePoint& q);
bool same_point(const GeodesicCurrent& mu, const PlanePoint& p, const PlanePoint& q, double tol = 1e-10);

// d_mu(x, g x) for x the point of axis(g) closest to o.
double translation_length(const GeodesicCurrent& mu, const GroupElement& g);

struct FourPointReport {
  std::array<PlanePoint, 4> quadruple;
  std::array<double, 3> sums;  // pq+rs, pr+qs, qr+ps
  double defect;               // largest minus second largest
};

FourPointReport four_point_defect(const GeodesicCurrent& mu, const PlanePoint& p, const PlanePoint& q,
                                  const PlanePoint& r, const PlanePoint& s);

enum class DeltaMethod { box_grid, atom_combinatorial, double_transversal };
std::string to_string(DeltaMethod m);

struct DeltaCertificate {
  Box best_box;
  double value;             // min(mu(B), mu(B^perp)); a lower bound on delta_mu
  double recomputed;        // exact min at best_box, NaN if out of reach
  double truncation_radius; // 0 for the analytic Liouville search
  DeltaMethod method;
  std::size_t chords = 0;   // atoms in the truncated arrangement
};

struct DeltaSearchOptions {
  double radius = 4.0;  // truncation for atomic parts
  int grid = 24;        // angular grid for continuous parts
  int ascent_rounds = 60;
};

DeltaCertificate delta_lower_bound_boxes(const GeodesicCurrent& mu, const DeltaSearchOptions& opt = {});

// Half the smaller gap between the diagonal sum and the side sums of a convex
// quadrilateral x, y, z, w. Throws NotConvexPosition.
double double_transversal_value(const GeodesicCurrent& mu, const std::array<PlanePoint, 4>& quad);
double delta_via_double_transversals(const GeodesicCurrent& mu, const std::vector<std::array<PlanePoint, 4>>& quads);

// Points at distance t from o toward the four corners of a box.
std::array<PlanePoint, 4> corner_quadruple(const Box& box, double t);

struct OptimalityWitness {
  std::array<PlanePoint, 4> quadruple;
  double defect;
  double depth;
};

// Best four-point defect over corner quadruples of the box at the given depths.
OptimalityWitness optimality_witness(const GeodesicCurrent& mu, const Box& box, const std::vector<double>& depths);

struct BallProbe {
  bool bounded;
  double radius;                              // hyperbolic radius reached while d_mu <= r
  std::optional<PlanePoint> escape_direction; // far point of a ray with d_mu <= r throughout
};

// Marches along rays from x toward sample_rays equally spaced directions and
// toward each extra boundary target.
BallProbe filling_ball_probe(const GeodesicCurrent& mu, const PlanePoint& x, double r, int sample_rays,
                             const std::vector<BoundaryPoint>& extra_targets = {}, double truncation = 10.0);

}  // namespace geodual
