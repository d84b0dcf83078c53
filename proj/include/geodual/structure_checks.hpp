#pragma once

// Verification suites for declared decompositions mu = sum nu_i + sum a_j s_j,
// equivariant epsilon-relations between duals, and action probes.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "geodual/dual_metric.hpp"

namespace geodual {

struct SubcurrentSpec {
  GeodesicCurrent current;
  int type;  // 1 or 3
};

struct SpecialCurve {
  GroupElement curve;
  double weight;  // zero weights are allowed and dropped when assembling
};

struct DecompositionSpec {
  std::vector<SubcurrentSpec> subcurrents;
  std::vector<SpecialCurve> special_curves;
};

// `{subcurrents: [{current: {...}, type}], special_curves: [{word, weight}]}`.
DecompositionSpec parse_decomposition(const std::string& json_text, PresentationPtr group);
GeodesicCurrent assemble(const DecompositionSpec& d, PresentationPtr group);

struct CheckReport {
  std::string name;
  bool passed = true;
  std::size_t checked = 0;
  double worst = 0.0;                                // largest deviation seen
  std::vector<std::string> witnesses;                // first few failures
  std::vector<std::pair<std::string, double>> figures;

  void fail(std::string witness);
};

CheckReport verify_special_curves(const GeodesicCurrent& mu, const DecompositionSpec& d, int word_bound);
// Pairs whose connecting segment crosses at least one special lift.
CheckReport verify_chain_distance(const GeodesicCurrent& mu, const DecompositionSpec& d, int samples,
                                  std::uint64_t seed, double radius = 2.5);
CheckReport verify_piece_intersection(const GeodesicCurrent& mu, const DecompositionSpec& d, int samples,
                                      std::uint64_t seed);
CheckReport verify_delta_decomposition(const GeodesicCurrent& mu, const DecompositionSpec& d, double radius);

struct EpsilonRelationReport {
  std::vector<PlanePoint> K;
  std::vector<GroupElement> P;
  double epsilon;
  double worst_distortion;
  bool equivariance_ok;
  bool passed() const { return worst_distortion < epsilon && equivariance_ok; }
};

// Identity relation on representatives. Equivariance compares d(g x, y) in
// both duals for g in P and x, y in K.
EpsilonRelationReport gh_epsilon_related(const GeodesicCurrent& mu, const GeodesicCurrent& mu2,
                                         const std::vector<PlanePoint>& K, const std::vector<GroupElement>& P,
                                         double epsilon);

struct FixedPointProbe {
  std::optional<PlanePoint> witness;
  double min_displacement;
};

// Samples x along one period of axis(g) and looks for d_mu(x, g x) = 0.
FixedPointProbe fixed_point_probe(const GeodesicCurrent& mu, const GroupElement& g, int samples);

struct CoboundednessProbe {
  double max_dual_radius;  // max d_mu(o, k x) after moving x near o
  double max_hyp_radius;
};

// Throws BallTooLarge if descent leaves a point farther than base_radius_guess.
CoboundednessProbe coboundedness_probe(const GeodesicCurrent& mu, const std::vector<PlanePoint>& samples,
                                       double base_radius_guess);

// Uniform direction, radius uniform in [0, r].
PlanePoint random_point(std::mt19937_64& rng, double r);

}  // namespace geodual
