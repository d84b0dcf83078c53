#pragma once

// Geodesic currents: weighted multi-curves (atomic), the Liouville current,
// and finite sums of the two. Sums are flattened on construction, so a
// current is a Liouville scale plus a list of weighted axis orbits.

#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "geodual/hyperbolic.hpp"
#include "geodual/surface_group.hpp"

namespace geodual {

// Lazily grown cache of the translates of one axis near the basepoint.
class AxisOrbit {
 public:
  AxisOrbit(PresentationPtr group, GroupElement rep);

  const GroupElement& rep() const { return rep_; }
  // Snapshot holding at least every translate within rho of o, sorted by
  // distance. Throws BallTooLarge beyond max_radius.
  std::shared_ptr<const std::vector<AxisTranslate>> within(double rho) const;

  static double max_radius;

 private:
  PresentationPtr group_;
  GroupElement rep_;
  mutable std::mutex mu_;
  mutable double radius_ = -1.0;
  mutable std::shared_ptr<const std::vector<AxisTranslate>> cache_;
};

struct CurrentComponent {
  GroupElement rep;  // primitive, canonical cyclic word
  double weight;
  std::shared_ptr<const AxisOrbit> orbit;
};

enum class CurrentKind { atomic, liouville, sum };

class GeodesicCurrent {
 public:
  GeodesicCurrent() = default;

  static GeodesicCurrent liouville(double scale = 1.0, PresentationPtr group = nullptr);
  // Words are canonicalized; proper powers become their root with the weight
  // multiplied. Throws NotHyperbolic for words that are not hyperbolic.
  static GeodesicCurrent atomic(PresentationPtr group, const std::vector<std::pair<std::string, double>>& parts);

  GeodesicCurrent operator+(const GeodesicCurrent& other) const;
  GeodesicCurrent scaled(double c) const;

  CurrentKind kind() const;
  double liouville_scale() const { return liouville_; }
  const std::vector<CurrentComponent>& components() const { return components_; }
  const PresentationPtr& presentation() const { return group_; }
  bool has_atoms() const { return !components_.empty(); }
  bool empty() const { return components_.empty() && liouville_ == 0.0; }
  std::string describe() const;

 private:
  void add_component(const GroupElement& rep, double weight, std::shared_ptr<const AxisOrbit> orbit);

  PresentationPtr group_;
  double liouville_ = 0.0;
  std::vector<CurrentComponent> components_;
};

// `{kind: atomic|liouville|sum, components: [{word, weight}], scale}`.
GeodesicCurrent parse_current(const std::string& json_text, PresentationPtr group);
GeodesicCurrent load_current(const std::filesystem::path& path, PresentationPtr group);

struct SupportGeodesic {
  Geodesic axis;
  double distance;
  std::size_t component;
  double weight;
};

// Atom translates meeting B(o, rho), every component, sorted by distance.
std::vector<SupportGeodesic> support_within(const GeodesicCurrent& mu, double rho);

// Atom weight crossing s, split by where the crossing happens.
struct CrossingTally {
  double interior = 0.0;
  double at_a = 0.0;
  double at_b = 0.0;
};

CrossingTally crossing_tally(const GeodesicCurrent& mu, const Segment& s);

double box_measure(const GeodesicCurrent& mu, const Box& box);
double transversal_measure(const GeodesicCurrent& mu, const Segment& s);
double pencil_measure(const GeodesicCurrent& mu, const BoundaryPoint& z, const BoundaryInterval& arc);
double has_atom(const GeodesicCurrent& mu, const Geodesic& geo);

// Number of translates of axis(c2) crossing [x, c1 x) transversely.
int crossing_count(const SurfacePresentation& group, const GroupElement& c1, const AxisOrbit& c2);
int crossing_count(const PresentationPtr& group, const GroupElement& c1, const GroupElement& c2);
double intersection_number(const GeodesicCurrent& mu, const GeodesicCurrent& nu);
double intersection_with_length(const GeodesicCurrent& liouville, const GroupElement& c);
// i(mu, c) for c a weight-one closed curve.
double intersection_with_curve(const GeodesicCurrent& mu, const GroupElement& c);

struct SystoleEstimate {
  double value;
  GroupElement argmin;
  std::size_t classes_scanned;
};

// Conjugacy classes of hyperbolic words up to word_bound, canonical and
// primitive, in deterministic order.
std::vector<GroupElement> conjugacy_classes(const SurfacePresentation& group, int word_bound,
                                            bool primitive_only = true);
SystoleEstimate systole_estimate(const GeodesicCurrent& mu, int word_bound);

}  // namespace geodual
