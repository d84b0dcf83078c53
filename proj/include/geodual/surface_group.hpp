#pragma once

// Fuchsian group presentations, words, and orbit enumeration.
//
// Words use one lowercase letter per generator; the uppercase letter is the
// inverse. All enumeration is relative to the basepoint o = i.

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "geodual/hyperbolic.hpp"

namespace geodual {

struct GroupElement {
  std::string word;
  Isometry matrix;
};

struct SurfacePresentation {
  std::string name;
  std::vector<char> labels;
  std::vector<Isometry> generators;
  std::vector<std::string> relators;
  bool cusped = false;

  PlanePoint basepoint() const { return PlanePoint(Complex(0.0, 1.0)); }
  // Max displacement d(o, g o) over generators.
  double max_displacement() const;
  // Throws InvalidArgument on letters outside the label set.
  Isometry evaluate(const std::string& word) const;
  GroupElement element(const std::string& word) const;
  // All letters: generators then inverses.
  std::string alphabet() const;
};

using PresentationPtr = std::shared_ptr<const SurfacePresentation>;

// Parses `{name, labels, generators, relators, basepoint, cusped}`.
PresentationPtr parse_presentation(const std::string& json_text);
PresentationPtr load_presentation(const std::filesystem::path& path);

char invert_letter(char c);
std::string free_reduce(const std::string& word);
std::string inverse_word(const std::string& word);
// Least rotation among cyclic rotations of the word and of its inverse,
// letters ordered a < A < b < B < ...
std::string canonical_cyclic_word(const std::string& word);
GroupElement cyclic_reduce(const SurfacePresentation& g, const GroupElement& e);
// Shortest u and k with word == u^k (word cyclically reduced).
std::pair<std::string, int> primitive_root(const std::string& word);

struct EnumerationOptions {
  std::size_t cap = 2'000'000;
  // Prune slack; negative means max_displacement().
  double prune_margin = -1.0;
};

struct OrbitBall {
  double radius = 0.0;
  std::vector<GroupElement> elements;
  bool complete = false;
};

OrbitBall enumerate_ball(const SurfacePresentation& g, double radius, const EnumerationOptions& opt = {});

// Greedy generator descent: returns k with k p closer to o than any single
// generator step can improve.
GroupElement descend(const SurfacePresentation& g, const PlanePoint& p);

struct AxisTranslate {
  Geodesic axis;
  double distance;  // from o
  std::string word;  // h with axis = h axis(rep)
};

// Every translate h axis(rep) meeting the closed ball B(o, rho), each once,
// sorted by distance from o.
std::vector<AxisTranslate> axis_translates(const SurfacePresentation& g, const GroupElement& rep,
                                           double rho, const EnumerationOptions& opt = {});

struct AxisHit {
  GroupElement conjugator;
  Geodesic axis;
  Crossing crossing;
};

// Translates of axis(rep) meeting the segment (interior or an endpoint).
std::vector<AxisHit> axes_meeting_segment(const SurfacePresentation& g, const GroupElement& rep,
                                          const Segment& s, const EnumerationOptions& opt = {});

}  // namespace geodual
