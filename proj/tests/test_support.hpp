#pragma once

#include <set>
#include <string>
#include <vector>

#include "geodual/surface_group.hpp"

namespace geodual::testing {

inline std::string data_path(const std::string& rel) { return std::string(GEODUAL_DATA_DIR) + "/" + rel; }

inline PresentationPtr torus() {
  static const PresentationPtr p = load_presentation(data_path("presets/punctured_torus.json"));
  return p;
}

inline PresentationPtr genus2() {
  static const PresentationPtr p = load_presentation(data_path("presets/genus2_octagon.json"));
  return p;
}

// Every freely reduced word of length <= n.
inline std::vector<std::string> all_words(const SurfacePresentation& g, int n) {
  std::vector<std::string> out{""};
  std::vector<std::string> layer{""};
  const std::string letters = g.alphabet();
  for (int len = 1; len <= n; ++len) {
    std::vector<std::string> next;
    for (const auto& w : layer) {
      for (char x : letters) {
        if (!w.empty() && w.back() == invert_letter(x)) continue;
        next.push_back(w + x);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

}  // namespace geodual::testing
