#pragma once

#include <string>
#include <vector>

#include "wheelsim/level.hpp"

namespace wheelsim {

/// Relative luminance of an 8-bit sRGB color, in [0, 1].
double relative_luminance(Rgb c);

/// (L_light + 0.05) / (L_dark + 0.05); symmetric, in [1, 21].
double contrast_ratio(Rgb a, Rgb b);

struct AccessibilityRules {
  int max_decorations{5};
  double min_contrast{4.5};
};

enum class ViolationKind { Clutter, Contrast };

struct AccessibilityViolation {
  ViolationKind kind;
  std::string message;
};

/// Clutter budget and contrast of chair, route and reward against the background.
std::vector<AccessibilityViolation> validate_accessibility(const Level& level,
                                                           const AccessibilityRules& rules = {});

}  // namespace wheelsim
