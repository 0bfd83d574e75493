#include "wheelsim/contrast.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace wheelsim {

namespace {

double linearize(std::uint8_t channel) {
  const double c = channel / 255.0;
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

std::string describe_ratio(const char* name, Rgb fg, Rgb bg, double ratio, double min) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "contrast %s %s on background %s is %.2f:1, below %.2f:1", name,
                to_hex(fg).c_str(), to_hex(bg).c_str(), ratio, min);
  return buf;
}

}  // namespace

double relative_luminance(Rgb c) {
  return 0.2126 * linearize(c.r) + 0.7152 * linearize(c.g) + 0.0722 * linearize(c.b);
}

double contrast_ratio(Rgb a, Rgb b) {
  const double la = relative_luminance(a);
  const double lb = relative_luminance(b);
  return (std::max(la, lb) + 0.05) / (std::min(la, lb) + 0.05);
}

std::vector<AccessibilityViolation> validate_accessibility(const Level& level,
                                                           const AccessibilityRules& rules) {
  std::vector<AccessibilityViolation> out;
  if (level.decoration_count > rules.max_decorations) {
    out.push_back({ViolationKind::Clutter, "clutter: " + std::to_string(level.decoration_count) +
                                               " decorations exceed the budget of " +
                                               std::to_string(rules.max_decorations)});
  }
  const auto& pal = level.palette;
  const std::pair<const char*, Rgb> foreground[] = {
      {"chair", pal.chair}, {"route", pal.route}, {"reward", pal.reward}};
  for (const auto& [name, color] : foreground) {
    const double ratio = contrast_ratio(color, pal.background);
    if (ratio < rules.min_contrast)
      out.push_back({ViolationKind::Contrast, describe_ratio(name, color, pal.background, ratio, rules.min_contrast)});
  }
  return out;
}

}  // namespace wheelsim
