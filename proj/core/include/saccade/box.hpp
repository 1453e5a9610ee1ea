// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace saccade {

/// Axis-aligned box in pixels, top-left origin.
struct Box {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
  friend bool operator==(const Box&, const Box&) = default;
};

}  // namespace saccade
