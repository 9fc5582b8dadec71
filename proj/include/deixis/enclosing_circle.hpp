#pragma once

#include <span>

#include "deixis/geometry.hpp"

namespace deixis {

struct Circle {
  Point2 center;
  double radius = 0.0;
};

/// Minimum enclosing circle of a 2D point set. Exact (Welzl) for up to 64
/// points; centroid + max-distance approximation beyond that. Deterministic:
/// no randomized shuffling.
Circle min_enclosing_circle(std::span<const Point2> points);

}  // namespace deixis
