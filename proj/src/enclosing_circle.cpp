#include "deixis/enclosing_circle.hpp"

#include <cmath>
#include <vector>

namespace deixis {

namespace {

constexpr double kSlack = 1e-10;  // relative containment slack

double dist(const Point2& a, const Point2& b) {
  const double du = a.u - b.u, dv = a.v - b.v;
  return std::sqrt(du * du + dv * dv);
}

bool contains(const Circle& c, const Point2& p) {
  return dist(c.center, p) <= c.radius * (1.0 + kSlack) + kSlack;
}

Circle from_two(const Point2& a, const Point2& b) {
  Circle c;
  c.center = {(a.u + b.u) / 2.0, (a.v + b.v) / 2.0};
  c.radius = dist(a, b) / 2.0;
  return c;
}

Circle from_three(const Point2& a, const Point2& b, const Point2& p) {
  // Circumcircle; falls back to the best two-point circle when degenerate.
  const double bu = b.u - a.u, bv = b.v - a.v;
  const double cu = p.u - a.u, cv = p.v - a.v;
  const double d = 2.0 * (bu * cv - bv * cu);
  if (std::abs(d) < 1e-12) {
    Circle best = from_two(a, b);
    for (const Circle& c : {from_two(a, p), from_two(b, p)})
      if (c.radius > best.radius) best = c;
    return best;
  }
  const double b2 = bu * bu + bv * bv;
  const double c2 = cu * cu + cv * cv;
  Circle c;
  c.center = {a.u + (cv * b2 - bv * c2) / d, a.v + (bu * c2 - cu * b2) / d};
  c.radius = dist(c.center, a);
  return c;
}

Circle circle_from_boundary(const std::vector<Point2>& r) {
  switch (r.size()) {
    case 0: return Circle{};
    case 1: return Circle{r[0], 0.0};
    case 2: return from_two(r[0], r[1]);
    default: return from_three(r[0], r[1], r[2]);
  }
}

Circle welzl(std::span<const Point2> pts, size_t n, std::vector<Point2>& r) {
  if (n == 0 || r.size() == 3) return circle_from_boundary(r);
  const Point2 p = pts[n - 1];
  Circle c = welzl(pts, n - 1, r);
  if (contains(c, p)) return c;
  r.push_back(p);
  c = welzl(pts, n - 1, r);
  r.pop_back();
  return c;
}

}  // namespace

Circle min_enclosing_circle(std::span<const Point2> points) {
  if (points.empty()) return Circle{};
  if (points.size() <= 64) {
    std::vector<Point2> boundary;
    return welzl(points, points.size(), boundary);
  }
  // Large windows: centroid + max distance (radius may overshoot by up to 2x).
  Point2 c{0.0, 0.0};
  for (const Point2& p : points) {
    c.u += p.u;
    c.v += p.v;
  }
  c.u /= static_cast<double>(points.size());
  c.v /= static_cast<double>(points.size());
  double r = 0.0;
  for (const Point2& p : points) r = std::max(r, dist(c, p));
  return Circle{c, r};
}

}  // namespace deixis
