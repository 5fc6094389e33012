#include "soar/geofence.hpp"

#include <stdexcept>
#include <utility>

namespace soar {

namespace {

double cross2(const Vec2& a, const Vec2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

}  // namespace

Geofence::Geofence(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  if (n < 3) {
    throw std::invalid_argument("Geofence: need at least 3 vertices");
  }
  // Convexity: all consecutive edge cross products share one sign.
  int sign = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e1 = vertices_[(i + 1) % n] - vertices_[i];
    const Vec2 e2 = vertices_[(i + 2) % n] - vertices_[(i + 1) % n];
    const double c = cross2(e1, e2);
    if (c == 0.0) {
      continue;  // collinear run
    }
    const int s = c > 0.0 ? 1 : -1;
    if (sign == 0) {
      sign = s;
    } else if (s != sign) {
      throw std::invalid_argument("Geofence: polygon is not convex");
    }
  }
  if (sign == 0) {
    throw std::invalid_argument("Geofence: polygon is degenerate");
  }
}

bool Geofence::contains(const Vec2& point) const {
  if (!active()) {
    return true;
  }
  const std::size_t n = vertices_.size();
  int sign = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 edge = vertices_[(i + 1) % n] - vertices_[i];
    const double c = cross2(edge, point - vertices_[i]);
    if (c == 0.0) {
      continue;  // on the edge line
    }
    const int s = c > 0.0 ? 1 : -1;
    if (sign == 0) {
      sign = s;
    } else if (s != sign) {
      return false;
    }
  }
  return true;
}

}  // namespace soar
