#pragma once

// Convex polygon bounding where soaring is allowed.

#include <vector>

#include "soar/types.hpp"

namespace soar {

class Geofence {
 public:
  Geofence() = default;  // inactive: contains every point

  // Vertices of a convex polygon in order (either winding), >= 3.
  explicit Geofence(std::vector<Vec2> vertices);

  bool active() const { return vertices_.size() >= 3; }

  // Boundary points count as inside. An inactive fence contains everything.
  bool contains(const Vec2& point) const;

  const std::vector<Vec2>& vertices() const { return vertices_; }

 private:
  std::vector<Vec2> vertices_;
};

}  // namespace soar
