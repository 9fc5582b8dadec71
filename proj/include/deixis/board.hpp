#pragma once

#include <optional>
#include <vector>

#include "deixis/geometry.hpp"

namespace deixis {

/// Planar target board. `pose` maps board-frame points into the world frame;
/// the board frame has its origin at the top-left corner, x (= u) rightward
/// along the width, y (= v) downward along the height, z along the normal.
struct BoardModel {
  RigidTransform pose;  // board -> world
  double width_mm = 0.0;
  double height_mm = 0.0;
  double bottom_edge_above_ground_mm = 0.0;

  Plane plane_world() const {
    return Plane{pose.translation, rotate(pose, Vec3{0, 0, 1})};
  }
};

/// Board centered laterally at x = 0 in a world frame with x rightward
/// (seen from the user), y up from the ground, z from the board toward
/// the user.
BoardModel make_default_board(double width_mm, double height_mm,
                              double bottom_edge_above_ground_mm);

struct CellBounds {
  double u_min, u_max, v_min, v_max;
};

/// Uniform R x C partition of the board rectangle. Cell ids are row-major
/// from 1 in the top-left cell. Interior edges belong to the cell on their
/// right/below (half-open intervals); the outer right and bottom edges are
/// closed so the cells tile [0,width] x [0,height] exactly.
struct GridSpec {
  int rows = 0;
  int cols = 0;
  double width_mm = 0.0;
  double height_mm = 0.0;
  std::vector<CellBounds> cell_bounds;  // index = cell id - 1

  int cell_count() const { return rows * cols; }
  Point2 cell_center(int cell_id) const;
};

GridSpec build_grid(const BoardModel& board, int rows, int cols);

/// Classification result: a cell id when (u,v) lies on the board, otherwise
/// the out-of-board marker (empty cell).
struct CellResult {
  std::optional<int> cell;
  Point2 point;

  bool out_of_board() const { return !cell.has_value(); }
};

CellResult classify(const Point2& p, const GridSpec& grid);

/// Projects a world point lying on the board plane (within 1 mm) into board
/// (u,v) coordinates. Throws NotOnPlane otherwise.
Point2 to_board_coords(const Point3& p, const BoardModel& board);

}  // namespace deixis
