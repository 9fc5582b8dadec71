#include "deixis/board.hpp"

#include <cmath>

namespace deixis {

BoardModel make_default_board(double width_mm, double height_mm,
                              double bottom_edge_above_ground_mm) {
  if (width_mm <= 0.0 || height_mm <= 0.0)
    throw ConfigError("board dimensions must be positive");
  BoardModel b;
  b.width_mm = width_mm;
  b.height_mm = height_mm;
  b.bottom_edge_above_ground_mm = bottom_edge_above_ground_mm;
  // Board u ( +x world ), v ( -y world ), normal ( -z world ): a 180-degree
  // rotation about the world x axis.
  b.pose.rotation = rotation_from_quaternion(Quat{0, 1, 0, 0});
  b.pose.translation = Vec3{-width_mm / 2.0,
                            bottom_edge_above_ground_mm + height_mm, 0.0};
  b.pose.from_frame = "board";
  b.pose.to_frame = "world";
  return b;
}

GridSpec build_grid(const BoardModel& board, int rows, int cols) {
  if (rows < 1 || cols < 1)
    throw InvalidGrid("grid needs at least one row and one column");
  GridSpec g;
  g.rows = rows;
  g.cols = cols;
  g.width_mm = board.width_mm;
  g.height_mm = board.height_mm;
  g.cell_bounds.reserve(static_cast<size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    const double v0 = board.height_mm * r / rows;
    const double v1 = board.height_mm * (r + 1) / rows;
    for (int c = 0; c < cols; ++c) {
      const double u0 = board.width_mm * c / cols;
      const double u1 = board.width_mm * (c + 1) / cols;
      g.cell_bounds.push_back({u0, u1, v0, v1});
    }
  }
  return g;
}

Point2 GridSpec::cell_center(int cell_id) const {
  const CellBounds& b = cell_bounds.at(static_cast<size_t>(cell_id) - 1);
  return {(b.u_min + b.u_max) / 2.0, (b.v_min + b.v_max) / 2.0};
}

CellResult classify(const Point2& p, const GridSpec& grid) {
  CellResult res;
  res.point = p;
  if (!(p.u >= 0.0 && p.u <= grid.width_mm && p.v >= 0.0 &&
        p.v <= grid.height_mm))
    return res;  // out of board

  int col = static_cast<int>(std::floor(p.u * grid.cols / grid.width_mm));
  int row = static_cast<int>(std::floor(p.v * grid.rows / grid.height_mm));
  col = std::min(std::max(col, 0), grid.cols - 1);
  row = std::min(std::max(row, 0), grid.rows - 1);

  // Nudge onto the bounds actually stored in cell_bounds so that index
  // arithmetic and rectangle comparison can never disagree near an edge.
  auto bounds = [&](int r, int c) -> const CellBounds& {
    return grid.cell_bounds[static_cast<size_t>(r) * grid.cols + c];
  };
  while (col > 0 && p.u < bounds(row, col).u_min) --col;
  while (col + 1 < grid.cols && p.u >= bounds(row, col).u_max) ++col;
  while (row > 0 && p.v < bounds(row, col).v_min) --row;
  while (row + 1 < grid.rows && p.v >= bounds(row, col).v_max) ++row;

  res.cell = row * grid.cols + col + 1;
  return res;
}

Point2 to_board_coords(const Point3& p, const BoardModel& board) {
  const Point3 local = apply(invert(board.pose), p);
  if (std::abs(local.z) > 1.0)
    throw NotOnPlane("point is " + std::to_string(local.z) +
                     " mm off the board plane");
  return {local.x, local.y};
}

}  // namespace deixis
