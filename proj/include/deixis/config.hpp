#pragma once

#include <string>

#include "deixis/board.hpp"
#include "deixis/engine.hpp"
#include "deixis/simulator.hpp"

namespace deixis {

/// Run configuration: static frame chain sensor -> world -> board, board and
/// grid geometry, engine and simulator parameters. Loaded from a versioned
/// JSON file; every key is optional and falls back to the defaults below.
struct RunConfig {
  RigidTransform sensor_to_world;
  BoardModel board;
  int grid_rows = 2;
  int grid_cols = 3;
  EngineConfig engine;
  NoiseModel noise;
  Participant participant;

  GridSpec grid() const { return build_grid(board, grid_rows, grid_cols); }
  EngineSetup engine_setup() const {
    return EngineSetup{sensor_to_world, board, grid(), engine};
  }
};

/// Default scene: 1910 x 1290 mm board, bottom edge 1000 mm above the
/// ground, sensor centered 1300 mm above the board's top edge, user
/// standing 1500 mm in front of the board.
RunConfig default_config();

RunConfig load_config(const std::string& path);

/// Parses a config from JSON text (`source` names the origin in errors).
RunConfig parse_config(const std::string& text, const std::string& source);

std::string serialize_config(const RunConfig& cfg);

}  // namespace deixis
