#pragma once

// JSON configuration document:
//
//   {
//     "speed_of_sound": 343.0,
//     "axes": [
//       { "length": 1.0,
//         "beta_minus": [0.1, 0.1],            // β as [re, im]
//         "beta_plus":  {"zeta": [10.0, -3.0]}  // or via impedance ζ
//       },
//       { "length": 1.4,
//         "beta_minus": {"re": 0.02, "im": 0.0},
//         "beta_plus":  {"table": "panel.csv"}  // rows "f_hz, re_beta, im_beta"
//       }
//     ],
//     "solver": { "n_max": 40, "n_max_factor": 3.0, "n_newton": 100,
//                 "alpha_newton": 0.3, "eps_newton": 1e-12,
//                 "dedup_tol": 1e-4, "zero_tol": 1e-4 }
//   }
//
// Table paths are resolved relative to the directory holding the config.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "roomgreen/core.hpp"

namespace roomgreen {

struct Config {
  RoomSpec room;
  SolverParams solver;
  /// n_max = ceil(factor · max_j q_j) when no explicit n_max is configured.
  std::optional<double> n_max_factor;
  bool explicit_n_max = false;
  /// Normalized JSON echo of the parsed document.
  std::string echo;
};

Config parse_config(std::string_view json_text,
                    const std::filesystem::path& base_dir = std::filesystem::path{});
Config load_config(const std::filesystem::path& path);

/// Solver parameters to use at `frequency`, resolving n_max_factor.
SolverParams params_at(const Config& config, double frequency);

}  // namespace roomgreen
