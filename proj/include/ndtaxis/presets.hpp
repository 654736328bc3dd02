#pragma once

#include <cstdint>
#include <utility>

#include "ndtaxis/config.hpp"

namespace ndtaxis {

bool preset_exists(const std::string& name);

/// Parameter names of a preset with their defaults on the given grid.
std::map<std::string, double> preset_defaults(const std::string& name, const Grid& grid);

/// Fills missing parameters and range-checks all of them; throws ConfigError
/// naming init.<param>.
void complete_preset(InitPreset& preset, const Grid& grid);

/// Initial data (u0, v0) with u0 >= 0 and v0 > 0. Parameters missing from
/// preset.params take their defaults; out-of-range values throw ConfigError.
///   constant        a, b
///   gaussian_colony amplitude, width, center_x, center_y, background, v_level
///   perturbed_front base, noise_amp, front, front_width, modes, v_level (+ seed)
///   checker         low, high, blocks, v_level
std::pair<ScalarField, ScalarField> make_initial(const InitPreset& preset, const Grid& grid,
                                                 std::uint64_t run_seed = 0);

}  // namespace ndtaxis
