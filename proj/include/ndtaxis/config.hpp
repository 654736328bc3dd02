#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ndtaxis/diagnostics.hpp"
#include "ndtaxis/errors.hpp"
#include "ndtaxis/grid.hpp"
#include "ndtaxis/model.hpp"
#include "ndtaxis/stepper.hpp"

namespace ndtaxis {

/// Parse or validation failure. line() is 0 when the problem is not tied to a line.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line) : Error(what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

struct InitPreset {
    std::string name = "constant";
    std::map<std::string, double> params;  // preset parameters, defaults filled by validation
    std::optional<std::uint64_t> seed;     // perturbed_front only; falls back to the run seed
};

struct IneqConfig {
    int family_size = 100;
    int modes = 3;
    std::vector<double> p_list{1.0, 2.0};
    std::vector<double> eta_list{0.1, 1.0, 10.0};
    std::vector<int> n_list;  // empty: grid n and 2n
};

struct RunConfig {
    Domain domain;
    std::array<int, 2> cells{64, 1};
    ModelParams model;
    double T = 1.0;
    StepControl step;
    InitPreset init;
    DiagnosticsSpec diagnostics;
    double interval = 0.0;  // 0 until validated: T / 100
    std::filesystem::path out_dir = "out";
    std::vector<double> snapshots;  // empty until validated: {T}
    bool images = false;
    IneqConfig ineq;
    std::uint64_t seed = 0;

    Grid grid() const { return Grid(domain, cells); }
};

/// Parses `section.key = value` lines ('#' starts a comment). Unknown keys,
/// repeated keys and malformed values are errors carrying the line number.
/// The result is validated and has every default filled.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Checks ranges and fills derived defaults. Messages name the offending key.
void validate(RunConfig& config);

/// Canonical text form; parse_config(to_text(c)) reproduces c.
std::string to_text(const RunConfig& config);

}  // namespace ndtaxis
