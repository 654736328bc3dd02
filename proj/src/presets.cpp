#include "ndtaxis/presets.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "ndtaxis/format.hpp"
#include "ndtaxis/random.hpp"

namespace ndtaxis {

namespace {

[[noreturn]] void out_of_range(const std::string& param, double value, const std::string& rule) {
    throw ConfigError("init." + param + " = " + format_number(value) + " out of range: " + rule, 0);
}

void require(const std::map<std::string, double>& p, const std::string& name, bool ok, const std::string& rule) {
    if (!ok) out_of_range(name, p.at(name), rule);
}

bool is_whole(double x) { return std::isfinite(x) && x == std::floor(x); }

ScalarField perturbed_front_u(const std::map<std::string, double>& p, const Grid& grid, std::uint64_t seed) {
    const int modes = static_cast<int>(p.at("modes"));
    const int ky_max = grid.dim() == 2 ? modes : 0;
    SplitMixStream rng(seed);
    struct Mode {
        int j, k;
        double a;
    };
    std::vector<Mode> series;
    double total = 0.0;
    for (int j = 0; j <= modes; ++j) {
        for (int k = 0; k <= ky_max; ++k) {
            if (j + k == 0) continue;
            series.push_back({j, k, rng.uniform(-1.0, 1.0)});
            total += std::abs(series.back().a);
        }
    }
    // |noise| <= 1 pointwise
    for (auto& m : series) m.a /= total;

    const double lx = grid.length(0);
    const double ly = grid.length(1);
    const double pi = std::numbers::pi;
    const double base = p.at("base");
    const double amp = p.at("noise_amp");
    const double front = p.at("front");
    const double width = p.at("front_width");
    return ScalarField::sample(grid, [&](double x, double y) {
        double noise = 0.0;
        for (const auto& m : series) noise += m.a * std::cos(m.j * pi * x / lx) * std::cos(m.k * pi * y / ly);
        const double profile = 0.5 * (1.0 - std::tanh((x / lx - front) / width));
        return base * profile * (1.0 + amp * noise);
    });
}

}  // namespace

bool preset_exists(const std::string& name) {
    return name == "constant" || name == "gaussian_colony" || name == "perturbed_front" || name == "checker";
}

std::map<std::string, double> preset_defaults(const std::string& name, const Grid& grid) {
    if (name == "constant") return {{"a", 1.0}, {"b", 1.0}};
    if (name == "gaussian_colony") {
        return {{"amplitude", 1.0},
                {"width", 0.1},
                {"center_x", 0.5 * grid.length(0)},
                {"center_y", 0.5 * grid.length(1)},
                {"background", 0.0},
                {"v_level", 1.0}};
    }
    if (name == "perturbed_front") {
        return {{"base", 1.0},  {"noise_amp", 0.1}, {"front", 0.5},
                {"front_width", 0.05}, {"modes", 4.0}, {"v_level", 1.0}};
    }
    if (name == "checker") return {{"low", 0.0}, {"high", 1.0}, {"blocks", 4.0}, {"v_level", 1.0}};
    throw ConfigError("init.preset: unknown preset '" + name + "'", 0);
}

void complete_preset(InitPreset& preset, const Grid& grid) {
    const auto defaults = preset_defaults(preset.name, grid);
    for (const auto& [k, v] : preset.params) {
        if (!defaults.count(k)) throw ConfigError("unknown key init." + k + " for preset " + preset.name, 0);
    }
    for (const auto& [k, v] : defaults) preset.params.emplace(k, v);
    if (preset.seed && preset.name != "perturbed_front") {
        throw ConfigError("init.seed only applies to preset perturbed_front", 0);
    }
    auto& p = preset.params;
    for (const auto& [k, v] : p) {
        if (!std::isfinite(v)) out_of_range(k, v, "must be finite");
    }
    if (preset.name == "constant") {
        require(p, "a", p["a"] >= 0.0, "a >= 0");
        require(p, "b", p["b"] > 0.0, "b > 0");
    } else if (preset.name == "gaussian_colony") {
        require(p, "amplitude", p["amplitude"] > 0.0, "amplitude > 0");
        require(p, "width", p["width"] > 0.0, "width > 0");
        require(p, "center_x", p["center_x"] >= 0.0 && p["center_x"] <= grid.length(0), "inside the domain");
        require(p, "center_y", p["center_y"] >= 0.0 && p["center_y"] <= grid.length(1), "inside the domain");
        require(p, "background", p["background"] >= 0.0, "background >= 0");
        require(p, "v_level", p["v_level"] > 0.0, "v_level > 0");
    } else if (preset.name == "perturbed_front") {
        require(p, "base", p["base"] > 0.0, "base > 0");
        require(p, "noise_amp", p["noise_amp"] >= 0.0 && p["noise_amp"] < 1.0, "0 <= noise_amp < 1");
        require(p, "front", p["front"] > 0.0, "front > 0 (fraction of the x length)");
        require(p, "front_width", p["front_width"] > 0.0, "front_width > 0");
        require(p, "modes", is_whole(p["modes"]) && p["modes"] >= 1.0 && p["modes"] <= 64.0, "integer in [1, 64]");
        require(p, "v_level", p["v_level"] > 0.0, "v_level > 0");
    } else if (preset.name == "checker") {
        require(p, "low", p["low"] >= 0.0, "low >= 0");
        require(p, "high", p["high"] > p["low"], "high > low");
        require(p, "blocks", is_whole(p["blocks"]) && p["blocks"] >= 1.0, "integer >= 1");
        require(p, "v_level", p["v_level"] > 0.0, "v_level > 0");
    }
}

std::pair<ScalarField, ScalarField> make_initial(const InitPreset& preset_in, const Grid& grid, std::uint64_t run_seed) {
    InitPreset preset = preset_in;
    complete_preset(preset, grid);
    const auto& p = preset.params;

    if (preset.name == "constant") return {ScalarField(grid, p.at("a")), ScalarField(grid, p.at("b"))};

    if (preset.name == "gaussian_colony") {
        const double amp = p.at("amplitude");
        const double w2 = 2.0 * p.at("width") * p.at("width");
        const double cx = p.at("center_x");
        const double cy = grid.dim() == 2 ? p.at("center_y") : 0.0;
        const double bg = p.at("background");
        ScalarField u = ScalarField::sample(grid, [&](double x, double y) {
            const double r2 = (x - cx) * (x - cx) + (grid.dim() == 2 ? (y - cy) * (y - cy) : 0.0);
            return bg + amp * std::exp(-r2 / w2);
        });
        return {std::move(u), ScalarField(grid, p.at("v_level"))};
    }

    if (preset.name == "perturbed_front") {
        const std::uint64_t seed = preset.seed.value_or(run_seed);
        return {perturbed_front_u(p, grid, seed), ScalarField(grid, p.at("v_level"))};
    }

    // checker
    const double blocks = p.at("blocks");
    const double lo = p.at("low");
    const double hi = p.at("high");
    ScalarField u = ScalarField::sample(grid, [&](double x, double y) {
        const auto bx = static_cast<long>(std::floor(x / grid.length(0) * blocks));
        const auto by = grid.dim() == 2 ? static_cast<long>(std::floor(y / grid.length(1) * blocks)) : 0L;
        return (bx + by) % 2 == 0 ? hi : lo;
    });
    return {std::move(u), ScalarField(grid, p.at("v_level"))};
}

}  // namespace ndtaxis
