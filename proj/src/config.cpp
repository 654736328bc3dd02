#include "ndtaxis/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "ndtaxis/format.hpp"
#include "ndtaxis/presets.hpp"

namespace ndtaxis {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg, line);
}

double parse_real(const std::string& key, const std::string& text, int line) {
    double x = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc() || ptr != last) fail(line, key + ": expected a number, got '" + text + "'");
    return x;
}

template <class Int>
Int parse_integer(const std::string& key, const std::string& text, int line) {
    Int x = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        fail(line, key + ": expected an integer, got '" + text + "'");
    }
    return x;
}

bool parse_bool(const std::string& key, const std::string& text, int line) {
    if (text == "true" || text == "on" || text == "1") return true;
    if (text == "false" || text == "off" || text == "0") return false;
    fail(line, key + ": expected true or false, got '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<double> parse_reals(const std::string& key, const std::string& text, int line) {
    std::vector<double> out;
    for (const auto& tok : split_list(text)) out.push_back(parse_real(key, tok, line));
    return out;
}

std::vector<WeightedExponents> parse_q_alpha(const std::string& key, const std::string& text, int line) {
    std::vector<WeightedExponents> out;
    for (const auto& tok : split_list(text)) {
        const auto colon = tok.find(':');
        if (colon == std::string::npos) fail(line, key + ": expected q:alpha pairs, got '" + tok + "'");
        out.push_back({parse_real(key, tok.substr(0, colon), line), parse_real(key, tok.substr(colon + 1), line)});
    }
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value, int line)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"seed", [](RunConfig& c, const std::string& k, const std::string& v, int l) {
             c.seed = parse_integer<std::uint64_t>(k, v, l);
         }},
        {"domain.dim", [](RunConfig& c, const std::string& k, const std::string& v, int l) {
             c.domain.dim = parse_integer<int>(k, v, l);
         }},
        {"domain.lx", [](RunConfig& c, const std::string& k, const std::string& v, int l) {
             c.domain.lengths[0] = parse_real(k, v, l);
         }},
        {"domain.ly", [](RunConfig& c, const std::string& k, const std::string& v, int l) {
             c.domain.lengths[1] = parse_real(k, v, l);
         }},
        {"grid.n", [](RunConfig& c, const std::string& k, const std::string& v, int l) {
             c.cells[0] = c.cells[1] = parse_integer<int>(k, v, l);
         }},
        {"grid.nx", [](RunConfig& c, const std::string& k, const std::string& v, int l) {
             c.cells[0] = parse_integer<int>(k, v, l);
         }},
        {"grid.ny", [](RunConfig& c, const std::string& k, const std::string& v, int l) {
             c.cells[1] = parse_integer<int>(k, v, l);
         }},
        {"model.l", [](RunConfig& c, const std::string& k, const std::string& v, int l) {
             c.model.l = parse_real(k, v, l);
         }},
        {"model.epsilon", [](RunConfig& c, const std::string& k, const std::string& v, int l) {
             c.model.epsilon = parse_real(k, v, l);
         }},
        {"model.b", [](RunConfig& c, const std::string& k, const std::string& v, int l) {
             c.model.b = parse_real(k, v, l);
         }},
        {"model.face_mean", [](RunConfig& c, const std::string&, const std::string& v, int l) {
             try {
                 c.model.face_mean = face_mean_from_string(v);
             } catch (const InvalidArgument& e) {
                 fail(l, std::string("model.face_mean: ") + e.what());
             }
         }},
        {"time.T", [](RunConfig& c, const std::string& k, const std::string& v, int l) { c.T = parse_real(k, v, l); }},
        {"time.safety", [](RunConfig& c, const std::string& k, const std::string& v, int l) {
             c.step.safety = parse_real(k, v, l);
         }},
        {"time.dt_min", [](RunConfig& c, const std::string& k, const std::string& v, int l) {
             c.step.dt_min = parse_real(k, v, l);
         }},
        {"time.dt_max", [](RunConfig& c, const std::string& k, const std::string& v, int l) {
             c.step.dt_max = parse_real(k, v, l);
         }},
        {"time.max_halvings", [](RunConfig& c, const std::string& k, const std::string& v, int l) {
             c.step.max_halvings = parse_integer<int>(k, v, l);
         }},
        {"time.scheme", [](RunConfig& c, const std::string&, const std::string& v, int l) {
             try {
                 c.step.scheme = scheme_from_string(v);
             } catch (const InvalidArgument& e) {
                 fail(l, std::string("time.scheme: ") + e.what());
             }
         }},
        {"init.preset", [](RunConfig& c, const std::string&, const std::string& v, int) { c.init.name = v; }},
        {"init.seed", [](RunConfig& c, const std::string& k, const std::string& v, int l) {
             c.init.seed = parse_integer<std::uint64_t>(k, v, l);
         }},
        {"diagnostics.p_list", [](RunConfig& c, const std::string& k, const std::string& v, int l) {
             c.diagnostics.p_list = parse_reals(k, v, l);
         }},
        {"diagnostics.q_alpha", [](RunConfig& c, const std::string& k, const std::string& v, int l) {
             c.diagnostics.q_alpha = parse_q_alpha(k, v, l);
         }},
        {"diagnostics.interval", [](RunConfig& c, const std::string& k, const std::string& v, int l) {
             c.interval = parse_real(k, v, l);
         }},
        {"output.dir", [](RunConfig& c, const std::string&, const std::string& v, int) { c.out_dir = v; }},
        {"output.snapshots", [](RunConfig& c, const std::string& k, const std::string& v, int l) {
             c.snapshots = parse_reals(k, v, l);
         }},
        {"output.images", [](RunConfig& c, const std::string& k, const std::string& v, int l) {
             c.images = parse_bool(k, v, l);
         }},
        {"ineq.family_size", [](RunConfig& c, const std::string& k, const std::string& v, int l) {
             c.ineq.family_size = parse_integer<int>(k, v, l);
         }},
        {"ineq.modes", [](RunConfig& c, const std::string& k, const std::string& v, int l) {
             c.ineq.modes = parse_integer<int>(k, v, l);
         }},
        {"ineq.p_list", [](RunConfig& c, const std::string& k, const std::string& v, int l) {
             c.ineq.p_list = parse_reals(k, v, l);
         }},
        {"ineq.eta_list", [](RunConfig& c, const std::string& k, const std::string& v, int l) {
             c.ineq.eta_list = parse_reals(k, v, l);
         }},
        {"ineq.n_list", [](RunConfig& c, const std::string& k, const std::string& v, int l) {
             c.ineq.n_list.clear();
             for (const auto& tok : split_list(v)) c.ineq.n_list.push_back(parse_integer<int>(k, tok, l));
         }},
    };
    return table;
}

[[noreturn]] void invalid(const std::string& msg) { throw ConfigError(msg, 0); }

std::string join(const std::vector<double>& xs) {
    std::string out;
    for (double x : xs) out += (out.empty() ? "" : " ") + format_number(x);
    return out;
}

}  // namespace

void validate(RunConfig& c) {
    if (c.domain.dim != 1 && c.domain.dim != 2) invalid("domain.dim must be 1 or 2, got " + std::to_string(c.domain.dim));
    if (c.domain.dim == 1) {
        c.domain.lengths[1] = 1.0;
        c.cells[1] = 1;
    }
    for (int a = 0; a < c.domain.dim; ++a) {
        const char* axis = a == 0 ? "x" : "y";
        if (!(c.domain.lengths[a] > 0.0 && std::isfinite(c.domain.lengths[a]))) {
            invalid(std::string("domain.l") + axis + " must be a positive length");
        }
        if (c.cells[a] < 2) invalid(std::string("grid.n") + axis + " must be >= 2, got " + std::to_string(c.cells[a]));
    }
    try {
        c.model.validate();
        c.step.validate();
    } catch (const InvalidArgument& e) {
        invalid(e.what());
    }
    if (!(c.T > 0.0 && std::isfinite(c.T))) invalid("time.T must be > 0, got " + format_number(c.T));

    for (double p : c.diagnostics.p_list) {
        if (!(p >= 1.0 && std::isfinite(p))) invalid("diagnostics.p_list entries must be finite and >= 1");
    }
    for (const auto& qa : c.diagnostics.q_alpha) {
        if (!(qa.q > 2.0 && qa.alpha > 0.0 && qa.alpha < qa.q)) {
            invalid("diagnostics.q_alpha needs q > 2 and 0 < alpha < q, got " + format_number(qa.q) + ":" +
                    format_number(qa.alpha));
        }
    }
    if (c.interval == 0.0) c.interval = c.T / 100.0;
    if (!(c.interval > 0.0)) invalid("diagnostics.interval must be > 0");
    if (c.snapshots.empty()) c.snapshots = {c.T};
    for (double s : c.snapshots) {
        if (!(s >= 0.0 && s <= c.T)) invalid("output.snapshots entries must lie in [0, time.T], got " + format_number(s));
    }
    std::sort(c.snapshots.begin(), c.snapshots.end());
    c.snapshots.erase(std::unique(c.snapshots.begin(), c.snapshots.end()), c.snapshots.end());

    if (c.ineq.family_size < 1) invalid("ineq.family_size must be >= 1");
    if (c.ineq.modes < 1) invalid("ineq.modes must be >= 1");
    for (double p : c.ineq.p_list) {
        if (!(p >= 1.0)) invalid("ineq.p_list entries must be >= 1");
    }
    for (double eta : c.ineq.eta_list) {
        if (!(eta > 0.0)) invalid("ineq.eta_list entries must be > 0");
    }
    for (int n : c.ineq.n_list) {
        if (n < 2) invalid("ineq.n_list entries must be >= 2");
    }

    if (!preset_exists(c.init.name)) invalid("init.preset: unknown preset '" + c.init.name + "'");
    complete_preset(c.init, c.grid());
}

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    std::set<std::string> seen;
    std::map<std::string, int> init_lines;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) fail(line, "expected 'key = value', got '" + body + "'");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) fail(line, "missing key");
        if (value.empty()) fail(line, key + ": missing value");
        if (!seen.insert(key).second) fail(line, "duplicate key " + key);

        const auto it = setters().find(key);
        if (it != setters().end()) {
            it->second(c, key, value, line);
        } else if (key.rfind("init.", 0) == 0 && key.find('.', 5) == std::string::npos && key.size() > 5) {
            c.init.params[key.substr(5)] = parse_real(key, value, line);
            init_lines[key.substr(5)] = line;
        } else {
            fail(line, "unknown key " + key);
        }
    }
    if (preset_exists(c.init.name)) {
        const auto known = preset_defaults(c.init.name, Grid::line(1.0, 2));
        for (const auto& [name, at] : init_lines) {
            if (!known.count(name)) fail(at, "unknown key init." + name + " for preset " + c.init.name);
        }
    }
    validate(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string(), 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string to_text(const RunConfig& c) {
    std::ostringstream o;
    o << "seed = " << c.seed << "\n";
    o << "domain.dim = " << c.domain.dim << "\n";
    o << "domain.lx = " << format_number(c.domain.lengths[0]) << "\n";
    if (c.domain.dim == 2) o << "domain.ly = " << format_number(c.domain.lengths[1]) << "\n";
    o << "grid.nx = " << c.cells[0] << "\n";
    if (c.domain.dim == 2) o << "grid.ny = " << c.cells[1] << "\n";
    o << "model.l = " << format_number(c.model.l) << "\n";
    o << "model.epsilon = " << format_number(c.model.epsilon) << "\n";
    o << "model.b = " << format_number(c.model.b) << "\n";
    o << "model.face_mean = " << to_string(c.model.face_mean) << "\n";
    o << "time.T = " << format_number(c.T) << "\n";
    o << "time.safety = " << format_number(c.step.safety) << "\n";
    o << "time.dt_min = " << format_number(c.step.dt_min) << "\n";
    o << "time.dt_max = " << format_number(c.step.dt_max) << "\n";
    o << "time.max_halvings = " << c.step.max_halvings << "\n";
    o << "time.scheme = " << to_string(c.step.scheme) << "\n";
    o << "init.preset = " << c.init.name << "\n";
    if (c.init.seed) o << "init.seed = " << *c.init.seed << "\n";
    for (const auto& [k, v] : c.init.params) o << "init." << k << " = " << format_number(v) << "\n";
    o << "diagnostics.p_list = " << join(c.diagnostics.p_list) << "\n";
    o << "diagnostics.q_alpha =";
    for (const auto& qa : c.diagnostics.q_alpha) o << " " << format_number(qa.q) << ":" << format_number(qa.alpha);
    o << "\n";
    o << "diagnostics.interval = " << format_number(c.interval) << "\n";
    o << "output.dir = " << c.out_dir.string() << "\n";
    o << "output.snapshots = " << join(c.snapshots) << "\n";
    o << "output.images = " << (c.images ? "true" : "false") << "\n";
    o << "ineq.family_size = " << c.ineq.family_size << "\n";
    o << "ineq.modes = " << c.ineq.modes << "\n";
    o << "ineq.p_list = " << join(c.ineq.p_list) << "\n";
    o << "ineq.eta_list = " << join(c.ineq.eta_list) << "\n";
    if (!c.ineq.n_list.empty()) {
        o << "ineq.n_list =";
        for (int n : c.ineq.n_list) o << " " << n;
        o << "\n";
    }
    return o.str();
}

}  // namespace ndtaxis
