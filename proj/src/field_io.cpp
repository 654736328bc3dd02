#include "ndtaxis/field_io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ndtaxis/errors.hpp"
#include "ndtaxis/format.hpp"

namespace ndtaxis {

namespace {

std::uint64_t to_little_endian(std::uint64_t bits) {
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t out = 0;
        for (int b = 0; b < 8; ++b) out |= ((bits >> (8 * b)) & 0xffu) << (8 * (7 - b));
        return out;
    }
    return bits;
}

double parse_double(const std::string& token) {
    double value = 0.0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc() || ptr != end) throw Error("field header: bad number '" + token + "'");
    return value;
}

int parse_int(const std::string& token) {
    int value = 0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc() || ptr != end) throw Error("field header: bad integer '" + token + "'");
    return value;
}

}  // namespace

void write_field(std::ostream& out, const ScalarField& f) {
    const Grid& g = f.grid();
    std::string header = std::to_string(g.dim()) + " " + std::to_string(g.n(0));
    if (g.dim() == 2) header += " " + std::to_string(g.n(1));
    header += " " + format_number(g.length(0));
    if (g.dim() == 2) header += " " + format_number(g.length(1));
    header += "\n";
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    for (double x : f.values()) {
        const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(x));
        char buf[8];
        std::memcpy(buf, &bits, 8);
        out.write(buf, 8);
    }
    if (!out) throw Error("failed writing field");
}

ScalarField read_field(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw Error("field: missing header line");
    std::istringstream hs(header);
    std::vector<std::string> tokens;
    for (std::string t; hs >> t;) tokens.push_back(t);
    if (tokens.empty()) throw Error("field: empty header");
    const int dim = parse_int(tokens[0]);
    Grid grid;
    if (dim == 1 && tokens.size() == 3) {
        grid = Grid::line(parse_double(tokens[2]), parse_int(tokens[1]));
    } else if (dim == 2 && tokens.size() == 5) {
        grid = Grid::rectangle(parse_double(tokens[3]), parse_double(tokens[4]), parse_int(tokens[1]),
                               parse_int(tokens[2]));
    } else {
        throw Error("field: malformed header '" + header + "'");
    }
    std::vector<double> values(grid.size());
    for (double& x : values) {
        char buf[8];
        if (!in.read(buf, 8)) throw Error("field: truncated payload");
        std::uint64_t bits = 0;
        std::memcpy(&bits, buf, 8);
        x = std::bit_cast<double>(to_little_endian(bits));
    }
    return ScalarField(grid, std::move(values));
}

void write_field(const std::filesystem::path& path, const ScalarField& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    write_field(out, f);
}

ScalarField read_field(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return read_field(in);
}

}  // namespace ndtaxis
