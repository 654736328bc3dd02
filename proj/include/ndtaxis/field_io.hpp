#pragma once

#include <filesystem>
#include <iosfwd>

#include "ndtaxis/grid.hpp"

namespace ndtaxis {

// Snapshot format: one ASCII header line "dim nx [ny] Lx [Ly]\n" followed by
// the cell values as little-endian float64 in storage order. Lengths are
// printed in shortest round-trip form, so write/read is bit-exact.
void write_field(std::ostream& out, const ScalarField& f);
ScalarField read_field(std::istream& in);

void write_field(const std::filesystem::path& path, const ScalarField& f);
ScalarField read_field(const std::filesystem::path& path);

}  // namespace ndtaxis
