#pragma once

#include <iosfwd>
#include <string>

#include "sns/field.hpp"

namespace sns {

/// Field snapshot, little-endian:
///   "SNSF" | u32 version (1) | u32 n | f64 L | u32 components |
///   per component, the full n^3 coefficient lattice in row-major (i, j, l)
///   order as (re, im) pairs of f64.
/// Readers recover the half layout and reject lattices that are not the
/// transform of a real field.
void write_snapshot(std::ostream& os, const SpectralField& f);
SpectralField read_snapshot(std::istream& is);

void save_snapshot(const std::string& path, const SpectralField& f);
/// Reads a snapshot and checks it against `grid` (GridMismatch otherwise).
SpectralField load_snapshot(const std::string& path, const GridPtr& grid);

}  // namespace sns
