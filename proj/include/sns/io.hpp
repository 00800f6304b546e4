#pragma once

#include <functional>
#include <iosfwd>
#include <string>

namespace sns {

/// Writes through a temporary sibling file and renames it over `path`, so an
/// interrupted run never leaves a partial file behind.
void write_file_atomic(const std::string& path, const std::function<void(std::ostream&)>& writer, bool binary = false);

/// %.17g rendering: round-trips every double and is stable across runs.
std::string format_real(double v);

}  // namespace sns
