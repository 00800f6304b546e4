#include "sns/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "sns/io.hpp"

namespace sns {

namespace {

constexpr char kMagic[4] = {'S', 'N', 'S', 'F'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw std::runtime_error("snapshot: truncated file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_snapshot(std::ostream& os, const SpectralField& f) {
  const Grid& g = f.grid();
  const int n = g.n();
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(n));
  put<double>(os, g.length());
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.components()));
  for (int c = 0; c < f.components(); ++c) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) {
          // Modes outside the half layout are conjugates of their mirror.
          const Complex z = l < g.nz() ? f.at(c, i, j, l) : std::conj(f.at(c, (n - i) % n, (n - j) % n, n - l));
          put<double>(os, z.real());
          put<double>(os, z.imag());
        }
      }
    }
  }
  if (!os) throw std::runtime_error("snapshot: write failed");
}

SpectralField read_snapshot(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("snapshot: bad magic");
  const auto version = get<std::uint32_t>(is);
  if (version != kVersion) throw std::runtime_error("snapshot: unsupported version " + std::to_string(version));
  const int n = static_cast<int>(get<std::uint32_t>(is));
  const double length = get<double>(is);
  const int components = static_cast<int>(get<std::uint32_t>(is));
  if (components != 1 && components != 3 && components != 9) throw std::runtime_error("snapshot: bad component count");
  auto grid = Grid::create(n, length);

  const std::size_t full = static_cast<std::size_t>(n) * n * n;
  std::vector<Complex> lattice(full);
  SpectralField f(grid, components);
  for (int c = 0; c < components; ++c) {
    for (std::size_t m = 0; m < full; ++m) {
      const double re = get<double>(is);
      const double im = get<double>(is);
      lattice[m] = {re, im};
    }
    double scale = 0.0;
    for (const auto& z : lattice) scale = std::max(scale, std::abs(z));
    auto at = [&](int i, int j, int l) -> const Complex& { return lattice[(static_cast<std::size_t>(i) * n + j) * n + l]; };
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) {
          const Complex mirror = std::conj(at((n - i) % n, (n - j) % n, (n - l) % n));
          if (std::abs(at(i, j, l) - mirror) > 1e-12 * scale) {
            throw std::runtime_error("snapshot: coefficients are not Hermitian (not a real field)");
          }
          if (l < grid->nz()) f.at(c, i, j, l) = at(i, j, l);
        }
      }
    }
  }
  return f;
}

void save_snapshot(const std::string& path, const SpectralField& f) {
  write_file_atomic(path, [&](std::ostream& os) { write_snapshot(os, f); }, true);
}

SpectralField load_snapshot(const std::string& path, const GridPtr& grid) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("snapshot: cannot open '" + path + "'");
  SpectralField raw = read_snapshot(in);
  if (!raw.grid().compatible(*grid)) {
    throw GridMismatch("snapshot '" + path + "' has grid " + raw.grid().describe() + ", expected " + grid->describe());
  }
  SpectralField f(grid, raw.components());
  std::copy(raw.data().begin(), raw.data().end(), f.data().begin());
  return f;
}

}  // namespace sns
