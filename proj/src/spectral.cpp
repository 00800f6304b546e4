#include "sns/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace sns {

PhysicalField to_physical(const SpectralField& f) {
  PhysicalField out(f.grid_ptr(), f.components());
  for (int c = 0; c < f.components(); ++c) f.grid().inverse(f.component(c).data(), out.component(c).data());
  return out;
}

SpectralField to_spectral(const PhysicalField& g) {
  SpectralField out(g.grid_ptr(), g.components());
  for (int c = 0; c < g.components(); ++c) g.grid().forward(g.component(c).data(), out.component(c).data());
  return out;
}

namespace {

// Wavenumber vector of a half-layout index, with or without the Nyquist
// zeroing used by first derivatives.
struct ModeK {
  double k[3];
};

ModeK derivative_k(const Grid& g, int i, int j, int l) {
  return {{g.derivative_wavenumber(i), g.derivative_wavenumber(j), g.half_derivative_wavenumber(l)}};
}

ModeK full_k(const Grid& g, int i, int j, int l) {
  return {{g.wavenumber(i), g.wavenumber(j), g.half_wavenumber(l)}};
}

}  // namespace

SpectralField derivative(const SpectralField& f, int axis) {
  if (axis < 0 || axis > 2) throw std::invalid_argument("derivative: axis must be 0, 1 or 2");
  const Grid& g = f.grid();
  return apply_multiplier(f, [&](int i, int j, int l) { return Complex(0.0, derivative_k(g, i, j, l).k[axis]); });
}

SpectralField laplacian(const SpectralField& f) {
  const Grid& g = f.grid();
  return apply_multiplier(f, [&](int i, int j, int l) { return -g.k_squared(i, j, l); });
}

SpectralField heat_semigroup(const SpectralField& f, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("heat_semigroup: time must be nonnegative");
  if (t == 0.0) return f;
  const Grid& g = f.grid();
  // exp depends only on the integer shell; tabulate once per call.
  std::vector<double> table(static_cast<std::size_t>(g.max_shell()) + 1);
  const double k0sq = g.k0() * g.k0();
  for (std::size_t s = 0; s < table.size(); ++s) table[s] = std::exp(-t * k0sq * static_cast<double>(s));
  return apply_multiplier(f, [&](int i, int j, int l) { return table[static_cast<std::size_t>(g.shell(i, j, l))]; });
}

SpectralField leray_project(const SpectralField& f) {
  if (f.components() != 3) throw std::invalid_argument("leray_project: vector field required");
  SpectralField out = f;
  const Grid& g = f.grid();
  const int n = g.n();
  const int nz = g.nz();
  auto c0 = out.component(0);
  auto c1 = out.component(1);
  auto c2 = out.component(2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < nz; ++l) {
        const double k2 = g.k_squared(i, j, l);
        if (k2 == 0.0) continue;
        const ModeK k = full_k(g, i, j, l);
        const std::size_t idx = g.index(i, j, l);
        const Complex kdotv = k.k[0] * c0[idx] + k.k[1] * c1[idx] + k.k[2] * c2[idx];
        const Complex s = kdotv / k2;
        c0[idx] -= k.k[0] * s;
        c1[idx] -= k.k[1] * s;
        c2[idx] -= k.k[2] * s;
      }
    }
  }
  return out;
}

SpectralField gradient(const SpectralField& scalar) {
  if (scalar.components() != 1) throw std::invalid_argument("gradient: scalar field required");
  SpectralField out(scalar.grid_ptr(), 3);
  for (int a = 0; a < 3; ++a) {
    auto d = derivative(scalar, a);
    std::copy(d.component(0).begin(), d.component(0).end(), out.component(a).begin());
  }
  return out;
}

SpectralField divergence(const SpectralField& f) {
  if (f.components() != 3 && f.components() != 9) {
    throw std::invalid_argument("divergence: vector or tensor field required");
  }
  const Grid& g = f.grid();
  const int rows = f.components() == 3 ? 1 : 3;
  SpectralField out(f.grid_ptr(), rows == 1 ? 1 : 3);
  const int n = g.n();
  const int nz = g.nz();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < nz; ++l) {
        const ModeK k = derivative_k(g, i, j, l);
        const std::size_t idx = g.index(i, j, l);
        for (int b = 0; b < rows; ++b) {
          Complex sum{};
          for (int a = 0; a < 3; ++a) {
            const int comp = rows == 1 ? a : 3 * a + b;
            sum += Complex(0.0, k.k[a]) * f.component(comp)[idx];
          }
          out.component(b)[idx] = sum;
        }
      }
    }
  }
  return out;
}

SpectralField dealias(const SpectralField& f) {
  const Grid& g = f.grid();
  return apply_multiplier(f, [&](int i, int j, int l) { return g.dealias_retained(i, j, l) ? 1.0 : 0.0; });
}

namespace {

void dealias_in_place(SpectralField& f) {
  const Grid& g = f.grid();
  const int n = g.n();
  const int nz = g.nz();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < nz; ++l) {
        if (g.dealias_retained(i, j, l)) continue;
        const std::size_t idx = g.index(i, j, l);
        for (int c = 0; c < f.components(); ++c) f.component(c)[idx] = Complex{};
      }
    }
  }
}

}  // namespace

SpectralField tensor_product(const SpectralField& x, const SpectralField& y) {
  require_compatible(x.grid(), y.grid(), "tensor_product");
  if (x.components() != 3 || y.components() != 3) throw std::invalid_argument("tensor_product: vector fields required");
  const Grid& g = x.grid();
  const bool same = x.data().data() == y.data().data();
  const PhysicalField px = to_physical(x);
  const PhysicalField py = same ? PhysicalField{} : to_physical(y);
  const PhysicalField& qy = same ? px : py;

  SpectralField out(x.grid_ptr(), 9);
  AlignedVector<double> product(g.real_size());
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (same && b < a) {
        // Symmetric: reuse (b, a).
        auto src = out.component(3 * b + a);
        std::copy(src.begin(), src.end(), out.component(3 * a + b).begin());
        continue;
      }
      auto xa = px.component(a);
      auto yb = qy.component(b);
      for (std::size_t m = 0; m < product.size(); ++m) product[m] = xa[m] * yb[m];
      g.forward(product.data(), out.component(3 * a + b).data());
    }
  }
  dealias_in_place(out);
  return out;
}

SpectralField q_bilinear(const SpectralField& x, const SpectralField& y) {
  return leray_project(divergence(tensor_product(x, y)));
}

double spectral_l2_norm(const SpectralField& f) {
  const Grid& g = f.grid();
  const int n = g.n();
  const int nz = g.nz();
  double sum = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    auto comp = f.component(c);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int l = 0; l < nz; ++l) sum += g.mode_weight(l) * std::norm(comp[g.index(i, j, l)]);
      }
    }
  }
  return std::sqrt(sum);
}

double physical_l2_norm(const PhysicalField& g) {
  double sum = 0.0;
  for (double v : g.data()) sum += v * v;
  return std::sqrt(sum / static_cast<double>(g.grid().real_size()));
}

double max_abs_coefficient(const SpectralField& f) {
  double m = 0.0;
  for (const auto& v : f.data()) m = std::max(m, std::abs(v));
  return m;
}

double divergence_defect(const SpectralField& f) {
  if (f.components() != 3) throw std::invalid_argument("divergence_defect: vector field required");
  const double scale = max_abs_coefficient(f);
  if (scale == 0.0) return 0.0;
  const Grid& g = f.grid();
  const int n = g.n();
  const int nz = g.nz();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < nz; ++l) {
        const ModeK k = full_k(g, i, j, l);
        const std::size_t idx = g.index(i, j, l);
        const Complex d = k.k[0] * f.component(0)[idx] + k.k[1] * f.component(1)[idx] + k.k[2] * f.component(2)[idx];
        worst = std::max(worst, std::abs(d));
      }
    }
  }
  return worst / scale;
}

double hermitian_defect(const SpectralField& f) {
  const double scale = max_abs_coefficient(f);
  if (scale == 0.0) return 0.0;
  const Grid& g = f.grid();
  const int n = g.n();
  double worst = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    for (int l : {0, n / 2}) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const int pi = (n - i) % n;
          const int pj = (n - j) % n;
          const Complex a = f.at(c, i, j, l);
          const Complex b = f.at(c, pi, pj, l);
          worst = std::max(worst, std::abs(a - std::conj(b)));
        }
      }
    }
  }
  return worst / scale;
}

double mean_magnitude(const SpectralField& f) {
  double m = 0.0;
  for (int c = 0; c < f.components(); ++c) m = std::max(m, std::abs(f.at(c, 0, 0, 0)));
  return m;
}

void enforce_hermitian(SpectralField& f) {
  const Grid& g = f.grid();
  const int n = g.n();
  for (int c = 0; c < f.components(); ++c) {
    for (int l : {0, n / 2}) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const int pi = (n - i) % n;
          const int pj = (n - j) % n;
          if (g.index(pi, pj, l) < g.index(i, j, l)) continue;
          const Complex avg = 0.5 * (f.at(c, i, j, l) + std::conj(f.at(c, pi, pj, l)));
          f.at(c, i, j, l) = avg;
          f.at(c, pi, pj, l) = std::conj(avg);
        }
      }
    }
  }
}

SpectralField remove_mean(SpectralField f) {
  for (int c = 0; c < f.components(); ++c) f.at(c, 0, 0, 0) = Complex{};
  return f;
}

}  // namespace sns
