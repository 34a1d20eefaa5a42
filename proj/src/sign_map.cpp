#include <cmath>

#include "sphera/analysis.hpp"
#include "sphera/kernels.hpp"

namespace sphera {

namespace {

std::vector<double> nodes(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return out;
}

template <class Kernel>
SignGrid sign_map(const SphereSetup& setup, const GridSpec& grid, const QuadConfig& config,
                  Kernel kernel) {
  if (grid.n_xi < 1 || grid.n_zeta < 1) throw DomainError("sign map: grid needs at least one node per axis");
  if (!(grid.xi_min <= grid.xi_max) || !(grid.zeta_min <= grid.zeta_max))
    throw DomainError("sign map: empty range");
  const auto p = setup.strip_halfwidth();
  if (p.is_finite()) {
    const double lim = p.value() * (1.0 + 1e-12);
    if (std::abs(grid.zeta_min) > lim || std::abs(grid.zeta_max) > lim)
      throw DomainError("sign map: zeta range leaves the strip |zeta| <= p");
  }

  SignGrid out;
  out.spec = grid;
  out.xi = nodes(grid.xi_min, grid.xi_max, grid.n_xi);
  out.zeta = nodes(grid.zeta_min, grid.zeta_max, grid.n_zeta);
  std::vector<ComplexExponent> alphas;
  alphas.reserve(out.xi.size() * out.zeta.size());
  for (double z : out.zeta)
    for (double x : out.xi) alphas.push_back({x, z});

  const auto values = kernel(setup, std::span<const ComplexExponent>(alphas), config);
  for (const auto& v : values) {
    const double zero = std::max(1e-9 * std::abs(v.value()), 4.0 * v.I_error());
    out.W.push_back(v.W);
    out.I.push_back(v.I);
    out.I_error.push_back(v.I_error());
    out.sign.push_back(std::abs(v.I) <= zero ? 0 : (v.I > 0.0 ? 1 : -1));
  }
  return out;
}

}  // namespace

SignGrid sign_map_I(const SphereSetup& setup, const GridSpec& grid, const QuadConfig& config) {
  return sign_map(setup, grid, config, [](auto&&... a) { return evaluate_F_parallel(a...); });
}

SignGrid sign_map_I_serial(const SphereSetup& setup, const GridSpec& grid, const QuadConfig& config) {
  return sign_map(setup, grid, config, [](auto&&... a) { return evaluate_F_serial(a...); });
}

}  // namespace sphera
