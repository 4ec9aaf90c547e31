#include "sitwork/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace sitwork {

void LatticeSpec::validate() const {
  if (L < 1) throw std::invalid_argument("LatticeSpec: L must be positive");
  if (!(J > 0)) throw std::invalid_argument("LatticeSpec: J must be > 0");
  if (!std::isfinite(U)) throw std::invalid_argument("LatticeSpec: U not finite");
}

std::uint32_t ImpurityConfig::site_mask() const {
  std::uint32_t m = 0;
  for (int s : sites) m |= std::uint32_t{1} << s;
  return m;
}

void ImpurityConfig::validate(int L) const {
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (sites[i] < 0 || sites[i] >= L)
      throw std::invalid_argument("ImpurityConfig: site out of range");
    if (i > 0 && sites[i] <= sites[i - 1])
      throw std::invalid_argument("ImpurityConfig: sites must be strictly increasing");
  }
  if (!std::isfinite(strength))
    throw std::invalid_argument("ImpurityConfig: strength not finite");
}

PotentialDelta potential_delta(const ImpurityConfig& initial,
                               const ImpurityConfig& final_config, int L) {
  initial.validate(L);
  final_config.validate(L);
  PotentialDelta d;
  d.delta_v.assign(L, 0.0);
  for (int s : final_config.sites) d.delta_v[s] += final_config.strength;
  for (int s : initial.sites) d.delta_v[s] -= initial.strength;
  return d;
}

std::vector<double> site_potential(const ImpurityConfig& config, int L) {
  config.validate(L);
  std::vector<double> v(L, 0.0);
  for (int s : config.sites) v[s] = config.strength;
  return v;
}

void SparseHamiltonian::apply(const double* x, double* y) const {
  for (std::size_t k = 0; k < dim; ++k) y[k] = diagonal[k] * x[k];
  for (const Entry& e : off) {
    y[e.row] += e.value * x[e.col];
    y[e.col] += e.value * x[e.row];
  }
}

std::vector<double> SparseHamiltonian::apply(const std::vector<double>& x) const {
  std::vector<double> y(dim);
  apply(x.data(), y.data());
  return y;
}

std::vector<double> SparseHamiltonian::to_dense() const {
  std::vector<double> a(dim * dim, 0.0);
  for (std::size_t k = 0; k < dim; ++k) a[k * dim + k] = diagonal[k];
  for (const Entry& e : off) {
    a[static_cast<std::size_t>(e.col) * dim + e.row] = e.value;
    a[static_cast<std::size_t>(e.row) * dim + e.col] = e.value;
  }
  return a;
}

void SparseHamiltonian::spectral_bounds(double& lo, double& hi) const {
  std::vector<double> radius(dim, 0.0);
  for (const Entry& e : off) {
    radius[e.row] += std::abs(e.value);
    radius[e.col] += std::abs(e.value);
  }
  lo = diagonal[0];
  hi = diagonal[0];
  for (std::size_t k = 0; k < dim; ++k) {
    lo = std::min(lo, diagonal[k] - radius[k]);
    hi = std::max(hi, diagonal[k] + radius[k]);
  }
}

SparseHamiltonian build_hamiltonian(const LatticeSpec& spec,
                                    const ImpurityConfig& config,
                                    const SectorBasis& basis) {
  return build_hamiltonian(spec, site_potential(config, spec.L), basis);
}

SparseHamiltonian build_hamiltonian(const LatticeSpec& spec,
                                    const std::vector<double>& potential,
                                    const SectorBasis& basis) {
  spec.validate();
  if (basis.sites() != spec.L)
    throw std::invalid_argument("build_hamiltonian: basis/lattice dimension mismatch");
  if (static_cast<int>(potential.size()) != spec.L)
    throw std::invalid_argument("build_hamiltonian: potential length mismatch");

  const int L = spec.L;
  SparseHamiltonian h;
  h.dim = basis.dim();
  h.diagonal.resize(h.dim);

  std::vector<std::pair<int, int>> bonds;
  for (int i = 0; i + 1 < L; ++i) bonds.emplace_back(i, i + 1);
  if (spec.boundary == Boundary::Periodic && L > 2) bonds.emplace_back(0, L - 1);

  for (std::size_t k = 0; k < h.dim; ++k) {
    const Determinant& d = basis.state(k);
    double diag = spec.U * std::popcount(d.up & d.dn);
    for (int j = 0; j < L; ++j)
      if (double v = potential[j]; v != 0.0) diag += v * site_occupation(d, j);
    h.diagonal[k] = diag;

    // One stored entry per allowed hop; both hop directions between the same
    // pair of determinants give the same symmetric matrix element.
    for (auto [a, b] : bonds) {
      for (int s = 0; s < 2; ++s) {
        const std::uint32_t mask = s == 0 ? d.up : d.dn;
        const bool occ_a = mask >> a & 1u;
        const bool occ_b = mask >> b & 1u;
        if (occ_a == occ_b) continue;
        const int from = occ_a ? a : b;
        const int to = occ_a ? b : a;
        const int sign = hop_parity(mask, to, from);
        const std::uint32_t moved =
            mask ^ ((std::uint32_t{1} << a) | (std::uint32_t{1} << b));
        Determinant d2 = d;
        (s == 0 ? d2.up : d2.dn) = moved;
        const std::size_t k2 = basis.rank(d2);
        if (k < k2)
          h.off.push_back({static_cast<std::int32_t>(k),
                           static_cast<std::int32_t>(k2), -spec.J * sign});
      }
    }
  }
  std::sort(h.off.begin(), h.off.end(), [](const auto& a, const auto& b) {
    return std::pair(a.row, a.col) < std::pair(b.row, b.col);
  });
  return h;
}

SparseHamiltonian with_delta(const SparseHamiltonian& h,
                             const PotentialDelta& delta,
                             const SectorBasis& basis) {
  if (h.dim != basis.dim())
    throw std::invalid_argument("with_delta: dimension mismatch");
  SparseHamiltonian out = h;
  const int L = basis.sites();
  for (std::size_t k = 0; k < h.dim; ++k) {
    const Determinant& d = basis.state(k);
    for (int j = 0; j < L; ++j)
      if (double v = delta.delta_v[j]; v != 0.0)
        out.diagonal[k] += v * site_occupation(d, j);
  }
  return out;
}

}  // namespace sitwork
