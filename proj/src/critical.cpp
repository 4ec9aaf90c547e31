#include "sitwork/critical.hpp"

#include <cmath>
#include <stdexcept>

#include "sitwork/observables.hpp"

namespace sitwork {

std::vector<double> CriticalState::amplitudes(const SectorBasis& basis) const {
  std::vector<double> amp(basis.dim(), 0.0);
  amp[basis_index] = 1.0;
  return amp;
}

CriticalState build_critical_state(const ImpurityConfig& config,
                                   const SectorBasis& basis) {
  config.validate(basis.sites());
  if (config.n_impurities() != basis.n_up() ||
      config.n_impurities() != basis.n_dn())
    throw std::invalid_argument(
        "build_critical_state: impurity count must equal the pair count");
  const std::uint32_t mask = config.site_mask();
  CriticalState state;
  state.config = config;
  state.basis_index = basis.rank({mask, mask});
  return state;
}

double verify_factorization(const CriticalState& state,
                            std::span<const int> subset,
                            const SectorBasis& basis) {
  if (subset.empty())
    throw std::invalid_argument("verify_factorization: empty subset");
  const Determinant& d = basis.state(state.basis_index);
  double joint = 1.0, product = 1.0;
  for (int site : subset) {
    const double n = site_occupation(d, site);
    joint *= n;
    product *= n;  // single determinant: <n_i> = n_i(d) exactly
  }
  return std::abs(joint - product);
}

MomentSet critical_moment_oracle(const ImpurityConfig& initial,
                                 const PotentialDelta& delta) {
  MomentSet m;
  for (int s : initial.sites) m.mean += 2.0 * delta.delta_v[s];
  m.raw2 = m.mean * m.mean;
  m.raw3 = m.mean * m.mean * m.mean;
  m.raw4 = m.raw2 * m.raw2;
  return m;
}

}  // namespace sitwork
