#pragma once

#include <span>
#include <vector>

#include "sitwork/basis.hpp"
#include "sitwork/hamiltonian.hpp"
#include "sitwork/spectra.hpp"

namespace sitwork {

/// Probability of each determinant in a state or ensemble. Every observable
/// in this module is diagonal in the occupation basis, so this vector is all
/// that is needed.
std::vector<double> occupation_weights(const EigenSystem& eig,
                                       const ThermalWeights& weights);
std::vector<double> occupation_weights(std::span<const double> amplitudes);

/// Per-site total densities <n_j>.
std::vector<double> density_profile(std::span<const double> occ_weights,
                                    const SectorBasis& basis);

/// Density correlators up to the requested order (1..3); tables are
/// symmetric under index permutation. d2 is L*L row-major, d3 is L*L*L.
struct CorrelatorTables {
  std::vector<double> d1;
  std::vector<double> d2;
  std::vector<double> d3;
};

CorrelatorTables density_correlators(std::span<const double> occ_weights,
                                     const SectorBasis& basis, int order = 3);

/// Single-site reduced density matrix. Diagonal in the local basis
/// {empty, up, dn, doubly occupied} by particle-number superselection.
struct SiteRDM {
  double p_empty = 0;
  double p_up = 0;
  double p_dn = 0;
  double p_double = 0;

  double linear_entropy() const {
    return 1.0 - (p_empty * p_empty + p_up * p_up + p_dn * p_dn +
                  p_double * p_double);
  }
};

SiteRDM site_rdm(std::span<const double> occ_weights, const SectorBasis& basis,
                 int site);

/// Site-averaged single-site linear entropy.
struct EntanglementResult {
  std::vector<double> per_site;
  double site_average = 0.0;
};

EntanglementResult entanglement_average(std::span<const double> occ_weights,
                                        const SectorBasis& basis);

/// Central moment sum_k w_k (d_k - mean)^order of a diagonal operator given
/// by per-site coefficients delta (d_k = sum_j delta[j] n_j(k)). Centered
/// accumulation, exact zero for single-determinant states.
double diagonal_central_moment(std::span<const double> occ_weights,
                               const SectorBasis& basis,
                               std::span<const double> delta, int order);

}  // namespace sitwork
