#pragma once

#include <span>
#include <vector>

#include "sitwork/basis.hpp"
#include "sitwork/hamiltonian.hpp"
#include "sitwork/workstats.hpp"

namespace sitwork {

/// The fully localized product state: every impurity site doubly occupied,
/// every other site empty. A single determinant of the (N_i, N_i) sector;
/// the exact ground state in the strong-disorder limit.
struct CriticalState {
  ImpurityConfig config;
  std::size_t basis_index = 0;

  std::vector<double> amplitudes(const SectorBasis& basis) const;
};

CriticalState build_critical_state(const ImpurityConfig& config,
                                   const SectorBasis& basis);

/// |<prod_i n_i> - prod_i <n_i>| over the given site subset; exactly zero
/// for the factorized critical state.
double verify_factorization(const CriticalState& state,
                            std::span<const int> subset,
                            const SectorBasis& basis);

/// Closed-form moments for a quench applied to the critical state:
/// mean = 2 * sum of delta_v over the (doubly occupied) initial impurity
/// sites; all central moments vanish.
MomentSet critical_moment_oracle(const ImpurityConfig& initial,
                                 const PotentialDelta& delta);

}  // namespace sitwork
