#pragma once

#include <vector>

#include "sitwork/basis.hpp"
#include "sitwork/hamiltonian.hpp"
#include "sitwork/spectra.hpp"

namespace sitwork {

/// Everything a sweep needs from one disorder profile at one temperature,
/// reduced to site-indexed tables. Pair statistics then cost O(L^3) via the
/// trace formulas:
///   <W>    = sum_j dv_j d1[j]
///   <W^2>  = sum_jl dv_j dv_l d2[j,l]
///   <W^3>c = sum_jlm dv.. d3[j,l,m]                     (correlator route)
///   delta3 = sum_jl dv_j dv_l (x[j,l] - y[j,l])
/// with x[j,l] = Tr[rho n_j K n_l], y[j,l] = Tr[rho K n_j n_l] and K the
/// hopping part of H_0 (its diagonal part commutes with D and drops out).
/// The TPM third central moment is mu3_corr + delta3, an exact identity for
/// rho_0 diagonal in the H_0 eigenbasis.
struct ProfileTables {
  int L = 0;
  double temperature = 0.0;
  std::vector<double> d1;       // L
  std::vector<double> d2;       // L*L
  std::vector<double> d3;       // L*L*L
  std::vector<double> x_cross;  // L*L
  std::vector<double> y_cross;  // L*L
  std::vector<double> site_entropy;  // L, single-site linear entropies
  double lin_entropy = 0.0;          // site average
  double ground_energy = 0.0;        // T=0 only
  int ground_degeneracy = 0;         // T=0 only
  double log_z = 0.0;                // T>0 only

  std::size_t byte_size() const;
};

/// Per-pair statistics evaluated from the tables.
struct PairMoments {
  double mean = 0.0;
  double variance = 0.0;
  double mu3_corr = 0.0;
  double delta3 = 0.0;
  double mu3 = 0.0;  // TPM value: mu3_corr + delta3
};

PairMoments pair_moments(const ProfileTables& tables,
                         const PotentialDelta& delta);

/// Tables for the ground-state manifold (uniform mixture over the
/// degenerate cluster within degeneracy_tol).
ProfileTables ground_tables(const SparseHamiltonian& h,
                            const SectorBasis& basis,
                            double degeneracy_tol = 1e-8);

/// Tables for the Gibbs state exp(-H/T)/Z, evaluated by a Chebyshev
/// expansion of the matrix exponential over the Gershgorin interval;
/// exact to machine precision, no eigendecomposition.
ProfileTables gibbs_tables(const SparseHamiltonian& h, const SectorBasis& basis,
                           double temperature);

/// Tables from explicit occupation weights and pattern entries of rho on the
/// stored off-diagonal structure of h (rho_pattern[i] = rho[off[i].row,
/// off[i].col]). Shared backend of the two builders above, public for tests.
ProfileTables tables_from_state(const SparseHamiltonian& h,
                                const SectorBasis& basis,
                                const std::vector<double>& occ_weights,
                                const std::vector<double>& rho_pattern,
                                double temperature);

/// Site-reversal j -> L-1-j of all tables; exact unitary equivalence of the
/// chain, used to canonicalize disorder profiles.
ProfileTables reflect_tables(const ProfileTables& tables);

/// True if reverse(potential) precedes potential lexicographically, i.e. the
/// canonical representative is the reflected profile.
bool reflection_is_canonical(const std::vector<double>& potential);

}  // namespace sitwork
