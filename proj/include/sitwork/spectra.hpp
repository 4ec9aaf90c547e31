#pragma once

#include <span>
#include <vector>

#include "sitwork/hamiltonian.hpp"

namespace sitwork {

/// Full spectrum of a symmetric sector Hamiltonian. Eigenvalues ascending,
/// eigenvectors column-major: vector k occupies vectors[k*dim .. k*dim+dim).
struct EigenSystem {
  std::size_t dim = 0;
  std::vector<double> values;
  std::vector<double> vectors;

  std::span<const double> vector(std::size_t k) const {
    return {vectors.data() + k * dim, dim};
  }
};

/// Dense symmetric eigendecomposition (LAPACK dsyevd).
/// Throws capacity_error above dense_limit, std::runtime_error on
/// solver failure.
EigenSystem diagonalize(const SparseHamiltonian& h,
                        std::size_t dense_limit = 6000);

/// The lowest eigenvalues/eigenvectors covering the ground-state degenerate
/// manifold: all returned values with values[i] <= values[0] + degeneracy_tol
/// form a complete cluster (strictly separated from the next level).
struct GroundCluster {
  std::size_t dim = 0;
  std::size_t degeneracy = 0;  // states within degeneracy_tol of the bottom
  std::vector<double> values;  // lowest computed eigenvalues (>= degeneracy)
  std::vector<double> vectors; // column-major, one column per computed value

  std::span<const double> vector(std::size_t k) const {
    return {vectors.data() + k * dim, dim};
  }
};

GroundCluster diagonalize_lowest(const SparseHamiltonian& h,
                                 double degeneracy_tol = 1e-8,
                                 std::size_t dense_limit = 6000);

/// Initial-ensemble probabilities over the eigenstates of an EigenSystem.
/// Gibbs weights p_n = exp(-eps_n/T)/Z with k_B = 1 in units of J; at T = 0 a
/// uniform mixture over the degenerate ground manifold.
struct ThermalWeights {
  double temperature = 0.0;
  std::vector<double> p;        // full-length, not renormalized after cutoff
  std::vector<int> support;     // indices with p >= cutoff
  double truncation_mass = 0.0; // sum of excluded p
  double log_z = 0.0;           // log partition function (0 at T = 0)
};

ThermalWeights thermal_weights(const EigenSystem& eig, double temperature,
                               double cutoff = 1e-12,
                               double degeneracy_tol = 1e-8);

/// log(sum exp(x_i)) with max-shift; used by thermal_weights and exposed for
/// the fluctuation-theorem checks.
double log_sum_exp(std::span<const double> x);

}  // namespace sitwork
