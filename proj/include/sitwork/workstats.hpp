#pragma once

#include <span>
#include <vector>

#include "sitwork/basis.hpp"
#include "sitwork/hamiltonian.hpp"
#include "sitwork/spectra.hpp"

namespace sitwork {

/// Two-point-measurement work distribution of a sudden quench: support
/// points (w, p) with w strictly increasing, entries closer than merge_tol
/// merged by probability-weighted mean.
struct WorkDistribution {
  std::vector<double> w;
  std::vector<double> p;
  double merge_tol = 1e-9;
  double truncation_mass = 0.0;
};

WorkDistribution tpm_distribution(const EigenSystem& initial,
                                  const EigenSystem& final_eig,
                                  const ThermalWeights& weights,
                                  double merge_tol = 1e-9);

/// First three raw and central moments of the work distribution.
/// mu3 is the third central moment itself (energy cubed), not the
/// standardized skewness ratio.
struct MomentSet {
  double mean = 0.0;
  double variance = 0.0;
  double mu3 = 0.0;
  double raw2 = 0.0;
  double raw3 = 0.0;
  double raw4 = 0.0;  // populated for max_order >= 4
  double mu4 = 0.0;
};

/// Moments via the spectral route, without forming the distribution:
/// <W^k> = sum_n p_n sum_j C(k,j) (-1)^(k-j) eps_n^(k-j) <n|H_f^j|n>,
/// evaluated by sparse applications of H_f to each populated eigenstate.
MomentSet spectral_moments(const EigenSystem& initial,
                           const ThermalWeights& weights,
                           const SparseHamiltonian& h_final,
                           int max_order = 3);

/// Moments summed directly from a distribution (test/diagnostic oracle).
MomentSet moments_from_distribution(const WorkDistribution& dist);

/// Correlator (density-fluctuation) route for the first three moments.
double correlator_mean(const ThermalWeights& weights, const EigenSystem& initial,
                       const PotentialDelta& delta, const SectorBasis& basis);
double correlator_variance(const ThermalWeights& weights,
                           const EigenSystem& initial,
                           const PotentialDelta& delta,
                           const SectorBasis& basis);
double correlator_mu3(const ThermalWeights& weights, const EigenSystem& initial,
                      const PotentialDelta& delta, const SectorBasis& basis);

/// delta3 = mu3(TPM spectral) - mu3(correlator route), together with the
/// closed-form value Tr[rho_0 (D H_0 D - H_0 D^2)], D = H_f - H_0, which is
/// exact whenever rho_0 commutes with H_0.
struct Mu3Discrepancy {
  double value = 0.0;     // spectral minus correlator
  double identity = 0.0;  // Tr[rho (D H0 D - H0 D^2)]
};

Mu3Discrepancy mu3_discrepancy(const SparseHamiltonian& h_initial,
                               const EigenSystem& initial,
                               const ThermalWeights& weights,
                               const PotentialDelta& delta,
                               const SectorBasis& basis);

/// |<exp(-W/T)> - Z_f/Z_0|, computed from the full distribution; an exact
/// property of TPM statistics at T > 0.
double jarzynski_residual(const WorkDistribution& dist, double temperature,
                          double log_z_initial, double log_z_final);

/// CSV export, header `w,p`, one row per support point, ascending.
void write_distribution_csv(const WorkDistribution& dist,
                            const std::string& path,
                            const std::string& header_comment = {});

}  // namespace sitwork
