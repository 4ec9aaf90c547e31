#pragma once

#include <cstdint>
#include <vector>

#include "sitwork/basis.hpp"

namespace sitwork {

enum class Boundary { Open, Periodic };

/// Chain geometry and couplings, in units of the hopping energy J.
struct LatticeSpec {
  int L = 8;
  double J = 1.0;   // hopping, J > 0
  double U = -5.0;  // on-site interaction, U < 0 in the attractive regime
  Boundary boundary = Boundary::Open;

  void validate() const;
};

/// A set of point-like impurities of common strength V.
struct ImpurityConfig {
  std::vector<int> sites;  // strictly increasing, all in [0, L)
  double strength = 0.0;   // V, in units of J

  int n_impurities() const { return static_cast<int>(sites.size()); }
  double concentration(int L) const { return 100.0 * sites.size() / L; }
  std::uint32_t site_mask() const;
  void validate(int L) const;
};

/// Per-site potential difference of a quench, delta_v[j] = V_j^f - V_j^0.
struct PotentialDelta {
  std::vector<double> delta_v;
};

PotentialDelta potential_delta(const ImpurityConfig& initial,
                               const ImpurityConfig& final_config, int L);

/// Per-site potential vector of a single configuration.
std::vector<double> site_potential(const ImpurityConfig& config, int L);

/// Symmetric sparse sector Hamiltonian: off-diagonal hops stored once with
/// row < col (the transpose entry is implied), interaction and potential on
/// the diagonal.
struct SparseHamiltonian {
  struct Entry {
    std::int32_t row;
    std::int32_t col;
    double value;
  };

  std::size_t dim = 0;
  std::vector<double> diagonal;
  std::vector<Entry> off;  // sorted by (row, col), row < col

  /// y = H x.
  void apply(const double* x, double* y) const;
  std::vector<double> apply(const std::vector<double>& x) const;

  /// Column-major dense copy (for LAPACK).
  std::vector<double> to_dense() const;

  /// Gershgorin bounds [lo, hi] on the spectrum.
  void spectral_bounds(double& lo, double& hi) const;
};

SparseHamiltonian build_hamiltonian(const LatticeSpec& spec,
                                    const ImpurityConfig& config,
                                    const SectorBasis& basis);

/// Same, for an arbitrary per-site potential vector.
SparseHamiltonian build_hamiltonian(const LatticeSpec& spec,
                                    const std::vector<double>& potential,
                                    const SectorBasis& basis);

/// H + diag(sum_j delta_v[j] n_j): the post-quench Hamiltonian.
SparseHamiltonian with_delta(const SparseHamiltonian& h,
                             const PotentialDelta& delta,
                             const SectorBasis& basis);

/// Total occupation of site j in determinant d (0, 1 or 2).
inline int site_occupation(const Determinant& d, int j) {
  return static_cast<int>(d.up >> j & 1u) + static_cast<int>(d.dn >> j & 1u);
}

}  // namespace sitwork
