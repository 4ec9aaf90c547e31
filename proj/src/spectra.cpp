#include "sitwork/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <lapacke.h>

namespace sitwork {

EigenSystem diagonalize(const SparseHamiltonian& h, std::size_t dense_limit) {
  if (h.dim > dense_limit)
    throw capacity_error("diagonalize: dim " + std::to_string(h.dim) +
                         " exceeds dense limit " + std::to_string(dense_limit));
  EigenSystem eig;
  eig.dim = h.dim;
  eig.vectors = h.to_dense();
  eig.values.resize(h.dim);
  const lapack_int n = static_cast<lapack_int>(h.dim);
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                         eig.vectors.data(), n,
                                         eig.values.data());
  if (info != 0)
    throw std::runtime_error("diagonalize: dsyevd failed, info=" +
                             std::to_string(info));
  return eig;
}

GroundCluster diagonalize_lowest(const SparseHamiltonian& h,
                                 double degeneracy_tol,
                                 std::size_t dense_limit) {
  if (h.dim > dense_limit)
    throw capacity_error("diagonalize_lowest: dim exceeds dense limit");
  const lapack_int n = static_cast<lapack_int>(h.dim);
  std::size_t want = std::min<std::size_t>(8, h.dim);
  while (true) {
    std::vector<double> a = h.to_dense();
    std::vector<double> w(h.dim);
    std::vector<double> z(h.dim * want);
    std::vector<lapack_int> isuppz(2 * want);
    lapack_int m = 0;
    const lapack_int info = LAPACKE_dsyevr(
        LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n, 0.0, 0.0, 1,
        static_cast<lapack_int>(want), 0.0, &m, w.data(), z.data(), n,
        isuppz.data());
    if (info != 0)
      throw std::runtime_error("diagonalize_lowest: dsyevr failed, info=" +
                               std::to_string(info));
    std::size_t deg = 1;
    while (deg < static_cast<std::size_t>(m) && w[deg] - w[0] <= degeneracy_tol)
      ++deg;
    if (deg < static_cast<std::size_t>(m) || want == h.dim) {
      GroundCluster out;
      out.dim = h.dim;
      out.degeneracy = deg;
      out.values.assign(w.begin(), w.begin() + m);
      z.resize(h.dim * m);
      out.vectors = std::move(z);
      return out;
    }
    // Cluster may extend past the computed window; widen it.
    want = std::min<std::size_t>(h.dim, want * 4);
  }
}

double log_sum_exp(std::span<const double> x) {
  if (x.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(x.begin(), x.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : x) s += std::exp(v - m);
  return m + std::log(s);
}

ThermalWeights thermal_weights(const EigenSystem& eig, double temperature,
                               double cutoff, double degeneracy_tol) {
  if (temperature < 0)
    throw std::invalid_argument("thermal_weights: negative temperature");
  if (cutoff < 0 || cutoff > 1e-6)
    throw std::invalid_argument("thermal_weights: cutoff outside [0, 1e-6]");
  ThermalWeights tw;
  tw.temperature = temperature;
  const std::size_t n = eig.values.size();
  tw.p.assign(n, 0.0);
  if (n == 0) return tw;
  const double e0 = eig.values[0];

  if (temperature == 0.0) {
    std::size_t deg = 1;
    while (deg < n && eig.values[deg] - e0 <= degeneracy_tol) ++deg;
    for (std::size_t i = 0; i < deg; ++i) tw.p[i] = 1.0 / deg;
    tw.log_z = 0.0;
  } else {
    const double beta = 1.0 / temperature;
    // Ground-state energy subtracted before exponentiation.
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) z += std::exp(-beta * (eig.values[i] - e0));
    for (std::size_t i = 0; i < n; ++i)
      tw.p[i] = std::exp(-beta * (eig.values[i] - e0)) / z;
    tw.log_z = std::log(z) - beta * e0;
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (tw.p[i] >= cutoff && tw.p[i] > 0.0)
      tw.support.push_back(static_cast<int>(i));
    else
      tw.truncation_mass += tw.p[i];
  }
  return tw;
}

}  // namespace sitwork
