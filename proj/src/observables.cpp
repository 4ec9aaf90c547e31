#include "sitwork/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace sitwork {

std::vector<double> occupation_weights(const EigenSystem& eig,
                                       const ThermalWeights& weights) {
  std::vector<double> w(eig.dim, 0.0);
  for (int n : weights.support) {
    const double p = weights.p[n];
    const auto v = eig.vector(n);
    for (std::size_t k = 0; k < eig.dim; ++k) w[k] += p * v[k] * v[k];
  }
  return w;
}

std::vector<double> occupation_weights(std::span<const double> amplitudes) {
  std::vector<double> w(amplitudes.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = amplitudes[k] * amplitudes[k];
  return w;
}

std::vector<double> density_profile(std::span<const double> occ_weights,
                                    const SectorBasis& basis) {
  const int L = basis.sites();
  std::vector<double> n(L, 0.0);
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const double w = occ_weights[k];
    if (w == 0.0) continue;
    const Determinant& d = basis.state(k);
    for (int j = 0; j < L; ++j) n[j] += w * site_occupation(d, j);
  }
  return n;
}

CorrelatorTables density_correlators(std::span<const double> occ_weights,
                                     const SectorBasis& basis, int order) {
  if (order < 1 || order > 3)
    throw std::invalid_argument("density_correlators: order must be 1..3");
  const int L = basis.sites();
  CorrelatorTables t;
  t.d1.assign(L, 0.0);
  if (order >= 2) t.d2.assign(static_cast<std::size_t>(L) * L, 0.0);
  if (order >= 3) t.d3.assign(static_cast<std::size_t>(L) * L * L, 0.0);
  std::vector<double> occ(L);
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const double w = occ_weights[k];
    if (w == 0.0) continue;
    const Determinant& d = basis.state(k);
    for (int j = 0; j < L; ++j) occ[j] = site_occupation(d, j);
    for (int j = 0; j < L; ++j) {
      const double wj = w * occ[j];
      if (wj == 0.0) continue;
      t.d1[j] += wj;
      if (order < 2) continue;
      for (int l = 0; l < L; ++l) {
        const double wjl = wj * occ[l];
        if (wjl == 0.0) continue;
        t.d2[j * L + l] += wjl;
        if (order < 3) continue;
        for (int m = 0; m < L; ++m)
          t.d3[(static_cast<std::size_t>(j) * L + l) * L + m] += wjl * occ[m];
      }
    }
  }
  return t;
}

SiteRDM site_rdm(std::span<const double> occ_weights, const SectorBasis& basis,
                 int site) {
  if (site < 0 || site >= basis.sites())
    throw std::invalid_argument("site_rdm: site out of range");
  double n_up = 0, n_dn = 0, n_double = 0;
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const double w = occ_weights[k];
    if (w == 0.0) continue;
    const Determinant& d = basis.state(k);
    const bool u = d.up >> site & 1u;
    const bool v = d.dn >> site & 1u;
    if (u) n_up += w;
    if (v) n_dn += w;
    if (u && v) n_double += w;
  }
  SiteRDM r;
  r.p_double = n_double;
  r.p_up = n_up - n_double;
  r.p_dn = n_dn - n_double;
  r.p_empty = 1.0 - r.p_up - r.p_dn - r.p_double;
  return r;
}

EntanglementResult entanglement_average(std::span<const double> occ_weights,
                                        const SectorBasis& basis) {
  const int L = basis.sites();
  EntanglementResult res;
  res.per_site.resize(L);
  for (int j = 0; j < L; ++j) {
    res.per_site[j] = site_rdm(occ_weights, basis, j).linear_entropy();
    res.site_average += res.per_site[j] / L;
  }
  return res;
}

double diagonal_central_moment(std::span<const double> occ_weights,
                               const SectorBasis& basis,
                               std::span<const double> delta, int order) {
  const int L = basis.sites();
  std::vector<double> d(basis.dim(), 0.0);
  double mean = 0.0;
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const Determinant& det = basis.state(k);
    double dk = 0.0;
    for (int j = 0; j < L; ++j)
      if (delta[j] != 0.0) dk += delta[j] * site_occupation(det, j);
    d[k] = dk;
    mean += occ_weights[k] * dk;
  }
  if (order == 1) return mean;
  double acc = 0.0;
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    if (occ_weights[k] == 0.0) continue;
    acc += occ_weights[k] * std::pow(d[k] - mean, order);
  }
  return acc;
}

}  // namespace sitwork
