#include "sitwork/workstats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <cblas.h>

#include "sitwork/observables.hpp"

namespace sitwork {

namespace {

constexpr double kPairCutoff = 1e-16;

void check_same_space(const EigenSystem& a, const EigenSystem& b) {
  if (a.dim != b.dim)
    throw std::invalid_argument("eigensystems act on different bases");
}

}  // namespace

WorkDistribution tpm_distribution(const EigenSystem& initial,
                                  const EigenSystem& final_eig,
                                  const ThermalWeights& weights,
                                  double merge_tol) {
  check_same_space(initial, final_eig);
  const std::size_t dim = initial.dim;
  const std::size_t ns = weights.support.size();

  WorkDistribution out;
  out.merge_tol = merge_tol;
  out.truncation_mass = weights.truncation_mass;
  if (ns == 0) return out;

  // Overlap matrix C(m, n) = <m(final)|n(initial)> for populated n.
  std::vector<double> initial_cols(dim * ns);
  for (std::size_t i = 0; i < ns; ++i) {
    const auto v = initial.vector(weights.support[i]);
    std::copy(v.begin(), v.end(), initial_cols.begin() + i * dim);
  }
  std::vector<double> overlaps(dim * ns);
  cblas_dgemm(CblasColMajor, CblasTrans, CblasNoTrans,
              static_cast<int>(dim), static_cast<int>(ns),
              static_cast<int>(dim), 1.0, final_eig.vectors.data(),
              static_cast<int>(dim), initial_cols.data(),
              static_cast<int>(dim), 0.0, overlaps.data(),
              static_cast<int>(dim));

  std::vector<std::pair<double, double>> points;
  points.reserve(dim * ns);
  for (std::size_t i = 0; i < ns; ++i) {
    const double pn = weights.p[weights.support[i]];
    const double en = initial.values[weights.support[i]];
    const double* c = overlaps.data() + i * dim;
    for (std::size_t m = 0; m < dim; ++m) {
      const double prob = pn * c[m] * c[m];
      if (prob < kPairCutoff) {
        out.truncation_mass += prob;
        continue;
      }
      points.emplace_back(final_eig.values[m] - en, prob);
    }
  }
  std::sort(points.begin(), points.end());

  for (const auto& [w, p] : points) {
    if (!out.w.empty() && w - out.w.back() <= merge_tol) {
      const double ptot = out.p.back() + p;
      out.w.back() = (out.w.back() * out.p.back() + w * p) / ptot;
      out.p.back() = ptot;
    } else {
      out.w.push_back(w);
      out.p.push_back(p);
    }
  }
  return out;
}

MomentSet spectral_moments(const EigenSystem& initial,
                           const ThermalWeights& weights,
                           const SparseHamiltonian& h_final, int max_order) {
  if (initial.dim != h_final.dim)
    throw std::invalid_argument("spectral_moments: basis mismatch");
  if (max_order < 1 || max_order > 4)
    throw std::invalid_argument("spectral_moments: max_order must be 1..4");

  const std::size_t dim = initial.dim;
  std::vector<double> y1(dim), y2(dim);
  double raw1 = 0, raw2 = 0, raw3 = 0, raw4 = 0;
  for (int n : weights.support) {
    const double p = weights.p[n];
    const double e = initial.values[n];
    const auto v = initial.vector(n);
    h_final.apply(v.data(), y1.data());
    double h1 = 0, h2 = 0, h3 = 0, h4 = 0;
    for (std::size_t k = 0; k < dim; ++k) h1 += v[k] * y1[k];
    if (max_order >= 2)
      for (std::size_t k = 0; k < dim; ++k) h2 += y1[k] * y1[k];
    if (max_order >= 3) {
      h_final.apply(y1.data(), y2.data());
      for (std::size_t k = 0; k < dim; ++k) h3 += y1[k] * y2[k];
      if (max_order >= 4)
        for (std::size_t k = 0; k < dim; ++k) h4 += y2[k] * y2[k];
    }
    raw1 += p * (h1 - e);
    if (max_order >= 2) raw2 += p * (h2 - 2 * e * h1 + e * e);
    if (max_order >= 3)
      raw3 += p * (h3 - 3 * e * h2 + 3 * e * e * h1 - e * e * e);
    if (max_order >= 4)
      raw4 += p * (h4 - 4 * e * h3 + 6 * e * e * h2 - 4 * e * e * e * h1 +
                   e * e * e * e);
  }

  MomentSet m;
  m.mean = raw1;
  m.raw2 = raw2;
  m.raw3 = raw3;
  m.raw4 = raw4;
  if (max_order >= 2) m.variance = raw2 - raw1 * raw1;
  if (max_order >= 3)
    m.mu3 = raw3 - 3 * raw1 * raw2 + 2 * raw1 * raw1 * raw1;
  if (max_order >= 4)
    m.mu4 = raw4 - 4 * raw1 * raw3 + 6 * raw1 * raw1 * raw2 -
            3 * raw1 * raw1 * raw1 * raw1;
  return m;
}

MomentSet moments_from_distribution(const WorkDistribution& dist) {
  MomentSet m;
  for (std::size_t i = 0; i < dist.w.size(); ++i) {
    const double w = dist.w[i], p = dist.p[i];
    m.mean += p * w;
    m.raw2 += p * w * w;
    m.raw3 += p * w * w * w;
    m.raw4 += p * w * w * w * w;
  }
  m.variance = m.raw2 - m.mean * m.mean;
  m.mu3 = m.raw3 - 3 * m.mean * m.raw2 + 2 * std::pow(m.mean, 3);
  m.mu4 = m.raw4 - 4 * m.mean * m.raw3 + 6 * m.mean * m.mean * m.raw2 -
          3 * std::pow(m.mean, 4);
  return m;
}

double correlator_mean(const ThermalWeights& weights,
                       const EigenSystem& initial, const PotentialDelta& delta,
                       const SectorBasis& basis) {
  const auto w = occupation_weights(initial, weights);
  const auto n = density_profile(w, basis);
  double mean = 0.0;
  for (int j = 0; j < basis.sites(); ++j) mean += delta.delta_v[j] * n[j];
  return mean;
}

double correlator_variance(const ThermalWeights& weights,
                           const EigenSystem& initial,
                           const PotentialDelta& delta,
                           const SectorBasis& basis) {
  const auto w = occupation_weights(initial, weights);
  return diagonal_central_moment(w, basis, delta.delta_v, 2);
}

double correlator_mu3(const ThermalWeights& weights,
                      const EigenSystem& initial, const PotentialDelta& delta,
                      const SectorBasis& basis) {
  const auto w = occupation_weights(initial, weights);
  return diagonal_central_moment(w, basis, delta.delta_v, 3);
}

Mu3Discrepancy mu3_discrepancy(const SparseHamiltonian& h_initial,
                               const EigenSystem& initial,
                               const ThermalWeights& weights,
                               const PotentialDelta& delta,
                               const SectorBasis& basis) {
  const SparseHamiltonian h_final = with_delta(h_initial, delta, basis);
  const MomentSet spectral = spectral_moments(initial, weights, h_final, 3);
  const double corr = correlator_mu3(weights, initial, delta, basis);

  // Per-determinant diagonal of D = H_f - H_0.
  const std::size_t dim = basis.dim();
  std::vector<double> d(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    const Determinant& det = basis.state(k);
    double dk = 0.0;
    for (int j = 0; j < basis.sites(); ++j)
      if (delta.delta_v[j] != 0.0)
        dk += delta.delta_v[j] * site_occupation(det, j);
    d[k] = dk;
  }

  // Tr[rho (D H0 D - H0 D^2)] = sum_n p_n (<Dv|H0|Dv> - eps_n <v|D^2|v>).
  double identity = 0.0;
  std::vector<double> dv(dim), y(dim);
  for (int n : weights.support) {
    const auto v = initial.vector(n);
    double d2 = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      dv[k] = d[k] * v[k];
      d2 += dv[k] * dv[k];
    }
    h_initial.apply(dv.data(), y.data());
    double dhd = 0.0;
    for (std::size_t k = 0; k < dim; ++k) dhd += dv[k] * y[k];
    identity += weights.p[n] * (dhd - initial.values[n] * d2);
  }

  return {spectral.mu3 - corr, identity};
}

double jarzynski_residual(const WorkDistribution& dist, double temperature,
                          double log_z_initial, double log_z_final) {
  if (temperature <= 0)
    throw std::invalid_argument("jarzynski_residual: requires T > 0");
  std::vector<double> terms(dist.w.size());
  for (std::size_t i = 0; i < terms.size(); ++i)
    terms[i] = std::log(dist.p[i]) - dist.w[i] / temperature;
  const double lhs = log_sum_exp(terms);
  return std::abs(std::exp(lhs) - std::exp(log_z_final - log_z_initial));
}

void write_distribution_csv(const WorkDistribution& dist,
                            const std::string& path,
                            const std::string& header_comment) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  if (!header_comment.empty()) out << header_comment;
  out << "w,p\n";
  char buf[80];
  for (std::size_t i = 0; i < dist.w.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", dist.w[i], dist.p[i]);
    out << buf;
  }
}

}  // namespace sitwork
