#include "sitwork/profile_tables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sitwork/observables.hpp"

namespace sitwork {

namespace {

struct Csr {
  std::vector<int> row_ptr;
  std::vector<int> cols;
  std::vector<double> vals;
};

// Symmetric expansion of the stored (row < col) hop entries.
Csr build_csr(const SparseHamiltonian& h) {
  const std::size_t dim = h.dim;
  Csr csr;
  csr.row_ptr.assign(dim + 1, 0);
  for (const auto& e : h.off) {
    ++csr.row_ptr[e.row + 1];
    ++csr.row_ptr[e.col + 1];
  }
  for (std::size_t k = 0; k < dim; ++k) csr.row_ptr[k + 1] += csr.row_ptr[k];
  csr.cols.resize(csr.row_ptr[dim]);
  csr.vals.resize(csr.row_ptr[dim]);
  std::vector<int> fill(csr.row_ptr.begin(), csr.row_ptr.end() - 1);
  for (const auto& e : h.off) {
    csr.cols[fill[e.row]] = e.col;
    csr.vals[fill[e.row]++] = e.value;
    csr.cols[fill[e.col]] = e.row;
    csr.vals[fill[e.col]++] = e.value;
  }
  return csr;
}

}  // namespace

std::size_t ProfileTables::byte_size() const {
  return sizeof(ProfileTables) +
         sizeof(double) * (d1.size() + d2.size() + d3.size() + x_cross.size() +
                           y_cross.size() + site_entropy.size());
}

PairMoments pair_moments(const ProfileTables& tables,
                         const PotentialDelta& delta) {
  const int L = tables.L;
  // Only the quench support contributes.
  int sites[32];
  double dv[32];
  int ns = 0;
  for (int j = 0; j < L; ++j)
    if (delta.delta_v[j] != 0.0) {
      sites[ns] = j;
      dv[ns++] = delta.delta_v[j];
    }

  PairMoments pm;
  double raw2 = 0.0, raw3 = 0.0;
  for (int a = 0; a < ns; ++a) {
    const int j = sites[a];
    pm.mean += dv[a] * tables.d1[j];
    for (int b = 0; b < ns; ++b) {
      const int l = sites[b];
      const double dd = dv[a] * dv[b];
      raw2 += dd * tables.d2[j * L + l];
      pm.delta3 += dd * (tables.x_cross[j * L + l] - tables.y_cross[j * L + l]);
      for (int c = 0; c < ns; ++c)
        raw3 += dd * dv[c] *
                tables.d3[(static_cast<std::size_t>(j) * L + l) * L + sites[c]];
    }
  }
  pm.variance = raw2 - pm.mean * pm.mean;
  pm.mu3_corr = raw3 - 3 * pm.mean * raw2 + 2 * pm.mean * pm.mean * pm.mean;
  pm.mu3 = pm.mu3_corr + pm.delta3;
  return pm;
}

ProfileTables tables_from_state(const SparseHamiltonian& h,
                                const SectorBasis& basis,
                                const std::vector<double>& occ_weights,
                                const std::vector<double>& rho_pattern,
                                double temperature) {
  const int L = basis.sites();
  ProfileTables t;
  t.L = L;
  t.temperature = temperature;

  auto corr = density_correlators(occ_weights, basis, 3);
  t.d1 = std::move(corr.d1);
  t.d2 = std::move(corr.d2);
  t.d3 = std::move(corr.d3);

  t.site_entropy.resize(L);
  for (int j = 0; j < L; ++j) {
    t.site_entropy[j] = site_rdm(occ_weights, basis, j).linear_entropy();
    t.lin_entropy += t.site_entropy[j] / L;
  }

  // Cross tables over the hop pattern. For each stored pair (a, b):
  //   x[j,l] += K_ab rho_ab (n_j(a) n_l(b) + n_j(b) n_l(a))
  //   y[j,l] += K_ab rho_ab (n_j(a) n_l(a) + n_j(b) n_l(b))
  t.x_cross.assign(static_cast<std::size_t>(L) * L, 0.0);
  t.y_cross.assign(static_cast<std::size_t>(L) * L, 0.0);
  int occ_a[32], occ_b[32];
  for (std::size_t i = 0; i < h.off.size(); ++i) {
    const double kr = h.off[i].value * rho_pattern[i];
    if (kr == 0.0) continue;
    const Determinant& da = basis.state(h.off[i].row);
    const Determinant& db = basis.state(h.off[i].col);
    for (int j = 0; j < L; ++j) {
      occ_a[j] = site_occupation(da, j);
      occ_b[j] = site_occupation(db, j);
    }
    for (int j = 0; j < L; ++j) {
      if (occ_a[j] == 0 && occ_b[j] == 0) continue;
      for (int l = 0; l < L; ++l) {
        t.x_cross[j * L + l] +=
            kr * (occ_a[j] * occ_b[l] + occ_b[j] * occ_a[l]);
        t.y_cross[j * L + l] +=
            kr * (occ_a[j] * occ_a[l] + occ_b[j] * occ_b[l]);
      }
    }
  }
  return t;
}

ProfileTables ground_tables(const SparseHamiltonian& h,
                            const SectorBasis& basis, double degeneracy_tol) {
  const GroundCluster cluster = diagonalize_lowest(h, degeneracy_tol);
  const std::size_t g = cluster.degeneracy;
  const std::size_t dim = h.dim;

  std::vector<double> w(dim, 0.0);
  for (std::size_t n = 0; n < g; ++n) {
    const auto v = cluster.vector(n);
    for (std::size_t k = 0; k < dim; ++k) w[k] += v[k] * v[k] / g;
  }
  std::vector<double> pattern(h.off.size(), 0.0);
  for (std::size_t n = 0; n < g; ++n) {
    const auto v = cluster.vector(n);
    for (std::size_t i = 0; i < h.off.size(); ++i)
      pattern[i] += v[h.off[i].row] * v[h.off[i].col] / g;
  }

  ProfileTables t = tables_from_state(h, basis, w, pattern, 0.0);
  t.ground_energy = cluster.values.empty() ? 0.0 : cluster.values[0];
  t.ground_degeneracy = static_cast<int>(g);
  return t;
}

ProfileTables gibbs_tables(const SparseHamiltonian& h, const SectorBasis& basis,
                           double temperature) {
  if (!(temperature > 0))
    throw std::invalid_argument("gibbs_tables: requires T > 0");
  const std::size_t dim = h.dim;
  const double beta = 1.0 / temperature;

  double lo, hi;
  h.spectral_bounds(lo, hi);
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double s = beta * half;

  if (s > 500.0) {
    // Too cold for the polynomial route; fall back to the eigensystem.
    const EigenSystem eig = diagonalize(h);
    const ThermalWeights tw = thermal_weights(eig, temperature);
    const auto w = occupation_weights(eig, tw);
    std::vector<double> pattern(h.off.size(), 0.0);
    for (int n : tw.support) {
      const auto v = eig.vector(n);
      for (std::size_t i = 0; i < h.off.size(); ++i)
        pattern[i] += tw.p[n] * v[h.off[i].row] * v[h.off[i].col];
    }
    ProfileTables t = tables_from_state(h, basis, w, pattern, temperature);
    t.log_z = tw.log_z;
    return t;
  }

  // exp(-s t) on t in [-1,1]: I_0(s) + 2 sum_k (-1)^k I_k(s) T_k(t).
  std::vector<double> coeff;
  coeff.push_back(std::cyl_bessel_i(0.0, s));
  const double tiny = coeff[0] * 1e-18 + 1e-300;
  for (int k = 1; k < 2048; ++k) {
    const double ik = std::cyl_bessel_i(static_cast<double>(k), s);
    coeff.push_back((k % 2 ? -2.0 : 2.0) * ik);
    if (ik < tiny && k > s) break;
  }

  const Csr csr = build_csr(h);
  std::vector<double> shifted_diag(dim);
  for (std::size_t k = 0; k < dim; ++k)
    shifted_diag[k] = (h.diagonal[k] - center) / half;
  const double inv_half = 1.0 / half;

  // row -> first stored off-pattern slot (off sorted by row).
  std::vector<std::size_t> off_begin(dim + 1, h.off.size());
  for (std::size_t i = h.off.size(); i-- > 0;)
    off_begin[h.off[i].row] = i;
  for (std::size_t k = dim; k-- > 0;)
    if (off_begin[k] > off_begin[k + 1]) off_begin[k] = off_begin[k + 1];

  std::vector<double> w(dim), pattern(h.off.size());
  std::vector<double> t0(dim), t1(dim), t2(dim), y(dim);
  const auto apply_scaled = [&](const double* x, double* out) {
    for (std::size_t k = 0; k < dim; ++k) out[k] = shifted_diag[k] * x[k];
    for (std::size_t k = 0; k < dim; ++k) {
      double acc = 0.0;
      for (int idx = csr.row_ptr[k]; idx < csr.row_ptr[k + 1]; ++idx)
        acc += csr.vals[idx] * x[csr.cols[idx]];
      out[k] += acc * inv_half;
    }
  };

  for (std::size_t col = 0; col < dim; ++col) {
    std::fill(t0.begin(), t0.end(), 0.0);
    t0[col] = 1.0;
    apply_scaled(t0.data(), t1.data());
    for (std::size_t k = 0; k < dim; ++k)
      y[k] = coeff[0] * t0[k] + coeff[1] * t1[k];
    for (std::size_t j = 2; j < coeff.size(); ++j) {
      apply_scaled(t1.data(), t2.data());
      for (std::size_t k = 0; k < dim; ++k) {
        t2[k] = 2.0 * t2[k] - t0[k];
        y[k] += coeff[j] * t2[k];
      }
      std::swap(t0, t1);
      std::swap(t1, t2);
    }
    w[col] = y[col];
    for (std::size_t i = off_begin[col]; i < off_begin[col + 1]; ++i)
      pattern[i] = y[h.off[i].col];
  }

  double trace = 0.0;
  for (double v : w) trace += v;
  for (double& v : w) v /= trace;
  for (double& v : pattern) v /= trace;

  ProfileTables t = tables_from_state(h, basis, w, pattern, temperature);
  t.log_z = std::log(trace) - beta * center;
  return t;
}

ProfileTables reflect_tables(const ProfileTables& in) {
  const int L = in.L;
  const auto pi = [L](int j) { return L - 1 - j; };
  ProfileTables out = in;
  for (int j = 0; j < L; ++j) {
    out.d1[pi(j)] = in.d1[j];
    out.site_entropy[pi(j)] = in.site_entropy[j];
    for (int l = 0; l < L; ++l) {
      out.d2[pi(j) * L + pi(l)] = in.d2[j * L + l];
      out.x_cross[pi(j) * L + pi(l)] = in.x_cross[j * L + l];
      out.y_cross[pi(j) * L + pi(l)] = in.y_cross[j * L + l];
      for (int m = 0; m < L; ++m)
        out.d3[(static_cast<std::size_t>(pi(j)) * L + pi(l)) * L + pi(m)] =
            in.d3[(static_cast<std::size_t>(j) * L + l) * L + m];
    }
  }
  return out;
}

bool reflection_is_canonical(const std::vector<double>& potential) {
  const std::size_t L = potential.size();
  for (std::size_t j = 0; j < L; ++j) {
    const double fwd = potential[j];
    const double rev = potential[L - 1 - j];
    if (rev < fwd) return true;
    if (rev > fwd) return false;
  }
  return false;
}

}  // namespace sitwork
