#include "sitwork/basis.hpp"

#include <array>
#include <bit>

namespace sitwork {

namespace {

constexpr int kMaxSites = 32;

const std::array<std::array<std::uint64_t, kMaxSites + 1>, kMaxSites + 1>&
binomial_table() {
  static const auto table = [] {
    std::array<std::array<std::uint64_t, kMaxSites + 1>, kMaxSites + 1> t{};
    for (int n = 0; n <= kMaxSites; ++n) {
      t[n][0] = 1;
      for (int k = 1; k <= n; ++k)
        t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0);
    }
    return t;
  }();
  return table;
}

std::vector<std::uint32_t> all_masks(int L, int k) {
  std::vector<std::uint32_t> masks;
  masks.reserve(binomial(L, k));
  if (k == 0) {
    masks.push_back(0);
    return masks;
  }
  std::uint32_t m = (std::uint32_t{1} << k) - 1;
  const std::uint32_t limit = std::uint32_t{1} << L;
  while (m < limit) {
    masks.push_back(m);
    // Gosper's hack: next mask with the same popcount.
    std::uint32_t c = m & -m;
    std::uint32_t r = m + c;
    if (r >= limit) break;
    m = (((r ^ m) >> 2) / c) | r;
  }
  return masks;
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (n < 0 || n > kMaxSites)
    throw std::invalid_argument("binomial: n outside the supported 0..32");
  if (k < 0 || k > n) return 0;
  return binomial_table()[n][k];
}

int hop_parity(std::uint32_t mask, int i, int j) {
  if (i == j) throw std::invalid_argument("hop_parity: i == j");
  if (!(mask >> j & 1u) || (mask >> i & 1u))
    throw std::invalid_argument("hop_parity: occupancy precondition violated");
  const int lo = i < j ? i : j;
  const int hi = i < j ? j : i;
  std::uint32_t between = 0;
  if (hi - lo > 1)
    between = mask & (((std::uint32_t{1} << (hi - lo - 1)) - 1) << (lo + 1));
  return std::popcount(between) % 2 == 0 ? 1 : -1;
}

std::uint64_t rank_mask(std::uint32_t mask, int L) {
  std::uint64_t r = 0;
  int remaining = std::popcount(mask);
  for (int p = L - 1; p >= 0 && remaining > 0; --p) {
    if (mask >> p & 1u) {
      r += binomial(p, remaining);
      --remaining;
    }
  }
  return r;
}

std::uint32_t unrank_mask(int L, int k, std::uint64_t r) {
  std::uint32_t mask = 0;
  for (int p = L - 1; p >= 0 && k > 0; --p) {
    const std::uint64_t below = binomial(p, k);
    if (r >= below) {
      mask |= std::uint32_t{1} << p;
      r -= below;
      --k;
    }
  }
  return mask;
}

SectorBasis::SectorBasis(int L, int n_up, int n_dn,
                         std::vector<Determinant> states)
    : L_(L), n_up_(n_up), n_dn_(n_dn), states_(std::move(states)) {}

std::size_t SectorBasis::rank(const Determinant& d) const {
  if (std::popcount(d.up) != n_up_ || std::popcount(d.dn) != n_dn_ ||
      (L_ < 32 && ((d.up | d.dn) >> L_) != 0))
    throw std::invalid_argument("rank: determinant not in sector");
  return rank_mask(d.up, L_) * binomial(L_, n_dn_) + rank_mask(d.dn, L_);
}

SectorBasis enumerate_sector(int L, int n_up, int n_dn,
                             std::uint64_t max_dim) {
  if (L < 1 || L > kMaxSites || n_up < 0 || n_up > L || n_dn < 0 || n_dn > L)
    throw std::invalid_argument("enumerate_sector: invalid sector");
  const std::uint64_t dim = binomial(L, n_up) * binomial(L, n_dn);
  if (dim > max_dim)
    throw capacity_error("enumerate_sector: sector dimension " +
                         std::to_string(dim) + " exceeds limit " +
                         std::to_string(max_dim));
  const auto ups = all_masks(L, n_up);
  const auto dns = all_masks(L, n_dn);
  std::vector<Determinant> states;
  states.reserve(dim);
  for (std::uint32_t u : ups)
    for (std::uint32_t d : dns) states.push_back({u, d});
  return SectorBasis(L, n_up, n_dn, std::move(states));
}

}  // namespace sitwork
