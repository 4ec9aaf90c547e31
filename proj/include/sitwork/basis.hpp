#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace sitwork {

/// One occupation-number basis state of a two-species chain: a bitmask per
/// spin species, bit i set iff site i is occupied by that species.
struct Determinant {
  std::uint32_t up = 0;
  std::uint32_t dn = 0;

  friend bool operator==(const Determinant&, const Determinant&) = default;
  friend auto operator<=>(const Determinant&, const Determinant&) = default;
};

/// C(n, k) with C(n, k) = 0 for k < 0 or k > n; exact in 64 bits.
/// Throws std::invalid_argument outside the supported chain lengths (n > 32).
std::uint64_t binomial(int n, int k);

/// Fermionic sign picked up when a particle moves between sites i and j of
/// the same-species mask: (-1)^(occupied sites strictly between i and j).
/// Precondition: i != j, bit j set, bit i clear.
int hop_parity(std::uint32_t mask, int i, int j);

class capacity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered basis of the fixed (n_up, n_dn) sector of an L-site chain.
/// States are sorted by (up, dn) as unsigned integers, which fixes the
/// external ordering contract for ranks, output files and reductions.
class SectorBasis {
 public:
  SectorBasis(int L, int n_up, int n_dn, std::vector<Determinant> states);

  int sites() const { return L_; }
  int n_up() const { return n_up_; }
  int n_dn() const { return n_dn_; }
  std::size_t dim() const { return states_.size(); }

  const Determinant& state(std::size_t k) const { return states_[k]; }
  const std::vector<Determinant>& states() const { return states_; }

  /// Combinatorial rank of d within the declared ordering.
  /// Throws std::invalid_argument if d is not in the sector.
  std::size_t rank(const Determinant& d) const;

 private:
  int L_;
  int n_up_;
  int n_dn_;
  std::vector<Determinant> states_;
};

/// Enumerate the (n_up, n_dn) sector in the declared order.
/// Throws capacity_error if the dimension exceeds max_dim.
SectorBasis enumerate_sector(int L, int n_up, int n_dn,
                             std::uint64_t max_dim = 1'000'000);

/// Rank of a single-species mask among all masks of the same popcount,
/// ordered by unsigned value.
std::uint64_t rank_mask(std::uint32_t mask, int L);

/// Inverse of rank_mask: the r-th k-bit mask of L sites in ascending order.
std::uint32_t unrank_mask(int L, int k, std::uint64_t r);

}  // namespace sitwork
