#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "sitwork/hamiltonian.hpp"
#include "sitwork/profile_tables.hpp"

namespace sitwork {

enum class Pairing { Resample, Superset };
enum class ProtocolVariant { Concentration, Strength };

/// Quench protocol over the impurity ensemble. Variant Concentration ("A")
/// keeps the strength fixed and adds one impurity; variant Strength ("B")
/// keeps the impurity count fixed and quenches the strength v_initial ->
/// v_final.
struct ProtocolSpec {
  ProtocolVariant variant = ProtocolVariant::Concentration;
  double v_initial = -5.0;
  double v_final = -5.0;  // equal to v_initial for Concentration
  int n_impurities = 0;   // initial count; Concentration finals carry one more
  Pairing pairing = Pairing::Resample;  // Concentration only

  void validate(int L) const;
};

struct QuenchPair {
  ImpurityConfig initial;
  ImpurityConfig final_config;
  PotentialDelta delta;
};

/// All C(L, n) impurity configurations of a given strength, ordered
/// lexicographically by site list.
std::vector<ImpurityConfig> enumerate_configs(int L, int n_impurities,
                                              double strength,
                                              std::size_t max_count = 2000000);

/// Every quench pair of the protocol, in lexicographic (initial, final)
/// order.
std::vector<QuenchPair> protocol_pairs(const ProtocolSpec& spec, int L);

struct SampledPairs {
  std::vector<QuenchPair> pairs;
  bool exhaustive = false;  // true when count >= total and all pairs returned
};

/// Uniform pair sample from a counter-based generator: identical
/// (spec, seed, count) always yields the identical list.
SampledPairs sample_pairs(const ProtocolSpec& spec, int L, std::size_t count,
                          std::uint64_t seed);

/// Arithmetic means over exactly n_pairs pair results, accumulated in
/// lexicographic pair order.
struct EnsembleStats {
  std::size_t n_pairs = 0;
  double mean_w = 0.0;
  double mean_var = 0.0;
  double mean_mu3 = 0.0;
  double mean_delta3 = 0.0;
  double mean_lin_entropy = 0.0;
};

/// Thread-safe table cache keyed by (lattice, sector, potential profile,
/// temperature), with single-winner insertion and least-recently-used
/// eviction under a byte budget. Profiles are stored under their reflection
/// canonical form; reflected profiles are mapped back on the way out.
class ProfileCache {
 public:
  explicit ProfileCache(std::size_t byte_budget = 2ull << 30);
  ~ProfileCache();

  std::shared_ptr<const ProfileTables> get(const LatticeSpec& lattice,
                                           const SectorBasis& basis,
                                           const std::vector<double>& potential,
                                           double temperature,
                                           double degeneracy_tol);

  std::size_t entries() const;
  std::size_t bytes() const;
  std::size_t hits() const;
  std::size_t misses() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Tables for one potential profile, computed on the reflection-canonical
/// profile and mapped back; this is the single arithmetic path used with and
/// without the cache.
ProfileTables compute_profile_tables(const LatticeSpec& lattice,
                                     const SectorBasis& basis,
                                     const std::vector<double>& potential,
                                     double temperature,
                                     double degeneracy_tol = 1e-8);

struct SweepOptions {
  std::vector<double> temperatures{0.0, 2.0, 30.0};
  int workers = 1;
  double degeneracy_tol = 1e-8;
  bool use_cache = true;
  ProfileCache* cache = nullptr;  // optional shared cache; owned elsewhere
};

struct SweepRow {
  char protocol = 'A';
  int L = 0;
  int n_up = 0;
  int n_dn = 0;
  double U = 0.0;
  double V0 = 0.0;
  double Vf = 0.0;
  double T = 0.0;
  double c_initial = 0.0;
  EnsembleStats stats;
};

/// Protocol-A grid: one row per (V, T, initial impurity count), rows in that
/// nesting order.
std::vector<SweepRow> sweep_concentration(const LatticeSpec& lattice, int n_up,
                                          int n_dn,
                                          const std::vector<double>& v_values,
                                          const std::vector<int>& n_initial,
                                          Pairing pairing,
                                          const SweepOptions& options);

/// Protocol-B grid: one row per (V0, T, impurity count), rows in that
/// nesting order.
std::vector<SweepRow> sweep_potential(const LatticeSpec& lattice, int n_up,
                                      int n_dn, double v_final,
                                      const std::vector<double>& v0_values,
                                      const std::vector<int>& n_counts,
                                      const SweepOptions& options);

/// Ensemble statistics at a single grid point.
EnsembleStats ensemble_stats(const LatticeSpec& lattice,
                             const SectorBasis& basis,
                             const std::vector<QuenchPair>& pairs,
                             double temperature, const SweepOptions& options,
                             ProfileCache* cache);

/// Runs fn(0..n_items) on a bounded pool; item order of completion is
/// unspecified, so callers reduce by index afterwards.
void run_parallel(std::size_t n_items, int workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace sitwork
