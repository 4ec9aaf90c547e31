#include "sitwork/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <list>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>

extern "C" void openblas_set_num_threads(int);

namespace sitwork {

namespace {

double binomial_real(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                  std::lgamma(n - k + 1.0));
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Counter-based stream: no shared state, identical on every platform.
struct RandomStream {
  std::uint64_t key;
  std::uint64_t counter = 0;

  RandomStream(std::uint64_t seed, std::uint64_t index, std::uint64_t role)
      : key(splitmix64(seed ^ splitmix64(index * 2654435761ull + role))) {}

  std::uint64_t next() { return splitmix64(key + ++counter); }

  std::uint64_t below(std::uint64_t m) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % m;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % m;
  }
};

std::vector<int> random_subset(RandomStream& rng, int L, int n) {
  std::vector<int> pool(L);
  for (int j = 0; j < L; ++j) pool[j] = j;
  for (int j = 0; j < n; ++j) {
    const int pick = j + static_cast<int>(rng.below(L - j));
    std::swap(pool[j], pool[pick]);
  }
  std::vector<int> sites(pool.begin(), pool.begin() + n);
  std::sort(sites.begin(), sites.end());
  return sites;
}

QuenchPair make_pair(ImpurityConfig initial, ImpurityConfig final_config,
                     int L) {
  QuenchPair p;
  p.delta = potential_delta(initial, final_config, L);
  p.initial = std::move(initial);
  p.final_config = std::move(final_config);
  return p;
}

}  // namespace

void ProtocolSpec::validate(int L) const {
  if (n_impurities < 0 || n_impurities > L)
    throw std::invalid_argument("ProtocolSpec: impurity count out of range");
  if (variant == ProtocolVariant::Concentration) {
    if (n_impurities + 1 > L)
      throw std::invalid_argument(
          "ProtocolSpec: no room for the added impurity");
  } else {
    if (!(std::abs(v_final) > std::abs(v_initial)))
      throw std::invalid_argument(
          "ProtocolSpec: the final strength must exceed the initial one in "
          "modulus");
  }
}

std::vector<ImpurityConfig> enumerate_configs(int L, int n_impurities,
                                              double strength,
                                              std::size_t max_count) {
  if (n_impurities < 0 || n_impurities > L)
    throw std::invalid_argument("enumerate_configs: count out of range");
  if (binomial_real(L, n_impurities) > static_cast<double>(max_count))
    throw capacity_error("enumerate_configs: too many configurations");

  std::vector<ImpurityConfig> out;
  std::vector<int> sites(n_impurities);
  for (int j = 0; j < n_impurities; ++j) sites[j] = j;
  while (true) {
    out.push_back({sites, strength});
    // next combination in lexicographic order
    int j = n_impurities - 1;
    while (j >= 0 && sites[j] == L - n_impurities + j) --j;
    if (j < 0) break;
    ++sites[j];
    for (int k = j + 1; k < n_impurities; ++k) sites[k] = sites[k - 1] + 1;
  }
  return out;
}

std::vector<QuenchPair> protocol_pairs(const ProtocolSpec& spec, int L) {
  const auto initials = enumerate_configs(L, spec.n_impurities, spec.v_initial);
  std::vector<QuenchPair> pairs;

  if (spec.variant == ProtocolVariant::Concentration &&
      spec.pairing == Pairing::Superset) {
    pairs.reserve(initials.size() * (L - spec.n_impurities));
    for (const auto& init : initials)
      for (int s = 0; s < L; ++s) {
        if (std::binary_search(init.sites.begin(), init.sites.end(), s))
          continue;
        ImpurityConfig fin = init;
        fin.sites.insert(
            std::lower_bound(fin.sites.begin(), fin.sites.end(), s), s);
        pairs.push_back(make_pair(init, std::move(fin), L));
      }
    return pairs;
  }

  const int n_final = spec.variant == ProtocolVariant::Concentration
                          ? spec.n_impurities + 1
                          : spec.n_impurities;
  const double v_final = spec.variant == ProtocolVariant::Concentration
                             ? spec.v_initial
                             : spec.v_final;
  const auto finals = enumerate_configs(L, n_final, v_final);
  pairs.reserve(initials.size() * finals.size());
  for (const auto& init : initials)
    for (const auto& fin : finals) pairs.push_back(make_pair(init, fin, L));
  return pairs;
}

SampledPairs sample_pairs(const ProtocolSpec& spec, int L, std::size_t count,
                          std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_pairs: count must be >= 1");

  const bool superset = spec.variant == ProtocolVariant::Concentration &&
                        spec.pairing == Pairing::Superset;
  const int n_final = spec.variant == ProtocolVariant::Concentration
                          ? spec.n_impurities + 1
                          : spec.n_impurities;
  const double v_final = spec.variant == ProtocolVariant::Concentration
                             ? spec.v_initial
                             : spec.v_final;
  const double total =
      binomial_real(L, spec.n_impurities) *
      (superset ? L - spec.n_impurities : binomial_real(L, n_final));

  SampledPairs out;
  if (total <= static_cast<double>(count)) {
    out.pairs = protocol_pairs(spec, L);
    out.exhaustive = true;
    return out;
  }

  out.pairs.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    RandomStream rng_init(seed, k, 0);
    ImpurityConfig init{random_subset(rng_init, L, spec.n_impurities),
                        spec.v_initial};
    ImpurityConfig fin;
    if (superset) {
      RandomStream rng_site(seed, k, 1);
      fin = init;
      int s;
      do {
        s = static_cast<int>(rng_site.below(L));
      } while (std::binary_search(fin.sites.begin(), fin.sites.end(), s));
      fin.sites.insert(std::lower_bound(fin.sites.begin(), fin.sites.end(), s),
                       s);
    } else {
      RandomStream rng_fin(seed, k, 1);
      fin = ImpurityConfig{random_subset(rng_fin, L, n_final), v_final};
    }
    out.pairs.push_back(make_pair(std::move(init), std::move(fin), L));
  }
  return out;
}

ProfileTables compute_profile_tables(const LatticeSpec& lattice,
                                     const SectorBasis& basis,
                                     const std::vector<double>& potential,
                                     double temperature,
                                     double degeneracy_tol) {
  // Site reversal is an exact symmetry of the chain, so equivalent profiles
  // share one diagonalization; the same path runs with and without caching.
  const bool reflected = reflection_is_canonical(potential);
  std::vector<double> canon = potential;
  if (reflected) std::reverse(canon.begin(), canon.end());

  const SparseHamiltonian h = build_hamiltonian(lattice, canon, basis);
  ProfileTables t = temperature == 0.0
                        ? ground_tables(h, basis, degeneracy_tol)
                        : gibbs_tables(h, basis, temperature);
  return reflected ? reflect_tables(t) : t;
}

struct ProfileCache::Impl {
  struct Node {
    std::mutex compute;
    std::shared_ptr<const ProfileTables> tables;
    std::list<std::string>::iterator lru_it;
    bool in_lru = false;
  };

  std::mutex m;
  std::size_t budget;
  std::size_t bytes = 0;
  std::size_t hits = 0;
  std::size_t misses = 0;
  std::list<std::string> lru;  // front = most recently used
  std::unordered_map<std::string, std::shared_ptr<Node>> map;
};

ProfileCache::ProfileCache(std::size_t byte_budget) : impl_(new Impl) {
  impl_->budget = byte_budget;
}

ProfileCache::~ProfileCache() = default;

std::size_t ProfileCache::entries() const {
  std::lock_guard<std::mutex> lock(impl_->m);
  return impl_->map.size();
}

std::size_t ProfileCache::bytes() const {
  std::lock_guard<std::mutex> lock(impl_->m);
  return impl_->bytes;
}

std::size_t ProfileCache::hits() const {
  std::lock_guard<std::mutex> lock(impl_->m);
  return impl_->hits;
}

std::size_t ProfileCache::misses() const {
  std::lock_guard<std::mutex> lock(impl_->m);
  return impl_->misses;
}

std::shared_ptr<const ProfileTables> ProfileCache::get(
    const LatticeSpec& lattice, const SectorBasis& basis,
    const std::vector<double>& potential, double temperature,
    double degeneracy_tol) {
  const bool reflected = reflection_is_canonical(potential);
  std::vector<double> canon = potential;
  if (reflected) std::reverse(canon.begin(), canon.end());

  char buf[64];
  std::string key;
  key.reserve(64 + 24 * canon.size());
  std::snprintf(buf, sizeof buf, "%d|%.17g|%.17g|%d|%d|%d|%.17g|%.17g",
                lattice.L, lattice.J, lattice.U,
                static_cast<int>(lattice.boundary), basis.n_up(), basis.n_dn(),
                temperature, degeneracy_tol);
  key = buf;
  for (double v : canon) {
    std::snprintf(buf, sizeof buf, "|%.17g", v);
    key += buf;
  }

  std::shared_ptr<Impl::Node> node;
  bool winner = false;
  std::unique_lock<std::mutex> node_lock;
  {
    std::lock_guard<std::mutex> lock(impl_->m);
    auto it = impl_->map.find(key);
    if (it == impl_->map.end()) {
      node = std::make_shared<Impl::Node>();
      node_lock = std::unique_lock<std::mutex>(node->compute);
      impl_->map.emplace(key, node);
      winner = true;
      ++impl_->misses;
    } else {
      node = it->second;
      ++impl_->hits;
      if (node->in_lru) {
        impl_->lru.splice(impl_->lru.begin(), impl_->lru, node->lru_it);
      }
    }
  }

  if (winner) {
    node->tables = std::make_shared<const ProfileTables>(compute_profile_tables(
        lattice, basis, canon, temperature, degeneracy_tol));
    node_lock.unlock();

    std::lock_guard<std::mutex> lock(impl_->m);
    impl_->bytes += node->tables->byte_size();
    impl_->lru.push_front(key);
    node->lru_it = impl_->lru.begin();
    node->in_lru = true;
    while (impl_->bytes > impl_->budget && impl_->lru.size() > 1) {
      const std::string victim = impl_->lru.back();
      impl_->lru.pop_back();
      auto it = impl_->map.find(victim);
      if (it != impl_->map.end()) {
        impl_->bytes -= it->second->tables->byte_size();
        impl_->map.erase(it);
      }
    }
  } else {
    // Wait for the computing thread if necessary.
    std::lock_guard<std::mutex> wait(node->compute);
  }

  auto tables = node->tables;
  if (!reflected) return tables;
  return std::make_shared<const ProfileTables>(reflect_tables(*tables));
}

void run_parallel(std::size_t n_items, int workers,
                  const std::function<void(std::size_t)>& fn) {
  if (workers < 1) workers = 1;
  if (workers == 1 || n_items <= 1) {
    for (std::size_t i = 0; i < n_items; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_m;
  std::exception_ptr err;
  const std::size_t n_threads =
      std::min<std::size_t>(workers, n_items);
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t)
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n_items) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_m);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

EnsembleStats ensemble_stats(const LatticeSpec& lattice,
                             const SectorBasis& basis,
                             const std::vector<QuenchPair>& pairs,
                             double temperature, const SweepOptions& options,
                             ProfileCache* cache) {
  struct PairResult {
    PairMoments pm;
    double lin_entropy = 0.0;
  };
  std::vector<PairResult> results(pairs.size());

  run_parallel(pairs.size(), options.workers, [&](std::size_t i) {
    const auto potential = site_potential(pairs[i].initial, lattice.L);
    std::shared_ptr<const ProfileTables> tables;
    if (cache) {
      tables = cache->get(lattice, basis, potential, temperature,
                          options.degeneracy_tol);
    } else {
      tables = std::make_shared<const ProfileTables>(compute_profile_tables(
          lattice, basis, potential, temperature, options.degeneracy_tol));
    }
    results[i].pm = pair_moments(*tables, pairs[i].delta);
    results[i].lin_entropy = tables->lin_entropy;
  });

  EnsembleStats stats;
  stats.n_pairs = pairs.size();
  for (const auto& r : results) {
    stats.mean_w += r.pm.mean;
    stats.mean_var += r.pm.variance;
    stats.mean_mu3 += r.pm.mu3;
    stats.mean_delta3 += r.pm.delta3;
    stats.mean_lin_entropy += r.lin_entropy;
  }
  if (!pairs.empty()) {
    stats.mean_w /= pairs.size();
    stats.mean_var /= pairs.size();
    stats.mean_mu3 /= pairs.size();
    stats.mean_delta3 /= pairs.size();
    stats.mean_lin_entropy /= pairs.size();
  }
  return stats;
}

namespace {

// Rows come out nested (strength group, temperature, impurity count);
// group_size is the number of impurity counts per strength value.
std::vector<SweepRow> run_sweep(const LatticeSpec& lattice, int n_up, int n_dn,
                                char protocol,
                                const std::vector<ProtocolSpec>& specs,
                                std::size_t group_size,
                                const SweepOptions& options) {
  if (group_size == 0 || specs.empty()) return {};
  lattice.validate();
  openblas_set_num_threads(1);
  const SectorBasis basis = enumerate_sector(lattice.L, n_up, n_dn);

  std::unique_ptr<ProfileCache> local;
  ProfileCache* cache = nullptr;
  if (options.use_cache) {
    cache = options.cache;
    if (!cache) {
      local = std::make_unique<ProfileCache>();
      cache = local.get();
    }
  }

  std::vector<SweepRow> rows;
  for (std::size_t g = 0; g < specs.size(); g += group_size) {
    std::vector<std::vector<QuenchPair>> group_pairs;
    for (std::size_t k = g; k < g + group_size; ++k)
      group_pairs.push_back(protocol_pairs(specs[k], lattice.L));
    for (double T : options.temperatures) {
      for (std::size_t k = g; k < g + group_size; ++k) {
        const ProtocolSpec& spec = specs[k];
        SweepRow row;
        row.protocol = protocol;
        row.L = lattice.L;
        row.n_up = n_up;
        row.n_dn = n_dn;
        row.U = lattice.U;
        row.V0 = spec.v_initial;
        row.Vf = spec.variant == ProtocolVariant::Concentration
                     ? spec.v_initial
                     : spec.v_final;
        row.T = T;
        row.c_initial = 100.0 * spec.n_impurities / lattice.L;
        row.stats = ensemble_stats(lattice, basis, group_pairs[k - g], T,
                                   options, cache);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

}  // namespace

std::vector<SweepRow> sweep_concentration(const LatticeSpec& lattice, int n_up,
                                          int n_dn,
                                          const std::vector<double>& v_values,
                                          const std::vector<int>& n_initial,
                                          Pairing pairing,
                                          const SweepOptions& options) {
  std::vector<ProtocolSpec> specs;
  for (double v : v_values)
    for (int n : n_initial) {
      ProtocolSpec s;
      s.variant = ProtocolVariant::Concentration;
      s.v_initial = s.v_final = v;
      s.n_impurities = n;
      s.pairing = pairing;
      s.validate(lattice.L);
      specs.push_back(s);
    }
  return run_sweep(lattice, n_up, n_dn, 'A', specs, n_initial.size(), options);
}

std::vector<SweepRow> sweep_potential(const LatticeSpec& lattice, int n_up,
                                      int n_dn, double v_final,
                                      const std::vector<double>& v0_values,
                                      const std::vector<int>& n_counts,
                                      const SweepOptions& options) {
  std::vector<ProtocolSpec> specs;
  for (double v0 : v0_values)
    for (int n : n_counts) {
      ProtocolSpec s;
      s.variant = ProtocolVariant::Strength;
      s.v_initial = v0;
      s.v_final = v_final;
      s.n_impurities = n;
      s.validate(lattice.L);
      specs.push_back(s);
    }
  return run_sweep(lattice, n_up, n_dn, 'B', specs, n_counts.size(), options);
}

}  // namespace sitwork
