#include <doctest.h>

#include <cmath>

#include "sitwork/ensemble.hpp"

using namespace sitwork;

namespace {

ProtocolSpec spec_a(int n, double v, Pairing pairing = Pairing::Resample) {
  ProtocolSpec s;
  s.variant = ProtocolVariant::Concentration;
  s.v_initial = s.v_final = v;
  s.n_impurities = n;
  s.pairing = pairing;
  return s;
}

ProtocolSpec spec_b(int n, double v0, double vf) {
  ProtocolSpec s;
  s.variant = ProtocolVariant::Strength;
  s.v_initial = v0;
  s.v_final = vf;
  s.n_impurities = n;
  return s;
}

bool same_stats(const EnsembleStats& a, const EnsembleStats& b) {
  return a.n_pairs == b.n_pairs && a.mean_w == b.mean_w &&
         a.mean_var == b.mean_var && a.mean_mu3 == b.mean_mu3 &&
         a.mean_delta3 == b.mean_delta3 &&
         a.mean_lin_entropy == b.mean_lin_entropy;
}

}  // namespace

TEST_CASE("configuration enumeration counts and order") {
  CHECK(enumerate_configs(8, 2, -1.0).size() == 28);
  CHECK(enumerate_configs(8, 3, -1.0).size() == 56);
  CHECK(enumerate_configs(8, 0, -1.0).size() == 1);

  const auto configs = enumerate_configs(4, 2, -2.0);
  REQUIRE(configs.size() == 6);
  CHECK(configs.front().sites == std::vector<int>{0, 1});
  CHECK(configs[1].sites == std::vector<int>{0, 2});
  CHECK(configs.back().sites == std::vector<int>{2, 3});
  for (const auto& c : configs) CHECK(c.strength == -2.0);

  CHECK_THROWS_AS(enumerate_configs(30, 15, -1.0, 1000), capacity_error);
}

TEST_CASE("protocol pair counts") {
  CHECK(protocol_pairs(spec_a(2, -5.0), 8).size() == 28 * 56);
  CHECK(protocol_pairs(spec_a(2, -5.0, Pairing::Superset), 8).size() ==
        28 * 6);
  CHECK(protocol_pairs(spec_b(1, -5.0, -10.0), 8).size() == 64);
}

TEST_CASE("pair deltas are consistent with the configurations") {
  for (const auto& p : protocol_pairs(spec_a(1, -3.0, Pairing::Superset), 4)) {
    CHECK(p.final_config.sites.size() == p.initial.sites.size() + 1);
    const auto expect = potential_delta(p.initial, p.final_config, 4);
    CHECK(p.delta.delta_v == expect.delta_v);
  }
}

TEST_CASE("protocol validation") {
  CHECK_THROWS_AS(spec_b(1, -10.0, -5.0).validate(8), std::invalid_argument);
  CHECK_THROWS_AS(spec_b(1, -10.0, -10.0).validate(8), std::invalid_argument);
  CHECK_NOTHROW(spec_b(1, -5.0, -10.0).validate(8));
  CHECK_THROWS_AS(spec_a(8, -5.0).validate(8), std::invalid_argument);
  CHECK_NOTHROW(spec_a(7, -5.0).validate(8));
}

TEST_CASE("pair sampling is deterministic and seed-sensitive") {
  const auto spec = spec_a(2, -5.0);
  const auto a = sample_pairs(spec, 8, 100, 42);
  const auto b = sample_pairs(spec, 8, 100, 42);
  REQUIRE(a.pairs.size() == 100);
  CHECK(!a.exhaustive);
  for (std::size_t i = 0; i < a.pairs.size(); ++i) {
    CHECK(a.pairs[i].initial.sites == b.pairs[i].initial.sites);
    CHECK(a.pairs[i].final_config.sites == b.pairs[i].final_config.sites);
  }
  const auto c = sample_pairs(spec, 8, 100, 43);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.pairs.size(); ++i)
    any_diff = any_diff || a.pairs[i].initial.sites != c.pairs[i].initial.sites ||
               a.pairs[i].final_config.sites != c.pairs[i].final_config.sites;
  CHECK(any_diff);
}

TEST_CASE("oversampling falls back to the exhaustive list") {
  const auto spec = spec_b(1, -5.0, -10.0);
  const auto s = sample_pairs(spec, 4, 100, 1);
  CHECK(s.exhaustive);
  CHECK(s.pairs.size() == 16);
}

TEST_CASE("sampled sites are valid configurations") {
  const auto spec = spec_a(3, -5.0);
  const auto s = sample_pairs(spec, 8, 50, 7);
  for (const auto& p : s.pairs) {
    CHECK(p.initial.sites.size() == 3);
    CHECK(p.final_config.sites.size() == 4);
    for (std::size_t i = 1; i < p.initial.sites.size(); ++i)
      CHECK(p.initial.sites[i] > p.initial.sites[i - 1]);
  }
}

TEST_CASE("cache and no-cache sweeps agree exactly") {
  const LatticeSpec lattice{4, 1.0, -5.0, Boundary::Open};
  SweepOptions with_cache;
  with_cache.temperatures = {0.0, 2.0};
  SweepOptions without_cache = with_cache;
  without_cache.use_cache = false;

  const std::vector<double> v = {-6.0};
  const std::vector<int> counts = {0, 1, 2};
  const auto a =
      sweep_concentration(lattice, 2, 2, v, counts, Pairing::Resample, with_cache);
  const auto b = sweep_concentration(lattice, 2, 2, v, counts,
                                     Pairing::Resample, without_cache);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(same_stats(a[i].stats, b[i].stats));
}

TEST_CASE("worker count does not change the result") {
  const LatticeSpec lattice{4, 1.0, -5.0, Boundary::Open};
  SweepOptions serial;
  serial.temperatures = {0.0};
  SweepOptions parallel = serial;
  parallel.workers = 4;
  const std::vector<double> v = {-4.0};
  const std::vector<int> counts = {1, 2};
  const auto a = sweep_concentration(lattice, 2, 2, v, counts,
                                     Pairing::Resample, serial);
  const auto b = sweep_concentration(lattice, 2, 2, v, counts,
                                     Pairing::Resample, parallel);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(same_stats(a[i].stats, b[i].stats));
}

TEST_CASE("cache eviction keeps results correct under a tiny budget") {
  const LatticeSpec lattice{4, 1.0, -5.0, Boundary::Open};
  const SectorBasis basis = enumerate_sector(4, 2, 2);
  ProfileCache tiny(1);  // evicts after every insertion
  ProfileCache big;
  SweepOptions opt;
  opt.temperatures = {0.0};
  const auto pairs = protocol_pairs(spec_a(1, -5.0), 4);
  const auto a = ensemble_stats(lattice, basis, pairs, 0.0, opt, &tiny);
  const auto b = ensemble_stats(lattice, basis, pairs, 0.0, opt, &big);
  CHECK(same_stats(a, b));
  CHECK(tiny.entries() <= 1);
  CHECK(big.entries() >= 1);
  CHECK(big.hits() > 0);
}

TEST_CASE("cache reuses reflection partners") {
  const LatticeSpec lattice{4, 1.0, -5.0, Boundary::Open};
  const SectorBasis basis = enumerate_sector(4, 2, 1);
  ProfileCache cache;
  const auto a = cache.get(lattice, basis, {-3.0, 0.0, 0.0, 0.0}, 0.0, 1e-8);
  const auto b = cache.get(lattice, basis, {0.0, 0.0, 0.0, -3.0}, 0.0, 1e-8);
  CHECK(cache.entries() == 1);
  CHECK(cache.hits() == 1);
  for (int j = 0; j < 4; ++j)
    CHECK(a->d1[j] == doctest::Approx(b->d1[3 - j]).epsilon(1e-12));
}

TEST_CASE("zero-strength quench has vanishing work statistics") {
  const LatticeSpec lattice{4, 1.0, -5.0, Boundary::Open};
  SweepOptions opt;
  opt.temperatures = {0.0, 2.0};
  const auto rows = sweep_concentration(lattice, 2, 2, {0.0}, {0, 1},
                                        Pairing::Resample, opt);
  for (const auto& r : rows) {
    CHECK(std::abs(r.stats.mean_w) < 1e-12);
    CHECK(std::abs(r.stats.mean_var) < 1e-12);
    CHECK(std::abs(r.stats.mean_mu3) < 1e-12);
    CHECK(std::abs(r.stats.mean_delta3) < 1e-12);
  }
}

TEST_CASE("degenerate strength quench gives all-zero statistics") {
  const LatticeSpec lattice{4, 1.0, -5.0, Boundary::Open};
  const SectorBasis basis = enumerate_sector(4, 2, 2);
  SweepOptions opt;
  // same strength and the same sites on both ends: delta = 0 identically
  std::vector<QuenchPair> pairs;
  for (const auto& c : enumerate_configs(4, 2, -3.0)) {
    QuenchPair p;
    p.initial = c;
    p.final_config = c;
    p.delta = potential_delta(c, c, 4);
    pairs.push_back(p);
  }
  const auto stats = ensemble_stats(lattice, basis, pairs, 0.0, opt, nullptr);
  CHECK(stats.mean_w == 0.0);
  CHECK(stats.mean_var == 0.0);
  CHECK(stats.mean_mu3 == 0.0);
}

TEST_CASE("sweep rows are laid out (V, T, C)") {
  const LatticeSpec lattice{4, 1.0, -5.0, Boundary::Open};
  SweepOptions opt;
  opt.temperatures = {0.0, 2.0};
  const auto rows = sweep_concentration(lattice, 2, 2, {-1.0, -2.0}, {0, 1},
                                        Pairing::Resample, opt);
  REQUIRE(rows.size() == 8);
  CHECK(rows[0].V0 == -1.0);
  CHECK(rows[0].T == 0.0);
  CHECK(rows[0].c_initial == 0.0);
  CHECK(rows[1].c_initial == 25.0);
  CHECK(rows[2].T == 2.0);
  CHECK(rows[4].V0 == -2.0);
  for (const auto& r : rows) {
    CHECK(r.protocol == 'A');
    CHECK(r.stats.n_pairs > 0);
  }
}
