#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sitwork/ensemble.hpp"
#include "sitwork/observables.hpp"

namespace sitwork {

inline constexpr const char* kVersion = "0.1.0";

/// Fully resolved run description: every command validates one of these
/// before any computation and stamps it into the output header.
struct RunConfig {
  LatticeSpec lattice;
  int n_up = 4;
  int n_dn = 4;

  ProtocolVariant variant = ProtocolVariant::Concentration;
  Pairing pairing = Pairing::Resample;
  std::vector<double> temperatures{0.0, 2.0, 30.0};
  std::vector<double> c_values;       // percentages; empty = command default
  std::vector<double> v_values{-1.0, -3.0, -5.0, -8.0, -10.0};  // protocol A
  std::vector<double> v0_values{-0.5, -1.0, -3.0, -5.0, -7.0};  // protocol B
  double v_final = -10.0;             // protocol B, defaults to 2U

  bool sampled = false;
  std::size_t sample_count = 100;
  std::uint64_t seed = 1;

  double merge_tol = 1e-9;
  double weight_cutoff = 1e-12;
  double degeneracy_tol = 1e-8;

  std::string output_dir = ".";
  int workers = 0;  // 0 = available parallelism

  void validate() const;

  /// Impurity counts for the given concentration percentages; throws naming
  /// the offending value when C*L/100 is not an integer.
  std::vector<int> impurity_counts(const std::vector<double>& c) const;

  /// Worker count after applying the WORKERS environment override.
  int resolved_workers() const;
};

/// Parses the JSON config file; missing fields keep their defaults.
RunConfig load_run_config(const std::string& path);

/// "# key = value" provenance block with the resolved config and version.
std::string run_config_comment(const RunConfig& config);

void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::string& path, const std::string& comment);

struct SiteRdmRow {
  int site = 0;
  SiteRDM rdm;
};

void write_rdm_csv(const std::vector<SiteRdmRow>& rows,
                   const std::string& path, const std::string& comment);

}  // namespace sitwork
