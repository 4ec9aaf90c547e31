#include "sitwork/run_config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

namespace sitwork {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt(v[i]);
  }
  return out + "]";
}

void get_if(const json& j, const char* key, double& out) {
  if (j.contains(key)) out = j.at(key).get<double>();
}
void get_if(const json& j, const char* key, int& out) {
  if (j.contains(key)) out = j.at(key).get<int>();
}
void get_if(const json& j, const char* key, std::uint64_t& out) {
  if (j.contains(key)) out = j.at(key).get<std::uint64_t>();
}
void get_if(const json& j, const char* key, bool& out) {
  if (j.contains(key)) out = j.at(key).get<bool>();
}
void get_if(const json& j, const char* key, std::string& out) {
  if (j.contains(key)) out = j.at(key).get<std::string>();
}
void get_if(const json& j, const char* key, std::vector<double>& out) {
  if (j.contains(key)) out = j.at(key).get<std::vector<double>>();
}

FILE* open_or_throw(const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  return f;
}

}  // namespace

void RunConfig::validate() const {
  lattice.validate();
  if (n_up < 0 || n_up > lattice.L || n_dn < 0 || n_dn > lattice.L)
    throw std::invalid_argument("RunConfig: particle numbers out of range");
  if (temperatures.empty())
    throw std::invalid_argument("RunConfig: empty temperature list");
  for (double t : temperatures)
    if (t < 0)
      throw std::invalid_argument("RunConfig: negative temperature " + fmt(t));
  for (double v0 : v0_values)
    if (!(std::abs(v_final) > std::abs(v0)))
      throw std::invalid_argument(
          "RunConfig: initial strength " + fmt(v0) +
          " is not smaller in modulus than the final strength " +
          fmt(v_final));
  if (!(merge_tol > 0) || !(weight_cutoff >= 0) || !(degeneracy_tol > 0))
    throw std::invalid_argument("RunConfig: invalid tolerance");
  if (sampled && sample_count < 1)
    throw std::invalid_argument("RunConfig: sample count must be >= 1");
  if (workers < 0)
    throw std::invalid_argument("RunConfig: negative worker count");
  impurity_counts(c_values);
}

std::vector<int> RunConfig::impurity_counts(
    const std::vector<double>& c) const {
  std::vector<int> out;
  out.reserve(c.size());
  for (double value : c) {
    const double exact = value * lattice.L / 100.0;
    const double rounded = std::round(exact);
    if (std::abs(exact - rounded) > 1e-9 || rounded < 0 ||
        rounded > lattice.L)
      throw std::invalid_argument("concentration " + fmt(value) +
                                  "% does not give an integer impurity count "
                                  "at L=" +
                                  std::to_string(lattice.L));
    out.push_back(static_cast<int>(rounded));
  }
  return out;
}

int RunConfig::resolved_workers() const {
  int n = workers;
  if (const char* env = std::getenv("WORKERS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || parsed < 1)
      throw std::invalid_argument("WORKERS must be a positive integer");
    n = static_cast<int>(parsed);
  }
  if (n == 0) n = static_cast<int>(std::thread::hardware_concurrency());
  return n < 1 ? 1 : n;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config parse error in " + path + ": " +
                             e.what());
  }

  RunConfig c;
  if (j.contains("lattice")) {
    const json& l = j.at("lattice");
    get_if(l, "L", c.lattice.L);
    get_if(l, "J", c.lattice.J);
    get_if(l, "U", c.lattice.U);
    std::string boundary = "open";
    get_if(l, "boundary", boundary);
    if (boundary == "open")
      c.lattice.boundary = Boundary::Open;
    else if (boundary == "periodic")
      c.lattice.boundary = Boundary::Periodic;
    else
      throw std::invalid_argument("boundary must be \"open\" or \"periodic\"");
  }
  if (j.contains("sector")) {
    get_if(j.at("sector"), "n_up", c.n_up);
    get_if(j.at("sector"), "n_dn", c.n_dn);
  }
  if (j.contains("protocol")) {
    const json& p = j.at("protocol");
    std::string variant = "A";
    get_if(p, "variant", variant);
    if (variant == "A")
      c.variant = ProtocolVariant::Concentration;
    else if (variant == "B")
      c.variant = ProtocolVariant::Strength;
    else
      throw std::invalid_argument("protocol variant must be \"A\" or \"B\"");
    std::string pairing = "resample";
    get_if(p, "pairing", pairing);
    if (pairing == "resample")
      c.pairing = Pairing::Resample;
    else if (pairing == "superset")
      c.pairing = Pairing::Superset;
    else
      throw std::invalid_argument(
          "pairing must be \"resample\" or \"superset\"");
    get_if(p, "v_values", c.v_values);
    get_if(p, "v0_values", c.v0_values);
    get_if(p, "v_final", c.v_final);
  }
  get_if(j, "temperatures", c.temperatures);
  if (j.contains("grids")) get_if(j.at("grids"), "c_values", c.c_values);
  if (j.contains("sampling")) {
    const json& s = j.at("sampling");
    std::string mode = "exhaustive";
    get_if(s, "mode", mode);
    if (mode == "sampled")
      c.sampled = true;
    else if (mode != "exhaustive")
      throw std::invalid_argument(
          "sampling mode must be \"exhaustive\" or \"sampled\"");
    get_if(s, "count", c.sample_count);
    get_if(s, "seed", c.seed);
  }
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    get_if(t, "merge_tol", c.merge_tol);
    get_if(t, "weight_cutoff", c.weight_cutoff);
    get_if(t, "degeneracy_tol", c.degeneracy_tol);
  }
  get_if(j, "output_dir", c.output_dir);
  get_if(j, "workers", c.workers);
  return c;
}

std::string run_config_comment(const RunConfig& c) {
  std::string s;
  s += "# version = " + std::string(kVersion) + "\n";
  s += "# L = " + std::to_string(c.lattice.L) + "\n";
  s += "# J = " + fmt(c.lattice.J) + "\n";
  s += "# U = " + fmt(c.lattice.U) + "\n";
  s += std::string("# boundary = ") +
       (c.lattice.boundary == Boundary::Open ? "open" : "periodic") + "\n";
  s += "# n_up = " + std::to_string(c.n_up) + "\n";
  s += "# n_dn = " + std::to_string(c.n_dn) + "\n";
  s += std::string("# variant = ") +
       (c.variant == ProtocolVariant::Concentration ? "A" : "B") + "\n";
  s += std::string("# pairing = ") +
       (c.pairing == Pairing::Resample ? "resample" : "superset") + "\n";
  s += "# temperatures = " + fmt(c.temperatures) + "\n";
  s += "# c_values = " + fmt(c.c_values) + "\n";
  s += "# v_values = " + fmt(c.v_values) + "\n";
  s += "# v0_values = " + fmt(c.v0_values) + "\n";
  s += "# v_final = " + fmt(c.v_final) + "\n";
  s += std::string("# sampling = ") + (c.sampled ? "sampled" : "exhaustive") +
       "\n";
  s += "# sample_count = " + std::to_string(c.sample_count) + "\n";
  s += "# seed = " + std::to_string(c.seed) + "\n";
  s += "# merge_tol = " + fmt(c.merge_tol) + "\n";
  s += "# weight_cutoff = " + fmt(c.weight_cutoff) + "\n";
  s += "# degeneracy_tol = " + fmt(c.degeneracy_tol) + "\n";
  s += "# workers = " + std::to_string(c.resolved_workers()) + "\n";
  return s;
}

void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::string& path, const std::string& comment) {
  FILE* f = open_or_throw(path);
  std::fputs(comment.c_str(), f);
  std::fputs(
      "protocol,L,n_up,n_dn,U,V0,Vf,T,C_initial,N_pairs,mean_W,var_W,mu3_W,"
      "delta3,lin_entropy_avg\n",
      f);
  for (const auto& r : rows)
    std::fprintf(f, "%c,%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%zu,%.17g,"
                    "%.17g,%.17g,%.17g,%.17g\n",
                 r.protocol, r.L, r.n_up, r.n_dn, r.U, r.V0, r.Vf, r.T,
                 r.c_initial, r.stats.n_pairs, r.stats.mean_w,
                 r.stats.mean_var, r.stats.mean_mu3, r.stats.mean_delta3,
                 r.stats.mean_lin_entropy);
  if (std::fclose(f) != 0)
    throw std::runtime_error("failed writing output file: " + path);
}

void write_rdm_csv(const std::vector<SiteRdmRow>& rows,
                   const std::string& path, const std::string& comment) {
  FILE* f = open_or_throw(path);
  std::fputs(comment.c_str(), f);
  std::fputs("site,p_empty,p_up,p_dn,p_double,lin_entropy\n", f);
  for (const auto& r : rows)
    std::fprintf(f, "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.site,
                 r.rdm.p_empty, r.rdm.p_up, r.rdm.p_dn, r.rdm.p_double,
                 r.rdm.linear_entropy());
  if (std::fclose(f) != 0)
    throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace sitwork
