#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sitwork/critical.hpp"
#include "sitwork/ensemble.hpp"
#include "sitwork/observables.hpp"
#include "sitwork/run_config.hpp"
#include "sitwork/workstats.hpp"

namespace py = pybind11;
using namespace sitwork;

namespace {

LatticeSpec make_lattice(int L, double J, double U,
                         const std::string& boundary) {
  LatticeSpec spec;
  spec.L = L;
  spec.J = J;
  spec.U = U;
  if (boundary == "open")
    spec.boundary = Boundary::Open;
  else if (boundary == "periodic")
    spec.boundary = Boundary::Periodic;
  else
    throw std::invalid_argument("boundary must be 'open' or 'periodic'");
  spec.validate();
  return spec;
}

py::dict row_to_dict(const SweepRow& r) {
  py::dict d;
  d["protocol"] = std::string(1, r.protocol);
  d["L"] = r.L;
  d["n_up"] = r.n_up;
  d["n_dn"] = r.n_dn;
  d["U"] = r.U;
  d["V0"] = r.V0;
  d["Vf"] = r.Vf;
  d["T"] = r.T;
  d["C_initial"] = r.c_initial;
  d["N_pairs"] = r.stats.n_pairs;
  d["mean_W"] = r.stats.mean_w;
  d["var_W"] = r.stats.mean_var;
  d["mu3_W"] = r.stats.mean_mu3;
  d["delta3"] = r.stats.mean_delta3;
  d["lin_entropy_avg"] = r.stats.mean_lin_entropy;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Work statistics of sudden impurity quenches in the attractive "
      "Hubbard chain";
  m.attr("__version__") = kVersion;

  m.def(
      "sector_dimension",
      [](int L, int n_up, int n_dn) {
        return enumerate_sector(L, n_up, n_dn).dim();
      },
      py::arg("L"), py::arg("n_up"), py::arg("n_dn"),
      "Dimension of the fixed-(n_up, n_dn) sector.");

  m.def(
      "eigenvalues",
      [](int L, double J, double U, const std::string& boundary, int n_up,
         int n_dn, const std::vector<int>& sites, double strength) {
        const auto lattice = make_lattice(L, J, U, boundary);
        const auto basis = enumerate_sector(L, n_up, n_dn);
        ImpurityConfig config{sites, strength};
        config.validate(L);
        return diagonalize(build_hamiltonian(lattice, config, basis)).values;
      },
      py::arg("L"), py::arg("J"), py::arg("U"), py::arg("boundary"),
      py::arg("n_up"), py::arg("n_dn"), py::arg("sites"), py::arg("strength"),
      "Full sector spectrum for one impurity configuration.");

  m.def(
      "work_distribution",
      [](int L, double J, double U, const std::string& boundary, int n_up,
         int n_dn, const std::vector<int>& initial_sites, double v0,
         const std::vector<int>& final_sites, double vf, double T) {
        const auto lattice = make_lattice(L, J, U, boundary);
        const auto basis = enumerate_sector(L, n_up, n_dn);
        ImpurityConfig init{initial_sites, v0};
        ImpurityConfig fin{final_sites, vf};
        init.validate(L);
        fin.validate(L);
        const auto eig0 =
            diagonalize(build_hamiltonian(lattice, init, basis));
        const auto eigf = diagonalize(build_hamiltonian(lattice, fin, basis));
        const auto w = thermal_weights(eig0, T);
        const auto dist = tpm_distribution(eig0, eigf, w);
        return py::make_tuple(dist.w, dist.p);
      },
      py::arg("L"), py::arg("J"), py::arg("U"), py::arg("boundary"),
      py::arg("n_up"), py::arg("n_dn"), py::arg("initial_sites"),
      py::arg("v0"), py::arg("final_sites"), py::arg("vf"),
      py::arg("T") = 0.0,
      "Two-point-measurement work distribution (w, p) of one quench pair.");

  m.def(
      "work_moments",
      [](int L, double J, double U, const std::string& boundary, int n_up,
         int n_dn, const std::vector<int>& initial_sites, double v0,
         const std::vector<int>& final_sites, double vf, double T) {
        const auto lattice = make_lattice(L, J, U, boundary);
        const auto basis = enumerate_sector(L, n_up, n_dn);
        ImpurityConfig init{initial_sites, v0};
        ImpurityConfig fin{final_sites, vf};
        init.validate(L);
        fin.validate(L);
        const auto tables = compute_profile_tables(
            lattice, basis, site_potential(init, L), T);
        const auto pm =
            pair_moments(tables, potential_delta(init, fin, L));
        py::dict d;
        d["mean"] = pm.mean;
        d["variance"] = pm.variance;
        d["mu3"] = pm.mu3;
        d["mu3_correlator"] = pm.mu3_corr;
        d["delta3"] = pm.delta3;
        d["lin_entropy"] = tables.lin_entropy;
        return d;
      },
      py::arg("L"), py::arg("J"), py::arg("U"), py::arg("boundary"),
      py::arg("n_up"), py::arg("n_dn"), py::arg("initial_sites"),
      py::arg("v0"), py::arg("final_sites"), py::arg("vf"),
      py::arg("T") = 0.0,
      "Work moments of one quench pair via the density-correlator tables.");

  m.def(
      "entanglement",
      [](int L, double J, double U, const std::string& boundary, int n_up,
         int n_dn, const std::vector<int>& sites, double strength) {
        const auto lattice = make_lattice(L, J, U, boundary);
        const auto basis = enumerate_sector(L, n_up, n_dn);
        ImpurityConfig config{sites, strength};
        config.validate(L);
        const auto tables = compute_profile_tables(
            lattice, basis, site_potential(config, L), 0.0);
        return py::make_tuple(tables.site_entropy, tables.lin_entropy);
      },
      py::arg("L"), py::arg("J"), py::arg("U"), py::arg("boundary"),
      py::arg("n_up"), py::arg("n_dn"), py::arg("sites"), py::arg("strength"),
      "Ground-state single-site linear entropies and their site average.");

  m.def(
      "sweep_concentration",
      [](int L, double J, double U, const std::string& boundary, int n_up,
         int n_dn, const std::vector<double>& v_values,
         const std::vector<int>& n_initial,
         const std::vector<double>& temperatures, const std::string& pairing,
         int workers) {
        const auto lattice = make_lattice(L, J, U, boundary);
        SweepOptions opt;
        opt.temperatures = temperatures;
        opt.workers = workers;
        const Pairing p = pairing == "superset" ? Pairing::Superset
                                                : Pairing::Resample;
        const auto rows = sweep_concentration(lattice, n_up, n_dn, v_values,
                                              n_initial, p, opt);
        py::list out;
        for (const auto& r : rows) out.append(row_to_dict(r));
        return out;
      },
      py::arg("L"), py::arg("J"), py::arg("U"), py::arg("boundary"),
      py::arg("n_up"), py::arg("n_dn"), py::arg("v_values"),
      py::arg("n_initial"), py::arg("temperatures"),
      py::arg("pairing") = "resample", py::arg("workers") = 1,
      "Protocol-A ensemble averages; one dict per (V, T, C) grid point.");

  m.def(
      "sweep_potential",
      [](int L, double J, double U, const std::string& boundary, int n_up,
         int n_dn, double v_final, const std::vector<double>& v0_values,
         const std::vector<int>& n_counts,
         const std::vector<double>& temperatures, int workers) {
        const auto lattice = make_lattice(L, J, U, boundary);
        SweepOptions opt;
        opt.temperatures = temperatures;
        opt.workers = workers;
        const auto rows = sweep_potential(lattice, n_up, n_dn, v_final,
                                          v0_values, n_counts, opt);
        py::list out;
        for (const auto& r : rows) out.append(row_to_dict(r));
        return out;
      },
      py::arg("L"), py::arg("J"), py::arg("U"), py::arg("boundary"),
      py::arg("n_up"), py::arg("n_dn"), py::arg("v_final"),
      py::arg("v0_values"), py::arg("n_counts"), py::arg("temperatures"),
      py::arg("workers") = 1,
      "Protocol-B ensemble averages; one dict per (V0, T, C) grid point.");
}
