#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "homprobe/analytic.hpp"
#include "homprobe/design.hpp"
#include "homprobe/errors.hpp"
#include "homprobe/fock_oracle.hpp"
#include "homprobe/montecarlo.hpp"
#include "homprobe/spectral.hpp"

namespace py = pybind11;
using namespace homprobe;

namespace {

SetupParams setup(double p, double eta, double xi, double beta_sq) { return SetupParams{p, eta, xi, beta_sq}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Heralded-photon / weak-coherent-pulse interference model";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  py::class_<SetupParams>(m, "SetupParams")
      .def(py::init(&setup), py::arg("p"), py::arg("eta"), py::arg("xi"), py::arg("beta_sq"))
      .def_readwrite("p", &SetupParams::p)
      .def_readwrite("eta", &SetupParams::eta)
      .def_readwrite("xi", &SetupParams::xi)
      .def_readwrite("beta_sq", &SetupParams::beta_sq)
      .def("__repr__", [](const SetupParams& s) {
        return "SetupParams(p=" + std::to_string(s.p) + ", eta=" + std::to_string(s.eta) +
               ", xi=" + std::to_string(s.xi) + ", beta_sq=" + std::to_string(s.beta_sq) + ")";
      });

  m.def("z_expectation", &z_expectation, py::arg("setup"), py::arg("eta_c"), py::arg("eta_d"), py::arg("overlap"));
  m.def("coincidence_rate", py::overload_cast<const SetupParams&, double>(&coincidence_rate), py::arg("setup"),
        py::arg("overlap"));
  m.def("visibility", py::overload_cast<const SetupParams&, double>(&visibility), py::arg("setup"),
        py::arg("overlap"));
  m.def("correction_factor", py::overload_cast<const SetupParams&>(&correction_factor), py::arg("setup"));
  m.def("correction_factor_small_beta", py::overload_cast<const SetupParams&>(&correction_factor_small_beta),
        py::arg("setup"));
  m.def("figure_of_merit", py::overload_cast<const SetupParams&>(&figure_of_merit), py::arg("setup"));

  m.def(
      "optimal_intensity",
      [](double eta_p, double xi, double x_hi) {
        const auto r = design::optimal_intensity(eta_p, xi, x_hi);
        return py::make_tuple(r.eta_beta_sq, r.figure_of_merit);
      },
      py::arg("eta_p"), py::arg("xi"), py::arg("x_hi") = design::kDefaultIntensityCeiling,
      "Returns (eta*|beta|^2, figure of merit) at the optimum.");
  m.def(
      "max_correction_factor",
      [](double xi, double ep_lo, double ep_hi, std::size_t ep_steps, double x_lo, double x_hi, std::size_t x_steps) {
        const auto r = design::max_correction_factor(xi, {ep_lo, ep_hi, ep_steps}, {x_lo, x_hi, x_steps});
        py::dict d;
        d["cf_max"] = r.cf_max;
        d["eta_p"] = r.eta_p;
        d["eta_beta_sq"] = r.eta_beta_sq;
        d["boundary"] = r.boundary;
        return d;
      },
      py::arg("xi"), py::arg("eta_p_lo") = 0.001, py::arg("eta_p_hi") = 1.0, py::arg("eta_p_steps") = 1000,
      py::arg("x_lo") = 0.001, py::arg("x_hi") = 2.0, py::arg("x_steps") = 2000);

  m.def(
      "oracle_coincidence_rate",
      [](const SetupParams& s, double T, double phase, int n_max, bool mixture) {
        oracle::OracleConfig cfg;
        cfg.n_max = n_max;
        return oracle::oracle_coincidence_rate(
            s, T, phase, cfg,
            mixture ? oracle::EffectivePhotonState::Representation::IncoherentMixture
                    : oracle::EffectivePhotonState::Representation::PureSuperposition);
      },
      py::arg("setup"), py::arg("overlap"), py::arg("phase") = 0.0, py::arg("n_max") = 14,
      py::arg("mixture") = false);
  m.def(
      "verify_commutation",
      [](double eta, int n_max) {
        oracle::OracleConfig cfg;
        cfg.n_max = n_max;
        return oracle::verify_commutation(cfg, eta);
      },
      py::arg("eta"), py::arg("n_max") = 10);

  m.def(
      "gaussian_overlap",
      [](double center_a, double width_a, double center_b, double width_b, double delay, double lo, double hi,
         std::size_t points) {
        const auto grid = FrequencyGrid::uniform(lo, hi, points);
        const auto a = make_gaussian_mode({center_a, width_a, 0.0}, grid);
        const auto b = make_gaussian_mode({center_b, width_b, delay}, grid);
        return overlap_T(pure_state(a), b);
      },
      py::arg("center_a"), py::arg("width_a"), py::arg("center_b"), py::arg("width_b"), py::arg("delay") = 0.0,
      py::arg("lo") = -8.0, py::arg("hi") = 8.0, py::arg("points") = 512,
      "Overlap T of two Gaussian pulses sampled on a uniform frequency grid.");

  m.def(
      "simulate_dip",
      [](const SetupParams& s, double T, std::uint64_t n_pulses, std::uint64_t seed) {
        mc::DipReplica r;
        {
          py::gil_scoped_release release;
          r = mc::simulate_dip(s, T, {n_pulses, seed});
        }
        py::dict d;
        d["matched_coincidences"] = r.matched.coincidences;
        d["unmatched_coincidences"] = r.unmatched.coincidences;
        d["visibility"] = r.visibility.value;
        d["visibility_stderr"] = r.visibility.std_error;
        d["overlap"] = r.overlap.value;
        d["overlap_stderr"] = r.overlap.std_error;
        return d;
      },
      py::arg("setup"), py::arg("overlap"), py::arg("n_pulses") = 1'000'000, py::arg("seed") = 0);
}
