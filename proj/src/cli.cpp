#include "homprobe/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "homprobe/analytic.hpp"
#include "homprobe/design.hpp"
#include "homprobe/diagnostics.hpp"
#include "homprobe/errors.hpp"
#include "homprobe/fock_oracle.hpp"
#include "homprobe/io.hpp"
#include "homprobe/montecarlo.hpp"
#include "homprobe/spectral.hpp"
#include "json.hpp"

namespace homprobe::cli {
namespace {

enum class Format { Csv, Json };

struct OutputOptions {
  std::string path;
  Format format = Format::Csv;
};

struct SetupOptions {
  SetupParams params;
  std::optional<double> xi;
  std::optional<double> dark_count_prob;

  SetupParams resolve() const {
    SetupParams s = params;
    s.xi = 1.0;
    if (xi) s.xi = *xi;
    if (dark_count_prob) {
      if (!(*dark_count_prob >= 0.0 && *dark_count_prob < 1.0))
        throw InvalidArgument("--dark-count-prob must lie in [0, 1)");
      s.xi = 1.0 - *dark_count_prob;
    }
    s.validate();
    return s;
  }
};

void add_output_options(CLI::App* sub, OutputOptions& o) {
  sub->add_option("--out", o.path, "Output file (default stdout)");
  sub->add_option_function<std::string>(
         "--format", [&o](const std::string& v) { o.format = v == "json" ? Format::Json : Format::Csv; },
         "Output format (default csv)")
      ->transform(CLI::IsMember({"csv", "json"}, CLI::ignore_case))
      ->type_name("FORMAT");
}

void add_setup_options(CLI::App* sub, SetupOptions& s) {
  sub->add_option("--p", s.params.p, "Single-photon preparation probability")->required();
  sub->add_option("--eta", s.params.eta, "Detector quantum efficiency")->required();
  sub->add_option("--beta-sq", s.params.beta_sq, "Probe mean photon number |beta|^2")->required();
  auto* xi = sub->add_option("--xi", s.xi, "No-dark-count probability");
  auto* dark = sub->add_option("--dark-count-prob", s.dark_count_prob, "Dark-count probability (= 1 - xi)");
  xi->excludes(dark);
}

// Writes to --out when given, else to the supplied stream.
void emit(const OutputOptions& o, std::ostream& fallback, const std::function<void(std::ostream&)>& body) {
  if (o.path.empty()) {
    body(fallback);
    return;
  }
  std::ofstream f(o.path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open output file " + o.path);
  body(f);
  if (!f) throw InvalidArgument("failed writing output file " + o.path);
}

void emit_table(const OutputOptions& o, std::ostream& out, const io::Table& t) {
  emit(o, out, [&](std::ostream& os) {
    if (o.format == Format::Json)
      io::write_json(t, os);
    else
      io::write_csv(t, os);
  });
}

void emit_scalar(const OutputOptions& o, std::ostream& out, const std::string& kind, const SetupParams& s,
                 std::optional<double> T, double value) {
  emit(o, out, [&](std::ostream& os) {
    if (o.format == Format::Csv) {
      os << io::format_number(value) << '\n';
      return;
    }
    // route numbers through format_number so JSON carries the same digits
    auto num = [](double v) { return nlohmann::ordered_json::parse(io::format_number(v)); };
    nlohmann::ordered_json j;
    j["schema"] = io::kSchemaVersion;
    j["kind"] = kind;
    j["p"] = num(s.p);
    j["eta"] = num(s.eta);
    j["xi"] = num(s.xi);
    j["beta_sq"] = num(s.beta_sq);
    if (T) j["overlap"] = num(*T);
    j["value"] = num(value);
    os << j.dump(2) << '\n';
  });
}

struct Context {
  std::ostream& out;
  std::ostream& err;
  int verbosity = 0;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hong-Ou-Mandel single-photon probe calculator"};
  app.name(args.empty() ? "homprobe" : args.front());
  app.require_subcommand(1);
  int verbosity = 0;
  app.add_flag("-v,--verbose", verbosity, "Print extra diagnostics to stderr");

  Context ctx{out, err};
  std::function<void()> action;

  // overlap ---------------------------------------------------------------
  std::string state_path, mode_path;
  double delay = 0.0;
  OutputOptions overlap_out;
  auto* overlap_cmd = app.add_subcommand("overlap", "Mode overlap T of a state with a probe mode");
  overlap_cmd->add_option("--state", state_path, "Density-matrix JSON file")->required();
  overlap_cmd->add_option("--mode", mode_path, "Probe mode JSON file")->required();
  overlap_cmd->add_option("--delay", delay, "Probe delay in seconds");
  add_output_options(overlap_cmd, overlap_out);
  overlap_cmd->callback([&] {
    action = [&] {
      const auto rho = io::read_state_file(state_path);
      auto u = io::read_mode_file(mode_path, rho.grid());
      if (delay != 0.0) u = delay_mode(u, delay);
      const double t = overlap_T(rho, u);
      emit(overlap_out, ctx.out, [&](std::ostream& os) {
        if (overlap_out.format == Format::Csv) {
          os << io::format_number(t) << '\n';
        } else {
          nlohmann::ordered_json j;
          j["schema"] = io::kSchemaVersion;
          j["kind"] = "overlap";
          j["delay"] = nlohmann::ordered_json::parse(io::format_number(delay));
          j["value"] = nlohmann::ordered_json::parse(io::format_number(t));
          os << j.dump(2) << '\n';
        }
      });
    };
  });

  // rate | visibility | correction-factor ---------------------------------
  SetupOptions scalar_setup;
  double scalar_T = 1.0;
  OutputOptions scalar_out;
  auto add_scalar = [&](const std::string& name, const std::string& help, bool takes_overlap,
                        std::function<double(const SetupParams&, double)> f) {
    auto* sub = app.add_subcommand(name, help);
    add_setup_options(sub, scalar_setup);
    if (takes_overlap) sub->add_option("--overlap", scalar_T, "Mode overlap T (default 1)");
    add_output_options(sub, scalar_out);
    sub->callback([&, name, takes_overlap, f] {
      action = [&, name, takes_overlap, f] {
        const SetupParams s = scalar_setup.resolve();
        const double v = f(s, scalar_T);
        emit_scalar(scalar_out, ctx.out, name, s, takes_overlap ? std::optional<double>(scalar_T) : std::nullopt, v);
      };
    });
  };
  add_scalar("rate", "Coincidence probability per pulse pair R_C(T)", true,
             [](const SetupParams& s, double T) { return coincidence_rate(s, T); });
  add_scalar("visibility", "Dip visibility V(T)", true,
             [](const SetupParams& s, double T) { return visibility(s, T); });
  add_scalar("correction-factor", "Correction factor c_f = V/T", false,
             [](const SetupParams& s, double) { return correction_factor(s); });

  // dip-scan --------------------------------------------------------------
  SetupOptions dip_setup;
  design::ScanRange taus{0.0, 1.0, 2};
  OutputOptions dip_out;
  auto* dip_cmd = app.add_subcommand("dip-scan", "Overlap, visibility and rate versus probe delay");
  dip_cmd->add_option("--state", state_path, "Density-matrix JSON file")->required();
  dip_cmd->add_option("--mode", mode_path, "Probe mode JSON file")->required();
  dip_cmd->add_option("--tau-lo", taus.lo, "First delay (s)")->required();
  dip_cmd->add_option("--tau-hi", taus.hi, "Last delay (s)")->required();
  dip_cmd->add_option("--tau-steps", taus.steps, "Number of delays")->required();
  add_setup_options(dip_cmd, dip_setup);
  add_output_options(dip_cmd, dip_out);
  dip_cmd->callback([&] {
    action = [&] {
      const SetupParams s = dip_setup.resolve();
      const auto rho = io::read_state_file(state_path);
      const auto u = io::read_mode_file(mode_path, rho.grid());
      emit_table(dip_out, ctx.out, io::dip_table(design::dip_scan(rho, u, taus, s)));
    };
  });

  // contour ---------------------------------------------------------------
  double contour_xi = 1.0;
  std::optional<double> contour_dark;
  design::ScanRange xr{0.001, 1.0, 1000}, yr{0.001, 2.0, 2000};
  OutputOptions contour_out;
  auto* contour_cmd = app.add_subcommand("contour", "c_f and R_C(0) over (eta*p, eta*|beta|^2)");
  auto* cxi = contour_cmd->add_option("--xi", contour_xi, "No-dark-count probability");
  contour_cmd->add_option("--dark-count-prob", contour_dark, "Dark-count probability (= 1 - xi)")->excludes(cxi);
  contour_cmd->add_option("--eta-p-lo", xr.lo, "Lowest eta*p");
  contour_cmd->add_option("--eta-p-hi", xr.hi, "Highest eta*p");
  contour_cmd->add_option("--eta-p-steps", xr.steps, "Number of eta*p values");
  contour_cmd->add_option("--intensity-lo", yr.lo, "Lowest eta*|beta|^2");
  contour_cmd->add_option("--intensity-hi", yr.hi, "Highest eta*|beta|^2");
  contour_cmd->add_option("--intensity-steps", yr.steps, "Number of eta*|beta|^2 values");
  add_output_options(contour_cmd, contour_out);
  contour_cmd->callback([&] {
    action = [&] {
      const double xi = contour_dark ? 1.0 - *contour_dark : contour_xi;
      emit_table(contour_out, ctx.out, io::contour_table(design::contour_grid(xr, yr, xi)));
    };
  });

  // optimize --------------------------------------------------------------
  double opt_eta_p = 0.0, opt_xi = 1.0, opt_x_hi = design::kDefaultIntensityCeiling;
  std::optional<double> opt_dark;
  OutputOptions opt_out;
  auto* opt_cmd = app.add_subcommand("optimize", "Probe intensity minimizing the overlap uncertainty");
  opt_cmd->add_option("--eta-p", opt_eta_p, "Product eta*p")->required();
  auto* oxi = opt_cmd->add_option("--xi", opt_xi, "No-dark-count probability");
  opt_cmd->add_option("--dark-count-prob", opt_dark, "Dark-count probability (= 1 - xi)")->excludes(oxi);
  opt_cmd->add_option("--x-hi", opt_x_hi, "Search ceiling for eta*|beta|^2");
  add_output_options(opt_cmd, opt_out);
  opt_cmd->callback([&] {
    action = [&] {
      const double xi = opt_dark ? 1.0 - *opt_dark : opt_xi;
      const auto r = design::optimal_intensity(opt_eta_p, xi, opt_x_hi);
      const EffectiveParams e{opt_eta_p, r.eta_beta_sq, xi};
      io::Table t;
      t.kind = "optimize";
      t.columns = {"eta_p", "xi", "x_hi", "eta_beta_sq", "figure_of_merit", "c_f", "rc0"};
      t.rows.push_back({io::format_number(opt_eta_p), io::format_number(xi), io::format_number(opt_x_hi),
                        io::format_number(r.eta_beta_sq), io::format_number(r.figure_of_merit),
                        io::format_number(correction_factor(e)), io::format_number(coincidence_rate(e, 0.0))});
      emit_table(opt_out, ctx.out, t);
    };
  });

  // oracle-check ----------------------------------------------------------
  oracle::OracleConfig ocfg;
  std::size_t sweep_size = 100;
  std::uint64_t oracle_seed = 0;
  std::string preset;
  auto* oracle_cmd = app.add_subcommand("oracle-check", "Compare the Fock-space oracle with the closed form");
  oracle_cmd->add_option("--preset", preset, "Named configuration (default: n_max 14, tail 1e-8, 100 tuples)")
      ->check(CLI::IsMember({"default"}));
  oracle_cmd->add_option("--n-max", ocfg.n_max, "Photon-number cutoff per mode");
  oracle_cmd->add_option("--tail-tol", ocfg.tail_tolerance, "Tolerated truncated coherent weight");
  oracle_cmd->add_option("--sweep-size", sweep_size, "Number of random parameter tuples");
  oracle_cmd->add_option("--seed", oracle_seed, "Sweep seed");
  oracle_cmd->callback([&] {
    action = [&] {
      const auto r = oracle::agreement_sweep(sweep_size, oracle_seed, ocfg);
      ctx.out << "tuples = " << r.evaluated << '\n';
      ctx.out << "max |oracle−analytic| = " << io::format_number(r.max_abs_difference) << '\n';
      if (ctx.verbosity > 0) {
        const auto& w = r.worst_params;
        ctx.err << "worst tuple: p=" << io::format_number(w.p) << " eta=" << io::format_number(w.eta)
                << " xi=" << io::format_number(w.xi) << " beta_sq=" << io::format_number(w.beta_sq)
                << " T=" << io::format_number(r.worst_overlap) << '\n';
      }
      const double bound = ocfg.tail_tolerance + 1e-9;
      if (r.max_abs_difference > bound) {
        std::ostringstream os;
        os << "oracle disagreement " << io::format_number(r.max_abs_difference) << " exceeds bound "
           << io::format_number(bound);
        throw NumericalError(os.str());
      }
    };
  });

  // monte-carlo -----------------------------------------------------------
  SetupOptions mc_setup;
  double mc_T = 1.0;
  mc::TrialPlan plan;
  std::size_t replicas = 1;
  OutputOptions mc_out;
  auto* mc_cmd = app.add_subcommand("monte-carlo", "Simulate finite-count dip measurements");
  add_setup_options(mc_cmd, mc_setup);
  mc_cmd->add_option("--overlap", mc_T, "True mode overlap T")->required();
  mc_cmd->add_option("--pulses", plan.n_pulses, "Pulse pairs per setting")->required();
  mc_cmd->add_option("--replicas", replicas, "Independent repetitions")->required();
  mc_cmd->add_option("--seed", plan.seed, "Master seed")->required();
  add_output_options(mc_cmd, mc_out);
  mc_cmd->callback([&] {
    action = [&] {
      const SetupParams s = mc_setup.resolve();
      if (replicas < 1) throw InvalidArgument("--replicas must be >= 1");
      const auto reps = mc::simulate_replicas(s, mc_T, plan, replicas);
      emit_table(mc_out, ctx.out, io::monte_carlo_table(s, mc_T, reps));
      if (ctx.verbosity > 0) {
        std::size_t covered = 0;
        for (const auto& r : reps) covered += std::abs(r.overlap.value - mc_T) <= 2.0 * r.overlap.std_error;
        ctx.err << "2-sigma coverage: " << covered << "/" << reps.size() << '\n';
      }
    };
  });

  // gaussian --------------------------------------------------------------
  GaussianPulseSpec gspec;
  double grid_lo = -6.0, grid_hi = 6.0;
  std::size_t grid_points = 256;
  std::string gkind = "state";
  std::string gout;
  auto* gauss_cmd = app.add_subcommand("gaussian", "Write a Gaussian pure state or probe mode as JSON");
  gauss_cmd->add_option("--center", gspec.center, "Center angular frequency (rad/s)");
  gauss_cmd->add_option("--width", gspec.width, "Spectral width sigma (rad/s)");
  gauss_cmd->add_option("--delay", gspec.delay, "Delay (s)");
  gauss_cmd->add_option("--grid-lo", grid_lo, "Grid start (rad/s)");
  gauss_cmd->add_option("--grid-hi", grid_hi, "Grid end (rad/s)");
  gauss_cmd->add_option("--grid-points", grid_points, "Number of grid points");
  gauss_cmd->add_option("--kind", gkind, "state or mode")->check(CLI::IsMember({"state", "mode"}));
  gauss_cmd->add_option("--out", gout, "Output file (default stdout)");
  gauss_cmd->callback([&] {
    action = [&] {
      const auto u = make_gaussian_mode(gspec, FrequencyGrid::uniform(grid_lo, grid_hi, grid_points));
      emit(OutputOptions{gout, Format::Json}, ctx.out, [&](std::ostream& os) {
        if (gkind == "state")
          io::write_state(pure_state(u), os);
        else
          io::write_mode(u, os);
      });
    };
  });

  // warnings follow the same stderr stream as errors
  struct SinkGuard {
    WarningSink previous;
    ~SinkGuard() { set_warning_sink(std::move(previous)); }
  } guard{set_warning_sink([&err](const std::string& m) { err << "warning: " << m << '\n'; })};

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();
    app.parse(rev);
    ctx.verbosity = verbosity;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }

  try {
    if (action) action();
    return kSuccess;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const NumericalError& e) {
    err << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace homprobe::cli
