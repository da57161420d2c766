// fslsim — command-line driver for the Fock-state-lattice transfer simulator.
//
// Every subcommand writes <command>.csv plus <command>.manifest into the
// output directory (--out, else $FSLT_OUT_DIR, else the current directory)
// and prints a one-line summary to stdout. The manifest records the resolved
// parameters and a `replay=` command line that reproduces the CSV
// byte-for-byte.
//
// Exit codes: 0 success, 2 configuration/usage error, 3 numerical-quality
// failure (integrator norm/trace drift over budget), 1 anything else.

#include <CLI11.hpp>

#include <fsl/csv.hpp>
#include <fsl/dynamics.hpp>
#include <fsl/errors.hpp>
#include <fsl/experiments.hpp>
#include <fsl/fockspace.hpp>
#include <fsl/model.hpp>
#include <fsl/params.hpp>
#include <fsl/spectral.hpp>
#include <fsl/version.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace fs = std::filesystem;
using namespace fsl;

namespace {

// Full-precision rendering for replay arguments; round-trips doubles exactly.
std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string iso_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

int default_workers() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

template <typename T, typename Fn>
std::string join_mapped(const std::vector<T>& xs, const Fn& fn, char sep = ',') {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += fn(xs[i]);
  }
  return out;
}

std::string join_g12(const std::vector<double>& xs) {
  return join_mapped(xs, [](double v) { return io::g12(v); });
}

// ---------------------------------------------------------------------------
// Common options: physical parameters + config file + output directory.

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::optional<double> Na, g_m, g_o, Om1, Om2, Delta, delta, g;
  std::optional<double> kappa_o, kappa_m, Gamma0, T;
  std::optional<int> N;
};

void add_common_options(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--config", c.config_path,
                  "key=value parameter file; explicit flags override its values");
  cmd->add_option("--out", c.out_dir,
                  "output directory (default: $FSLT_OUT_DIR, else current directory)");
  cmd->add_option("--Na", c.Na, "ensemble atom number (dimensionless)");
  cmd->add_option("--g-m-MHz,--g_m_MHz", c.g_m, "single-atom microwave coupling (MHz)");
  cmd->add_option("--g-o-MHz,--g_o_MHz", c.g_o, "single-atom optical coupling (MHz)");
  cmd->add_option("--Omega1-max-MHz,--Omega1_max_MHz", c.Om1,
                  "peak Rabi frequency of the microwave-leg drive (MHz)");
  cmd->add_option("--Omega2-max-MHz,--Omega2_max_MHz", c.Om2,
                  "peak Rabi frequency of the optical-leg drive (MHz)");
  cmd->add_option("--Delta-MHz,--Delta_MHz", c.Delta, "microwave-leg detuning (MHz)");
  cmd->add_option("--delta-MHz,--delta_MHz", c.delta, "optical-leg detuning (MHz)");
  cmd->add_option("--g-MHz,--g_MHz", c.g, "peak collective lattice coupling (MHz)");
  cmd->add_option("--kappa-o-MHz,--kappa_o_MHz", c.kappa_o, "optical cavity decay rate (MHz)");
  cmd->add_option("--kappa-m-MHz,--kappa_m_MHz", c.kappa_m,
                  "microwave resonator decay rate (MHz)");
  cmd->add_option("--Gamma0-MHz,--Gamma0_MHz", c.Gamma0, "superatom decay rate (MHz)");
  cmd->add_option("--T-us,--T_us,--T", c.T, "pump duration (us)");
  cmd->add_option("--N,--N-excitations,--N_excitations", c.N,
                  "excitation number / chain size parameter (dimensionless)");
}

PhysicalParams resolve_params(const CommonOpts& c) {
  PhysicalParams p;
  if (!c.config_path.empty()) p = params_from_file(c.config_path);
  if (c.Na) p.Na = *c.Na;
  if (c.g_m) p.g_m_MHz = *c.g_m;
  if (c.g_o) p.g_o_MHz = *c.g_o;
  if (c.Om1) p.Omega1_max_MHz = *c.Om1;
  if (c.Om2) p.Omega2_max_MHz = *c.Om2;
  if (c.Delta) p.Delta_MHz = *c.Delta;
  if (c.delta) p.delta_MHz = *c.delta;
  if (c.g) p.g_MHz = *c.g;
  if (c.kappa_o) p.kappa_o_MHz = *c.kappa_o;
  if (c.kappa_m) p.kappa_m_MHz = *c.kappa_m;
  if (c.Gamma0) p.Gamma0_MHz = *c.Gamma0;
  if (c.T) p.T_us = *c.T;
  if (c.N) p.N_excitations = *c.N;
  p.validate();
  return p;
}

fs::path resolve_out_dir(const CommonOpts& c) {
  fs::path dir;
  if (!c.out_dir.empty()) {
    dir = c.out_dir;
  } else if (const char* env = std::getenv("FSLT_OUT_DIR"); env && *env) {
    dir = env;
  } else {
    dir = ".";
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

// Resolved physical parameters as replayable flags (full precision).
std::vector<std::string> param_flags(const PhysicalParams& p) {
  return {"--Na",            g17(p.Na),
          "--g-m-MHz",       g17(p.g_m_MHz),
          "--g-o-MHz",       g17(p.g_o_MHz),
          "--Omega1-max-MHz", g17(p.Omega1_max_MHz),
          "--Omega2-max-MHz", g17(p.Omega2_max_MHz),
          "--Delta-MHz",     g17(p.Delta_MHz),
          "--delta-MHz",     g17(p.delta_MHz),
          "--g-MHz",         g17(p.g_MHz),
          "--kappa-o-MHz",   g17(p.kappa_o_MHz),
          "--kappa-m-MHz",   g17(p.kappa_m_MHz),
          "--Gamma0-MHz",    g17(p.Gamma0_MHz),
          "--T-us",          g17(p.T_us),
          "--N-excitations", std::to_string(p.N_excitations)};
}

// ---------------------------------------------------------------------------
// Manifest: run provenance next to every CSV.

struct Manifest {
  std::string command;
  PhysicalParams params;
  std::string master_seed = "none";
  std::vector<std::pair<std::string, std::string>> extras;
  std::vector<std::string> replay_args;  // without the leading program name
  std::string csv_name;
  double wall_time_s = 0.0;

  void write(const fs::path& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open manifest for writing: " + path.string());
    out << "command=" << command << '\n'
        << "version=" << kVersion << '\n'
        << "timestamp=" << iso_timestamp() << '\n'
        << "wall_time_s=" << io::g12(wall_time_s) << '\n'
        << "master_seed=" << master_seed << '\n'
        << render_config(params);
    for (const auto& [k, v] : extras) out << k << '=' << v << '\n';
    out << "csv=" << csv_name << '\n';
    out << "replay=fslsim";
    for (const auto& a : replay_args) out << ' ' << a;
    out << '\n';
    if (!out) throw ConfigError("failed writing manifest: " + path.string());
  }
};

// Shared per-command scaffolding: parameter/out-dir resolution, wall-clock
// timing, and manifest emission around the actual computation.
class Run {
 public:
  Run(std::string command, const CommonOpts& common)
      : start_(std::chrono::steady_clock::now()) {
    man_.command = std::move(command);
    man_.params = resolve_params(common);
    man_.csv_name = man_.command + ".csv";
    out_dir_ = resolve_out_dir(common);
  }

  const PhysicalParams& params() const { return man_.params; }
  fs::path csv_path() const { return out_dir_ / man_.csv_name; }

  void extra(const std::string& key, const std::string& value) {
    man_.extras.emplace_back(key, value);
  }
  void extra(const std::string& key, double value) { extra(key, io::g12(value)); }
  void extra(const std::string& key, int value) { extra(key, std::to_string(value)); }

  void seed(std::uint64_t s) { man_.master_seed = std::to_string(s); }

  void replay(std::vector<std::string> command_args) {
    man_.replay_args.reserve(1 + man_.replay_args.size() + command_args.size());
    man_.replay_args.push_back(man_.command);
    auto pf = param_flags(man_.params);
    man_.replay_args.insert(man_.replay_args.end(), pf.begin(), pf.end());
    man_.replay_args.insert(man_.replay_args.end(), command_args.begin(), command_args.end());
  }

  void finish() {
    man_.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    man_.write(out_dir_ / (man_.command + ".manifest"));
  }

 private:
  Manifest man_;
  fs::path out_dir_;
  std::chrono::steady_clock::time_point start_;
};

// ---------------------------------------------------------------------------
// Trajectory CSV shared by `transfer` and `dissipative`.

void write_trajectory_csv(const fs::path& path, const Trajectory& tr, int N) {
  io::CsvFile csv(path);
  std::vector<std::string> head{"t_us", "n_optical", "n_microwave", "atom_excitation",
                                "P0",   "Pp1",       "Pm1"};
  for (int s = 1; s <= 2 * N + 1; ++s) head.push_back("site_" + std::to_string(s));
  head.push_back("leaked_weight");
  csv.header(head);
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    std::vector<double> row{tr.times[i],  tr.n_optical[i], tr.n_microwave[i],
                            tr.atom_excitation[i], tr.P0[i], tr.Pp1[i], tr.Pm1[i]};
    for (int s = 0; s < 2 * N + 1; ++s) row.push_back(tr.site_populations[i](s));
    row.push_back(tr.leaked_weight[i]);
    csv.row(row);
  }
}

// ---------------------------------------------------------------------------
// Subcommand runners.

void run_spectrum_cmd(const CommonOpts& common, int samples) {
  if (samples < 1) throw ConfigError("--samples must be >= 1");
  Run run("spectrum", common);
  const PhysicalParams& p = run.params();
  const int N = p.N_excitations;
  const PulseSchedule schedule{p.g(), p.T_us, PulseFamily::SinCos};

  io::CsvFile csv(run.csv_path());
  csv.header({"t_us", "k", "eigenvalue_rad_per_us"});
  SpectrumSnapshot prev;
  double max_dev = 0.0;  // largest drift of any level from its t=0 value
  Eigen::VectorXd ref;
  for (int s = 0; s < samples; ++s) {
    const double t = samples == 1 ? 0.0 : p.T_us * static_cast<double>(s) / (samples - 1);
    const auto env = schedule.envelopes(t);
    const SpectrumSnapshot snap = instantaneous_spectrum(
        chain_matrix(chain_model(N, env.Gm, env.Go)), t, s == 0 ? nullptr : &prev);
    if (s == 0)
      ref = snap.eigenvalues;
    else
      max_dev = std::max(max_dev, (snap.eigenvalues - ref).cwiseAbs().maxCoeff());
    for (int k = 0; k < 2 * N + 1; ++k)
      csv.raw_row({io::g12(t), std::to_string(k), io::g12(snap.eigenvalues(k))});
    prev = snap;
  }

  run.extra("samples", samples);
  run.extra("max_level_drift_rad_per_us", max_dev);
  run.replay({"--samples", std::to_string(samples)});
  run.finish();
  std::printf("spectrum: N=%d T_us=%s samples=%d max_level_drift_rad_per_us=%s\n", N,
              io::g12(p.T_us).c_str(), samples, io::g12(max_dev).c_str());
}

void run_zero_mode_cmd(const CommonOpts& common, double ratio, std::optional<double> Gm_MHz,
                       std::optional<double> Go_MHz) {
  if (Gm_MHz.has_value() != Go_MHz.has_value())
    throw ConfigError("provide both --Gm-MHz and --Go-MHz, or neither (then --ratio is used)");
  Run run("zero-mode", common);
  const PhysicalParams& p = run.params();
  const int N = p.N_excitations;

  double gm, go;  // MHz
  if (Gm_MHz) {
    gm = *Gm_MHz;
    go = *Go_MHz;
    if (gm < 0.0 || go < 0.0) throw ConfigError("--Gm-MHz/--Go-MHz must be non-negative");
    if (gm == 0.0 && go == 0.0) throw ConfigError("--Gm-MHz and --Go-MHz cannot both be zero");
  } else {
    if (!(ratio >= 0.0)) throw ConfigError("--ratio must be >= 0");
    if (std::isinf(ratio)) {
      gm = p.g_MHz;
      go = 0.0;
    } else {
      const double norm = std::sqrt(1.0 + ratio * ratio);
      gm = p.g_MHz * ratio / norm;
      go = p.g_MHz / norm;
    }
  }
  const double Gm = kTwoPi * gm, Go = kTwoPi * go;

  const ZeroMode zm = zero_mode_analytic(N, Gm, Go);
  const PhaseClass pc = phase_classify(chain_model(N, Gm, Go));

  io::CsvFile csv(run.csv_path());
  csv.header({"site", "amplitude", "population"});
  int argmax_site = 1;
  double best = -1.0;
  for (int s = 1; s <= 2 * N + 1; ++s) {
    const double a = zm.amplitudes(s - 1);
    const double pop = a * a;
    if (pop > best) {
      best = pop;
      argmax_site = s;
    }
    csv.raw_row({std::to_string(s), io::g12(a), io::g12(pop)});
  }

  run.extra("Gm_MHz", gm);
  run.extra("Go_MHz", go);
  run.extra("center_site", zm.center_site);
  run.extra("argmax_site", argmax_site);
  run.extra("winding", pc.winding);
  run.extra("raw_sign", pc.raw_sign);
  run.replay({"--Gm-MHz", g17(gm), "--Go-MHz", g17(go)});
  run.finish();
  std::printf(
      "zero-mode: N=%d Gm_MHz=%s Go_MHz=%s center_site=%s argmax_site=%d winding=%d "
      "raw_sign=%d\n",
      N, io::g12(gm).c_str(), io::g12(go).c_str(), io::g12(zm.center_site).c_str(), argmax_site,
      pc.winding, pc.raw_sign);
}

void run_transfer_like_cmd(const std::string& name, const CommonOpts& common, bool dissipative,
                           int steps, int samples) {
  if (steps < 1) throw ConfigError("--steps must be >= 1");
  if (samples < 1) throw ConfigError("--samples must be >= 1");
  Run run(name, common);
  const PhysicalParams& p = run.params();

  TransferOptions opt;
  opt.steps = steps;
  opt.samples = samples;
  const TransferResult r = run_transfer(p, p.N_excitations, p.T_us, dissipative, opt);

  write_trajectory_csv(run.csv_path(), r.trajectory, r.N);

  const double drift =
      dissipative ? r.trajectory.final_trace_drift : r.trajectory.final_norm_drift;
  run.extra("dissipative", static_cast<int>(dissipative));
  run.extra("steps", steps);
  run.extra("samples", samples);
  run.extra("final_n_optical", r.final_n_optical);
  run.extra("fidelity", r.fidelity);
  run.extra("peak_n_optical", r.trajectory.peak_n_optical);
  run.extra("peak_time_us", r.trajectory.peak_time);
  run.extra(dissipative ? "final_trace_drift" : "final_norm_drift", drift);
  std::vector<std::string> args{"--steps", std::to_string(steps), "--samples",
                                std::to_string(samples)};
  if (name == "transfer" && dissipative) args.emplace_back("--dissipative");
  run.replay(args);
  run.finish();
  std::printf(
      "%s: N=%d T_us=%s dissipative=%d final_n_optical=%s fidelity=%s peak_n_optical=%s "
      "peak_time_us=%s\n",
      name.c_str(), r.N, io::g12(r.T).c_str(), static_cast<int>(dissipative),
      io::g12(r.final_n_optical).c_str(), io::g12(r.fidelity).c_str(),
      io::g12(r.trajectory.peak_n_optical).c_str(), io::g12(r.trajectory.peak_time).c_str());
}

void run_disorder_cmd(const CommonOpts& common, std::optional<double> eta,
                      std::optional<double> eta1, std::optional<double> eta2,
                      const std::vector<double>& eta_grid, int samples, std::uint64_t seed,
                      int steps, bool mirror, int workers) {
  if (samples < 1) throw ConfigError("--samples must be >= 1");
  if (steps < 1) throw ConfigError("--steps must be >= 1");
  if (workers < 1) throw ConfigError("--workers must be >= 1");
  Run run("disorder", common);
  const PhysicalParams& p = run.params();

  std::vector<std::pair<double, double>> cases;
  if (!eta_grid.empty()) {
    if (eta || eta1 || eta2)
      throw ConfigError("--eta-grid cannot be combined with --eta/--eta1/--eta2");
    for (double v : eta_grid) cases.emplace_back(v, v);
  } else {
    const double base = eta.value_or(0.1);
    cases.emplace_back(eta1.value_or(base), eta2.value_or(base));
  }

  io::CsvFile csv(run.csv_path());
  csv.header({"eta1", "eta2", "mean_n_optical", "stderr", "samples", "seed"});
  std::vector<DisorderResult> results;
  results.reserve(cases.size());
  for (const auto& [e1, e2] : cases) {
    DisorderResult r = disorder_monte_carlo(p, e1, e2, samples, seed, workers, steps, mirror);
    csv.raw_row({io::g12(r.eta1), io::g12(r.eta2), io::g12(r.mean), io::g12(r.stderr_),
                 std::to_string(r.samples), std::to_string(r.master_seed)});
    results.push_back(std::move(r));
  }

  run.seed(seed);
  run.extra("samples", samples);
  run.extra("steps", steps);
  run.extra("mirror", static_cast<int>(mirror));
  run.extra("rows", static_cast<int>(results.size()));
  std::vector<std::string> args;
  if (!eta_grid.empty()) {
    args = {"--eta-grid", join_mapped(eta_grid, g17)};
  } else {
    args = {"--eta1", g17(cases[0].first), "--eta2", g17(cases[0].second)};
  }
  args.insert(args.end(), {"--samples", std::to_string(samples), "--seed", std::to_string(seed),
                           "--steps", std::to_string(steps)});
  if (mirror) args.emplace_back("--mirror");
  run.replay(args);
  run.finish();
  for (const DisorderResult& r : results)
    std::printf("disorder: eta1=%s eta2=%s mean_n_optical=%s stderr=%s samples=%d seed=%llu\n",
                io::g12(r.eta1).c_str(), io::g12(r.eta2).c_str(), io::g12(r.mean).c_str(),
                io::g12(r.stderr_).c_str(), r.samples,
                static_cast<unsigned long long>(r.master_seed));
}

void run_heatmap_cmd(const CommonOpts& common, const std::vector<int>& N_list_in,
                     const std::vector<double>& T_list_in, bool dissipative, int workers) {
  if (workers < 1) throw ConfigError("--workers must be >= 1");
  Run run("heatmap", common);
  const PhysicalParams& p = run.params();
  const std::vector<int> N_list = N_list_in.empty() ? default_heatmap_N() : N_list_in;
  const std::vector<double> T_list = T_list_in.empty() ? default_heatmap_T() : T_list_in;

  const HeatmapResult r = fidelity_heatmap(p, N_list, T_list, dissipative, workers);

  io::CsvFile csv(run.csv_path());
  csv.header({"N", "T_us", "fidelity"});
  double max_fid = 0.0, min_row_max = 1.0;
  for (std::size_t i = 0; i < N_list.size(); ++i) {
    double row_max = 0.0;
    for (std::size_t j = 0; j < T_list.size(); ++j) {
      const double f = r.fidelity(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      row_max = std::max(row_max, f);
      csv.raw_row({std::to_string(N_list[i]), io::g12(T_list[j]), io::g12(f)});
    }
    max_fid = std::max(max_fid, row_max);
    min_row_max = std::min(min_row_max, row_max);
  }

  run.extra("dissipative", static_cast<int>(dissipative));
  run.extra("N_list", join_mapped(N_list, [](int n) { return std::to_string(n); }));
  run.extra("T_list_us", join_g12(T_list));
  run.extra("max_fidelity", max_fid);
  run.extra("min_row_max_fidelity", min_row_max);
  std::vector<std::string> args{"--N-list", join_mapped(N_list, [](int n) { return std::to_string(n); }),
                                "--T-list-us", join_mapped(T_list, g17)};
  if (dissipative) args.emplace_back("--dissipative");
  run.replay(args);
  run.finish();
  std::printf(
      "heatmap: N_rows=%zu T_cols=%zu dissipative=%d max_fidelity=%s min_row_max_fidelity=%s\n",
      N_list.size(), T_list.size(), static_cast<int>(dissipative), io::g12(max_fid).c_str(),
      io::g12(min_row_max).c_str());
}

void run_critical_t_cmd(const CommonOpts& common, double T_min, double T_max, double resolution,
                        int workers) {
  if (workers < 1) throw ConfigError("--workers must be >= 1");
  Run run("critical-t", common);
  const PhysicalParams& p = run.params();

  const CriticalScan scan =
      critical_durations(p, p.N_excitations, T_min, T_max, resolution, workers);

  io::CsvFile csv(run.csv_path());
  csv.header({"T_us", "fidelity", "local_max"});
  std::size_t m = 0;
  for (std::size_t i = 0; i < scan.T_grid.size(); ++i) {
    const bool is_max = m < scan.maxima_T.size() && scan.T_grid[i] == scan.maxima_T[m];
    if (is_max) ++m;
    csv.raw_row({io::g12(scan.T_grid[i]), io::g12(scan.fidelity[i]), is_max ? "1" : "0"});
  }

  run.extra("T_min_us", T_min);
  run.extra("T_max_us", T_max);
  run.extra("resolution_us", resolution);
  run.extra("maxima_T_us", join_g12(scan.maxima_T));
  run.extra("maxima_fidelity", join_g12(scan.maxima_fidelity));
  run.extra("theory_T_us", join_g12(scan.theory_T));
  run.replay({"--T-min-us", g17(T_min), "--T-max-us", g17(T_max), "--resolution-us",
              g17(resolution)});
  run.finish();
  std::printf("critical-t: N=%d points=%zu maxima_T_us=%s theory_T_us=%s\n", p.N_excitations,
              scan.T_grid.size(), join_g12(scan.maxima_T).c_str(),
              join_g12(scan.theory_T).c_str());
}

void run_validate_elimination_cmd(const CommonOpts& common, int n_max, double detuning_scale) {
  Run run("validate-elimination", common);
  const PhysicalParams& p = run.params();

  const EliminationReport rep = validate_adiabatic_elimination(p, n_max, detuning_scale);

  io::CsvFile csv(run.csv_path());
  csv.header({"t_us", "deviation"});
  for (std::size_t i = 0; i < rep.t.size(); ++i) csv.row({rep.t[i], rep.deviation[i]});

  run.extra("n_max", n_max);
  run.extra("detuning_scale", detuning_scale);
  run.extra("max_deviation", rep.max_deviation);
  run.extra("ratio_warning", static_cast<int>(rep.ratio_warning));
  run.replay({"--n-max", std::to_string(n_max), "--detuning-scale", g17(detuning_scale)});
  run.finish();
  if (rep.ratio_warning)
    std::fprintf(stderr,
                 "warning: detuning below 10x the strongest coupling; the two-level reduction "
                 "is outside its validity regime\n");
  std::printf("validate-elimination: n_max=%d detuning_scale=%s max_deviation=%s ratio_warning=%d\n",
              n_max, io::g12(detuning_scale).c_str(), io::g12(rep.max_deviation).c_str(),
              static_cast<int>(rep.ratio_warning));
}

void run_validate_blockade_cmd(const CommonOpts& common, double drive, double V, int steps) {
  Run run("validate-blockade", common);

  const BlockadeReport rep = validate_blockade(drive, V, steps);

  io::CsvFile csv(run.csv_path());
  csv.header({"t_us", "p_gg", "p_single", "p_double"});
  for (std::size_t i = 0; i < rep.t.size(); ++i)
    csv.row({rep.t[i], rep.p_gg[i], rep.p_single[i], rep.p_double[i]});

  run.extra("drive_MHz", drive);
  run.extra("V_MHz", V);
  run.extra("steps", steps);
  run.extra("enhancement_ratio", rep.enhancement_ratio);
  run.extra("double_excitation_max", rep.double_excitation_max);
  run.replay({"--drive-MHz", g17(drive), "--V-MHz", g17(V), "--steps", std::to_string(steps)});
  run.finish();
  std::printf("validate-blockade: drive_MHz=%s V_MHz=%s enhancement_ratio=%s "
              "double_excitation_max=%s\n",
              io::g12(drive).c_str(), io::g12(V).c_str(), io::g12(rep.enhancement_ratio).c_str(),
              io::g12(rep.double_excitation_max).c_str());
}

void run_blockade_radius_cmd(const CommonOpts& common, double C6) {
  Run run("blockade-radius", common);
  const PhysicalParams& p = run.params();
  const int Na = static_cast<int>(std::llround(p.Na));

  // The sixth root makes the 2pi factors cancel, so plain-MHz inputs are fine.
  const double Rb = blockade_radius(C6, p.Delta_MHz, Na, p.g_m_MHz, p.Omega1_max_MHz);

  io::CsvFile csv(run.csv_path());
  csv.header({"C6_MHz_um6", "Delta_MHz", "Na", "g_m_MHz", "Omega1_max_MHz", "R_b_um"});
  csv.raw_row({io::g12(C6), io::g12(p.Delta_MHz), std::to_string(Na), io::g12(p.g_m_MHz),
               io::g12(p.Omega1_max_MHz), io::g12(Rb)});

  run.extra("C6_MHz_um6", C6);
  run.extra("R_b_um", Rb);
  run.replay({"--C6-MHz-um6", g17(C6)});
  run.finish();
  std::printf("blockade-radius: C6_MHz_um6=%s Na=%d R_b_um=%s\n", io::g12(C6).c_str(), Na,
              io::g12(Rb).c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "fslsim — microwave-to-optical state-transfer simulator on the Fock-state lattice.\n"
      "Each subcommand writes <command>.csv and <command>.manifest into the output\n"
      "directory and prints a one-line summary. Frequencies are entered in MHz\n"
      "(ordinary frequency; converted to angular rad/us internally), times in us."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  // --- spectrum ---
  auto* sc_spectrum = app.add_subcommand(
      "spectrum", "Instantaneous chain eigenvalues sampled across the pump duration");
  CommonOpts c_spectrum;
  add_common_options(sc_spectrum, c_spectrum);
  int spectrum_samples = 200;
  sc_spectrum->add_option("--samples", spectrum_samples, "sampled times across [0, T] (count)");
  sc_spectrum->callback([&] { run_spectrum_cmd(c_spectrum, spectrum_samples); });

  // --- zero-mode ---
  auto* sc_zero = app.add_subcommand(
      "zero-mode", "Analytic zero-energy defect mode profile and hopping-phase classification");
  CommonOpts c_zero;
  add_common_options(sc_zero, c_zero);
  double zero_ratio = 1.0;
  std::optional<double> zero_Gm, zero_Go;
  sc_zero->add_option("--ratio", zero_ratio,
                      "coupling ratio Gm/Go; Gm = g*r/sqrt(1+r^2), Go = g/sqrt(1+r^2)");
  sc_zero->add_option("--Gm-MHz,--Gm_MHz", zero_Gm, "explicit collective microwave coupling (MHz)");
  sc_zero->add_option("--Go-MHz,--Go_MHz", zero_Go, "explicit collective optical coupling (MHz)");
  sc_zero->callback([&] { run_zero_mode_cmd(c_zero, zero_ratio, zero_Gm, zero_Go); });

  // --- transfer ---
  auto* sc_tr = app.add_subcommand(
      "transfer", "Single state transfer through the pump (unitary by default)");
  CommonOpts c_tr;
  add_common_options(sc_tr, c_tr);
  bool tr_dissipative = false;
  int tr_steps = 20000, tr_samples = 500;
  sc_tr->add_flag("--dissipative", tr_dissipative, "propagate the master equation with decay");
  sc_tr->add_option("--steps", tr_steps, "fixed integrator steps (count)");
  sc_tr->add_option("--samples", tr_samples, "trajectory rows to record (count)");
  sc_tr->callback(
      [&] { run_transfer_like_cmd("transfer", c_tr, tr_dissipative, tr_steps, tr_samples); });

  // --- dissipative ---
  auto* sc_di = app.add_subcommand(
      "dissipative", "Dissipative reference run (master equation with the standard decay set)");
  CommonOpts c_di;
  add_common_options(sc_di, c_di);
  int di_steps = 20000, di_samples = 500;
  sc_di->add_option("--steps", di_steps, "fixed integrator steps (count)");
  sc_di->add_option("--samples", di_samples, "trajectory rows to record (count)");
  sc_di->callback([&] { run_transfer_like_cmd("dissipative", c_di, true, di_steps, di_samples); });

  // --- disorder ---
  auto* sc_dis = app.add_subcommand(
      "disorder", "Monte Carlo over envelope-peak disorder (dissipative propagation)");
  CommonOpts c_dis;
  add_common_options(sc_dis, c_dis);
  std::optional<double> dis_eta, dis_eta1, dis_eta2;
  std::vector<double> dis_grid;
  int dis_samples = 1001, dis_steps = 2000;
  std::uint64_t dis_seed = 42;
  bool dis_mirror = false;
  int dis_workers = default_workers();
  sc_dis->add_option("--eta", dis_eta, "disorder half-width for both envelopes (fraction)");
  sc_dis->add_option("--eta1", dis_eta1, "microwave-envelope disorder half-width (fraction)");
  sc_dis->add_option("--eta2", dis_eta2, "optical-envelope disorder half-width (fraction)");
  sc_dis->add_option("--eta-grid", dis_grid, "comma-separated list of eta values (eta1=eta2)")
      ->delimiter(',');
  sc_dis->add_option("--samples", dis_samples, "Monte Carlo samples per eta (count)");
  sc_dis->add_option("--seed", dis_seed, "master seed for the counter-based sampler");
  sc_dis->add_option("--steps", dis_steps, "integrator steps per sample (count)");
  sc_dis->add_flag("--mirror", dis_mirror, "negate every disorder draw (sign-flip check)");
  sc_dis->add_option("--workers", dis_workers, "worker threads (does not affect results)");
  sc_dis->callback([&] {
    run_disorder_cmd(c_dis, dis_eta, dis_eta1, dis_eta2, dis_grid, dis_samples, dis_seed,
                     dis_steps, dis_mirror, dis_workers);
  });

  // --- heatmap ---
  auto* sc_hm = app.add_subcommand(
      "heatmap", "Last-site transfer fidelity over an N x T grid");
  CommonOpts c_hm;
  add_common_options(sc_hm, c_hm);
  std::vector<int> hm_N;
  std::vector<double> hm_T;
  bool hm_dissipative = false;
  int hm_workers = default_workers();
  sc_hm->add_option("--N-list,--N_list", hm_N, "comma-separated N values (default 2,4,...,32)")
      ->delimiter(',');
  sc_hm
      ->add_option("--T-list-us,--T_list_us", hm_T,
                   "comma-separated durations in us (default 1,2,...,150)")
      ->delimiter(',');
  sc_hm->add_flag("--dissipative", hm_dissipative, "use the master equation for every cell");
  sc_hm->add_option("--workers", hm_workers, "worker threads (does not affect results)");
  sc_hm->callback([&] { run_heatmap_cmd(c_hm, hm_N, hm_T, hm_dissipative, hm_workers); });

  // --- critical-t ---
  auto* sc_ct = app.add_subcommand(
      "critical-t", "Scan transfer fidelity vs pump duration and extract local maxima");
  CommonOpts c_ct;
  add_common_options(sc_ct, c_ct);
  double ct_min = 0.05, ct_max = 30.0, ct_res = 0.05;
  int ct_workers = default_workers();
  sc_ct->add_option("--T-min-us,--T_min_us", ct_min, "scan start (us)");
  sc_ct->add_option("--T-max-us,--T_max_us", ct_max, "scan end (us)");
  sc_ct->add_option("--resolution-us,--resolution_us", ct_res, "scan step, in (0, 0.05] (us)");
  sc_ct->add_option("--workers", ct_workers, "worker threads (does not affect results)");
  sc_ct->callback([&] { run_critical_t_cmd(c_ct, ct_min, ct_max, ct_res, ct_workers); });

  // --- validate-elimination ---
  auto* sc_ve = app.add_subcommand(
      "validate-elimination",
      "Compare the four-level single-atom model against its two-level reduction");
  CommonOpts c_ve;
  add_common_options(sc_ve, c_ve);
  int ve_nmax = 1;
  double ve_scale = 1.0;
  sc_ve->add_option("--n-max,--n_max", ve_nmax, "photon cutoff per mode (count)");
  sc_ve->add_option("--detuning-scale,--detuning_scale", ve_scale,
                    "multiply both detunings to probe the elimination limit");
  sc_ve->callback([&] { run_validate_elimination_cmd(c_ve, ve_nmax, ve_scale); });

  // --- validate-blockade ---
  auto* sc_vb = app.add_subcommand(
      "validate-blockade",
      "Two driven atoms with an interaction shift: collective Rabi enhancement");
  CommonOpts c_vb;
  add_common_options(sc_vb, c_vb);
  double vb_drive = 0.5, vb_V = 500.0;
  int vb_steps = 200000;
  sc_vb->add_option("--drive-MHz,--drive_MHz", vb_drive, "per-atom drive amplitude (MHz)");
  sc_vb->add_option("--V-MHz,--V_MHz", vb_V, "doubly-excited-state interaction shift (MHz)");
  sc_vb->add_option("--steps", vb_steps, "integrator steps over the scan window (count)");
  sc_vb->callback([&] { run_validate_blockade_cmd(c_vb, vb_drive, vb_V, vb_steps); });

  // --- blockade-radius ---
  auto* sc_br = app.add_subcommand(
      "blockade-radius",
      "Blockade radius from a caller-supplied van-der-Waals C6 coefficient");
  CommonOpts c_br;
  add_common_options(sc_br, c_br);
  double br_C6 = 0.0;
  sc_br->add_option("--C6-MHz-um6,--C6_MHz_um6", br_C6, "van-der-Waals coefficient (MHz um^6)")
      ->required();
  sc_br->callback([&] { run_blockade_radius_cmd(c_br, br_C6); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const NumericsError& e) {
    std::fprintf(stderr, "numerics error: %s\n", e.what());
    return 3;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 1;
  }
  return 0;
}
