// Acceptance harness: eight numbered end-to-end checks with pinned
// tolerances, one PASS/FAIL line each. Exit code is the number of failures,
// so the harness doubles as a CTest gate.

#include <fsl/dynamics.hpp>
#include <fsl/errors.hpp>
#include <fsl/experiments.hpp>
#include <fsl/fockspace.hpp>
#include <fsl/model.hpp>
#include <fsl/params.hpp>
#include <fsl/spectral.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace fsl;

namespace {

int g_failures = 0;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Require a condition; on failure append a diagnostic clause.
  void require(bool ok, const std::string& clause) {
    if (!ok) {
      pass = false;
      if (detail.tellp() > 0) detail << "; ";
      detail << clause;
    }
  }
  void note(const std::string& clause) {
    if (detail.tellp() > 0) detail << "; ";
    detail << clause;
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

template <typename Fn>
void criterion(int index, const char* title, Fn&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    body(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.note(std::string("exception: ") + e.what());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!out.pass) ++g_failures;
  std::printf("CRITERION %d %s  %s%s%s  [%.1f s]\n", index, out.pass ? "PASS" : "FAIL", title,
              out.detail.tellp() > 0 ? " — " : "", out.detail.str().c_str(), secs);
  std::fflush(stdout);
}

int workers() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Largest-population site of a zero mode at a given coupling ratio.
int argmax_site(int N, double Gm, double Go) {
  const ZeroMode zm = zero_mode_analytic(N, Gm, Go);
  Eigen::Index imax;
  zm.amplitudes.cwiseAbs2().maxCoeff(&imax);
  return static_cast<int>(imax) + 1;
}

}  // namespace

int main() {
  const PhysicalParams p;  // reference parameter point

  // 1 — Flat spectrum: every instantaneous eigenvalue equals {0, ±g√j}
  //     throughout the pump.
  criterion(1, "flat instantaneous spectrum {0, +-g sqrt(j)} across the pump", [&](Outcome& o) {
    const int N = 5, samples = 200;
    const double g = p.g();
    const PulseSchedule s{g, p.T_us, PulseFamily::SinCos};
    Eigen::VectorXd expected(2 * N + 1);
    for (int j = 1; j <= N; ++j) {
      expected(N - j) = -g * std::sqrt(double(j));
      expected(N + j) = g * std::sqrt(double(j));
    }
    expected(N) = 0.0;
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
      const double t = p.T_us * double(i) / (samples - 1);
      const auto env = s.envelopes(t);
      const auto snap =
          instantaneous_spectrum(chain_matrix(chain_model(N, env.Gm, env.Go)), t);
      worst = std::max(worst, (snap.eigenvalues - expected).cwiseAbs().maxCoeff());
    }
    o.require(worst <= 1e-10 * g, "max eigenvalue deviation " + fmt(worst) + " > 1e-10*g");
    o.note("max |dev| = " + fmt(worst) + " rad/us over " + std::to_string(samples) + " times");
  });

  // 2 — Analytic zero mode == numerical kernel; odd-site support; argmax walk.
  criterion(2, "analytic zero mode matches the numerical kernel", [&](Outcome& o) {
    double worst = 0.0;
    for (int N = 1; N <= 10; ++N)
      for (const double r : {0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double Gm = r / std::sqrt(1.0 + r * r);
        const double Go = 1.0 / std::sqrt(1.0 + r * r);
        const ZeroMode zm = zero_mode_analytic(N, Gm, Go);
        for (int i = 1; i < 2 * N + 1; i += 2)
          o.require(zm.amplitudes(i) == 0.0, "even-site amplitude nonzero");
        const auto snap =
            instantaneous_spectrum(chain_matrix(chain_model(N, Gm, Go)), 0.0);
        Eigen::VectorXd num = snap.eigenvectors.col(N).real();
        if (num.dot(zm.amplitudes) < 0.0) num = -num;
        worst = std::max(worst, (num - zm.amplitudes).cwiseAbs().maxCoeff());
      }
    o.require(worst <= 1e-10, "kernel mismatch " + fmt(worst) + " > 1e-10");
    o.note("max component mismatch " + fmt(worst));

    // Population maximum walks left edge -> interior -> center -> interior ->
    // right edge as Gm/Go goes 0 -> 1/2 -> 1 -> 2 -> inf (N = 5).
    o.require(argmax_site(5, 0.0, 1.0) == 1, "argmax at ratio 0 not at site 1");
    o.require(argmax_site(5, 1.0, 2.0) == 3, "argmax at ratio 1/2 not at site 3");
    const int mid = argmax_site(5, 1.0, 1.0);
    o.require(mid == 5 || mid == 7, "argmax at ratio 1 not adjacent to the center");
    o.require(argmax_site(5, 2.0, 1.0) == 9, "argmax at ratio 2 not at site 9");
    o.require(argmax_site(5, 1.0, 0.0) == 11, "argmax at ratio inf not at site 11");
  });

  // 3 — Coherent transfer photon numbers at the two reference durations.
  criterion(3, "coherent transfer numbers at T = 8.2 and 18.18 us", [&](Outcome& o) {
    const TransferResult a = run_transfer(p, 5, 8.2, false);
    o.require(std::abs(a.final_n_optical - 4.994) <= 0.010,
              "N_opt(8.2) = " + fmt(a.final_n_optical) + " not 4.994 +- 0.010");
    o.require(a.trajectory.P0.back() > 0.99,
              "P0(8.2) = " + fmt(a.trajectory.P0.back()) + " <= 0.99");
    const TransferResult b = run_transfer(p, 5, 18.18, false);
    o.require(std::abs(b.final_n_optical - 4.999) <= 0.005,
              "N_opt(18.18) = " + fmt(b.final_n_optical) + " not 4.999 +- 0.005");
    o.require(b.trajectory.P0.back() > 0.99,
              "P0(18.18) = " + fmt(b.trajectory.P0.back()) + " <= 0.99");
    o.note("N_opt = " + fmt(a.final_n_optical) + " / " + fmt(b.final_n_optical) +
           ", P0 = " + fmt(a.trajectory.P0.back()) + " / " + fmt(b.trajectory.P0.back()));
  });

  // 4 — Dissipative transfer: final number and interior peak.
  criterion(4, "dissipative transfer with the reference decay rates", [&](Outcome& o) {
    const TransferResult r = dissipative_benchmark(p);
    o.require(std::abs(r.final_n_optical - 4.4) <= 0.1,
              "final N_opt = " + fmt(r.final_n_optical) + " not 4.4 +- 0.1");
    o.require(std::abs(r.trajectory.peak_n_optical - 4.5) <= 0.15,
              "peak N_opt = " + fmt(r.trajectory.peak_n_optical) + " not 4.5 +- 0.15");
    o.require(r.trajectory.peak_time >= 7.0 && r.trajectory.peak_time <= 8.2,
              "peak time " + fmt(r.trajectory.peak_time) + " outside [7.0, 8.2] us");
    o.note("final " + fmt(r.final_n_optical) + ", peak " + fmt(r.trajectory.peak_n_optical) +
           " at t = " + fmt(r.trajectory.peak_time) + " us");
  });

  // 5 — Disorder robustness: 1001-sample Monte Carlo per disorder width.
  criterion(5, "disorder monte carlo robustness", [&](Outcome& o) {
    std::vector<double> means;
    for (const double eta : {0.001, 0.01, 0.05, 0.1}) {
      const DisorderResult r = disorder_monte_carlo(p, eta, eta, 1001, 42, workers(), 2000);
      means.push_back(r.mean);
    }
    const auto [lo, hi] = std::minmax_element(means.begin(), means.end());
    o.require(means.back() > 4.3, "mean at eta = 0.1 is " + fmt(means.back()) + " <= 4.3");
    o.require(*hi - *lo <= 0.05, "spread " + fmt(*hi - *lo) + " > 0.05");
    o.note("means [" + fmt(means[0]) + ", " + fmt(means[1]) + ", " + fmt(means[2]) + ", " +
           fmt(means[3]) + "], spread " + fmt(*hi - *lo));
  });

  // 6 — Fringe maxima near both reference durations, plus ridge persistence
  //     over the full default size-duration grid.
  criterion(6, "fringe maxima and high-fidelity ridges up to N = 32", [&](Outcome& o) {
    const CriticalScan scan = critical_durations(p, 5, 0.05, 30.0, 0.05, workers());
    const auto near_max = [&](double T_ref) {
      double best_fid = -1.0, best_T = 0.0;
      for (std::size_t i = 0; i < scan.maxima_T.size(); ++i)
        if (std::abs(scan.maxima_T[i] - T_ref) <= 0.3 && scan.maxima_fidelity[i] > best_fid) {
          best_fid = scan.maxima_fidelity[i];
          best_T = scan.maxima_T[i];
        }
      return std::pair{best_T, best_fid};
    };
    const auto [T1, F1] = near_max(8.2);
    const auto [T2, F2] = near_max(18.18);
    o.require(F1 > 0.995, "no maximum with fidelity > 0.995 within 0.3 us of 8.2");
    o.require(F2 > 0.995, "no maximum with fidelity > 0.995 within 0.3 us of 18.18");
    o.note("maxima at " + fmt(T1) + " us (F = " + fmt(F1) + ") and " + fmt(T2) +
           " us (F = " + fmt(F2) + ")");

    const HeatmapResult hm =
        fidelity_heatmap(p, default_heatmap_N(), default_heatmap_T(), false, workers());
    double worst_row_max = 1.0;
    int worst_N = 0;
    for (Eigen::Index i = 0; i < hm.fidelity.rows(); ++i) {
      const double row_max = hm.fidelity.row(i).maxCoeff();
      if (row_max < worst_row_max) {
        worst_row_max = row_max;
        worst_N = hm.N_list[static_cast<std::size_t>(i)];
      }
    }
    o.require(worst_row_max > 0.99, "best fidelity for N = " + std::to_string(worst_N) +
                                        " is " + fmt(worst_row_max) + " <= 0.99");
    o.note("weakest ridge: N = " + std::to_string(worst_N) + " at " + fmt(worst_row_max));
  });

  // 7 — Cross-model and integrator consistency.
  criterion(7, "model/chain, master-equation and integrator consistency", [&](Outcome& o) {
    // (a) sector-restricted exchange model == chain matrix.
    double worst_a = 0.0;
    for (const auto& [Gm, Go] : {std::pair{0.37, 0.81}, std::pair{1.3, 0.2}}) {
      const auto basis = CompositeBasis::build(4, BasisMode::FixedSector);
      const OperatorMatrix jc = superatom_jc_hamiltonian(Gm, Go, basis);
      const Eigen::MatrixXd chain = chain_matrix(chain_model(4, Gm, Go));
      worst_a = std::max(worst_a,
                         (jc.mat - chain.cast<std::complex<double>>()).cwiseAbs().maxCoeff());
    }
    o.require(worst_a <= 1e-14, "(a) exchange/chain mismatch " + fmt(worst_a));

    // (b) zero-rate master equation == pure-state propagation.
    PhysicalParams q = p;
    q.Gamma0_MHz = q.kappa_o_MHz = q.kappa_m_MHz = 0.0;
    const TransferResult diss = run_transfer(q, 2, 2.0, true);
    const TransferResult unit = run_transfer(q, 2, 2.0, false);
    const double dev_b = std::abs(diss.final_n_optical - unit.final_n_optical);
    o.require(dev_b <= 1e-8, "(b) zero-rate deviation " + fmt(dev_b));

    // (c) damped empty cavity follows exp(-kappa t).
    PhysicalParams c = p;
    c.kappa_o_MHz = 0.05;
    c.kappa_m_MHz = c.Gamma0_MHz = 0.0;
    const auto basis = CompositeBasis::build(1, BasisMode::AllSectorsUpTo);
    Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(basis.size());
    psi0(basis.ordinal(BasisState{1, 0, AtomLevel::G})) = 1.0;
    RecordOptions rec;
    rec.samples = 7;
    rec.record_sites = false;
    const auto H0 = [](double, Eigen::MatrixXcd& H) { H.setZero(); };
    const Trajectory tr = propagate_lindblad(H0, psi0 * psi0.adjoint(), basis,
                                             standard_collapse_ops(c, basis), 3.0,
                                             3.0 / 3000.0, rec);
    double dev_c = 0.0;
    for (std::size_t i = 0; i < tr.times.size(); ++i)
      dev_c = std::max(dev_c,
                       std::abs(tr.n_optical[i] - std::exp(-c.kappa_o() * tr.times[i])));
    o.require(dev_c <= 1e-6, "(c) cavity-decay deviation " + fmt(dev_c));

    // (d) fourth-order step scaling: halving the step cuts the error ~16x.
    const auto chain_basis = CompositeBasis::build(2, BasisMode::FixedSector);
    const PulseSchedule s{p.g(), 1.0, PulseFamily::SinCos};
    const auto H = [&](double t, Eigen::MatrixXcd& Hm) {
      const auto env = s.envelopes(std::clamp(t, 0.0, 1.0));
      superatom_jc_into(env.Gm, env.Go, chain_basis, Hm);
    };
    Eigen::VectorXcd start = Eigen::VectorXcd::Zero(5);
    start(0) = 1.0;
    RecordOptions rs;
    rs.samples = 1;
    rs.record_sites = false;
    rs.state_snapshots = 1;
    const auto final_state = [&](int steps) {
      return propagate_schrodinger(H, start, chain_basis, 1.0, 1.0 / steps, rs)
          .state_snapshots.back();
    };
    const Eigen::VectorXcd ref = final_state(6400);
    const double ratio =
        (final_state(50) - ref).norm() / (final_state(100) - ref).norm();
    o.require(ratio >= 16.0 * 0.7 && ratio <= 16.0 * 1.3,
              "(d) step-halving ratio " + fmt(ratio) + " outside 16 +- 30%");
    o.note("chain dev " + fmt(worst_a) + ", zero-rate dev " + fmt(dev_b) + ", cavity dev " +
           fmt(dev_c) + ", RK4 ratio " + fmt(ratio));
  });

  // 8 — Two-atom blockade enhancement and the adiabatic-elimination error.
  criterion(8, "blockade sqrt(2) enhancement and elimination validity", [&](Outcome& o) {
    const BlockadeReport b = validate_blockade(0.5, 500.0, 200000);
    const double root2 = std::sqrt(2.0);
    o.require(std::abs(b.enhancement_ratio - root2) <= 0.05 * root2,
              "enhancement " + fmt(b.enhancement_ratio) + " not sqrt(2) +- 5%");
    o.require(b.double_excitation_max < 1e-2,
              "double excitation " + fmt(b.double_excitation_max) + " >= 1e-2");
    const EliminationReport e = validate_adiabatic_elimination(p, 1, 1.0);
    o.require(e.max_deviation < 0.05,
              "elimination deviation " + fmt(e.max_deviation) + " >= 0.05");
    o.require(!e.ratio_warning, "detuning/Rabi ratio unexpectedly below 10");
    o.note("enhancement " + fmt(b.enhancement_ratio) + ", double-excitation peak " +
           fmt(b.double_excitation_max) + ", elimination dev " + fmt(e.max_deviation));
  });

  if (g_failures == 0)
    std::printf("ACCEPTANCE: all 8 criteria passed\n");
  else
    std::printf("ACCEPTANCE: %d criterion(s) FAILED\n", g_failures);
  return g_failures;
}
