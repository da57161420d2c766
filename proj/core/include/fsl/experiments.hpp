#pragma once

// Scenario runners: single transfers (unitary / dissipative), critical-time
// scans, disorder Monte Carlo, size-duration fidelity heatmaps, and the
// validation harnesses for the adiabatic elimination and the two-atom
// blockade enhancement.

#include "fsl/dynamics.hpp"
#include "fsl/params.hpp"

#include <cstdint>
#include <vector>

namespace fsl {

struct TransferOptions {
  int steps = 20000;        // RK4 steps (default step T/20000)
  int samples = 500;        // trajectory observable samples
  bool track_eigen = true;  // record P0/P+1/P-1
  double scale_m = 1.0;     // envelope-peak disorder factors (1 + eps)
  double scale_o = 1.0;
  int state_snapshots = 0;
};

struct TransferResult {
  int N = 0;
  double T = 0.0;
  bool dissipative = false;
  double final_n_optical = 0.0;
  double fidelity = 0.0;  // population of site 2N+1 at t = T
  Trajectory trajectory;
};

// Pump |0,N,G> through the schedule; unitary runs use the fixed-sector basis,
// dissipative runs the sector-block propagator with the standard collapse set.
TransferResult run_transfer(const PhysicalParams& p, int N, double T_us,
                            bool dissipative, const TransferOptions& opt = {});

// Full-resolution dissipative reference run at the parameter defaults
// (N, T taken from `p`), trajectory recorded with eigen populations.
TransferResult dissipative_benchmark(const PhysicalParams& p);

// Unitary last-site fidelity scan over T with local-maximum extraction and the
// theoretical critical grid T_n = 2 pi n / g for comparison (the two are
// reported side by side, never asserted equal). resolution must be in
// (0, 0.05] us; an empty range raises ConfigError.
struct CriticalScan {
  std::vector<double> T_grid;
  std::vector<double> fidelity;
  std::vector<double> maxima_T;       // scan-found local maxima
  std::vector<double> maxima_fidelity;
  std::vector<double> theory_T;       // 2 pi n / g inside the range
};
CriticalScan critical_durations(const PhysicalParams& p, int N, double T_min,
                                double T_max, double resolution, int workers = 1);

// Monte Carlo over envelope-peak disorder: sample i draws (eps1, eps2)
// uniformly from [-eta1, eta1] x [-eta2, eta2] with counter-based per-sample
// seeds and propagates dissipatively with Gm -> g(1+eps1) sin, Go -> g(1+eps2) cos.
struct DisorderResult {
  double eta1 = 0.0, eta2 = 0.0;
  double mean = 0.0;      // mean final optical photon number
  double stderr_ = 0.0;   // sample standard error
  int samples = 0;
  std::uint64_t master_seed = 0;
  std::vector<double> values;  // per-sample results, in sample order
};
// mirror_draws negates every (eps1, eps2) draw: the disorder distribution is
// symmetric, so mirrored and plain runs must agree within sampling error.
DisorderResult disorder_monte_carlo(const PhysicalParams& p, double eta1, double eta2,
                                    int samples = 1001, std::uint64_t master_seed = 42,
                                    int workers = 1, int steps = 2000,
                                    bool mirror_draws = false);

// Last-site fidelity over an N x T grid (row-major in N). Unitary by default;
// the dissipative flag switches to the master-equation propagator with the
// configured rates.
struct HeatmapResult {
  std::vector<int> N_list;
  std::vector<double> T_list;
  Eigen::MatrixXd fidelity;  // N_list.size() x T_list.size()
  bool dissipative = false;
};
HeatmapResult fidelity_heatmap(const PhysicalParams& p, const std::vector<int>& N_list,
                               const std::vector<double>& T_list, bool dissipative,
                               int workers = 1);
std::vector<int> default_heatmap_N();        // {2, 4, ..., 32}
std::vector<double> default_heatmap_T();     // {1, 2, ..., 150} us

// Propagate the four-level and two-level single-atom models side by side from
// |g; 0_opt, 1_mw> over one pump period and report the largest population
// difference on the shared states. detuning_scale multiplies both detunings
// (couplings fixed) to probe the elimination limit.
struct EliminationReport {
  double max_deviation = 0.0;
  bool ratio_warning = false;  // detuning/Rabi ratio below 10
  std::vector<double> t;          // sampled times
  std::vector<double> deviation;  // max shared-state deviation at each time
};
EliminationReport validate_adiabatic_elimination(const PhysicalParams& p, int n_max = 1,
                                                 double detuning_scale = 1.0);

// Two driven atoms {g, r2} with a van-der-Waals shift V on |r2 r2>; reports
// the collective Rabi enhancement over a single atom (from first-minimum
// times of the ground population) and the peak double-excitation population.
// drive = 0 gives no dynamics (enhancement_ratio is NaN).
struct BlockadeReport {
  double enhancement_ratio = 0.0;
  double double_excitation_max = 0.0;
  std::vector<double> t;            // us
  std::vector<double> p_gg;         // both atoms in g
  std::vector<double> p_single;     // exactly one excitation (gr + rg)
  std::vector<double> p_double;     // both excited (rr)
};
BlockadeReport validate_blockade(double drive_MHz, double V_MHz, int steps = 200000);

// Theoretical critical durations 2 pi n / g (rad/us) within (T_min, T_max].
std::vector<double> theoretical_critical_grid(double g_rad, double T_min, double T_max);

// Step-count policy for chain sweeps: max(2000, ceil(T * g * sqrt(N) / 0.02)),
// keeping the per-step phase small enough that norm drift stays well below
// the 1e-6 contract even for the largest grid cells.
int chain_steps_policy(int N, double g_rad, double T);

// Tridiagonal RK4 kernel: |<site 2N+1 | psi(T)>|^2 for the pump started from
// site 1 (throws NumericsError on norm drift > 1e-6).
double unitary_chain_fidelity(int N, double g_peak, double T, int steps);

}  // namespace fsl
