#pragma once

// Time propagation: classical fixed-step RK4 for the time-dependent
// Schrödinger equation (pure states) and the Lindblad master equation
// (density matrices), plus observable extraction. No renormalization is ever
// applied — norm/trace drift is the convergence diagnostic, and drift beyond
// 1e-6 at completion raises NumericsError ("step too coarse").

#include "fsl/fockspace.hpp"
#include "fsl/model.hpp"
#include "fsl/params.hpp"
#include "fsl/spectral.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace fsl {

// Fills H (preallocated, correct dimension) with the Hamiltonian at time t.
using HamiltonianBuilder = std::function<void(double t, Eigen::MatrixXcd& H)>;

struct RecordOptions {
  int samples = 500;        // observable samples across [0, T], endpoints included
  bool record_sites = true; // per-site populations of the top sector
  bool track_eigen = false; // P0 / P+1 / P-1 against the instantaneous spectrum
  // Top-sector Hamiltonian used for eigen tracking (dimension 2N+1). Defaults
  // to H_of_t itself on FixedSector bases.
  HamiltonianBuilder eigen_hamiltonian;
  int state_snapshots = 0;  // keep this many evenly spaced full states
};

struct Trajectory {
  std::vector<double> times;             // us
  std::vector<double> n_optical;         // <a'a>
  std::vector<double> n_microwave;       // <b'b>
  std::vector<double> atom_excitation;   // <|R><R|>
  std::vector<double> P0, Pp1, Pm1;      // zero / first +- eigenmode populations
  std::vector<double> leaked_weight;     // population below the top sector
  std::vector<Eigen::VectorXd> site_populations;

  std::vector<double> snapshot_times;
  std::vector<Eigen::VectorXcd> state_snapshots;    // pure states
  std::vector<Eigen::MatrixXcd> density_snapshots;  // density matrices

  double final_norm_drift = 0.0;   // | ||psi|| - 1 |   (unitary runs)
  double final_trace_drift = 0.0;  // | tr(rho) - 1 |   (dissipative runs)

  // Running maximum of <a'a> checked at every integrator step.
  double peak_n_optical = 0.0;
  double peak_time = 0.0;
};

struct Observables {
  double n_optical = 0.0;
  double n_microwave = 0.0;
  double atom_excitation = 0.0;
  double leaked_weight = 0.0;          // zero for fixed-sector pure states
  Eigen::VectorXd site_populations;    // top-sector sites 1..2N+1
};

Observables observables(const Eigen::VectorXcd& psi, const CompositeBasis& basis);
Observables observables(const Eigen::MatrixXcd& rho, const CompositeBasis& basis);

// |<phi_k|psi>|^2 for every column of the snapshot (dimension must match).
Eigen::VectorXd eigen_populations(const Eigen::VectorXcd& psi, const SpectrumSnapshot& snap);

// i dpsi/dt = H(t) psi, RK4 with midpoint Hamiltonian evaluations.
// `step` is the nominal step in us; the actual step is T/round(T/step).
Trajectory propagate_schrodinger(const HamiltonianBuilder& H_of_t,
                                 const Eigen::VectorXcd& psi0,
                                 const CompositeBasis& basis,
                                 double T, double step,
                                 const RecordOptions& rec = {});

// drho/dt = -i[H, rho] + sum_c (2 c rho c' - c'c rho - rho c'c)/2 with the
// collapse convention c = sqrt(rate) * jump. Rejects sector-leaking collapse
// operators (std::domain_error); trace drift > 1e-6 raises NumericsError.
Trajectory propagate_lindblad(const HamiltonianBuilder& H_of_t,
                              const Eigen::MatrixXcd& rho0,
                              const CompositeBasis& basis,
                              const std::vector<OperatorMatrix>& collapse,
                              double T, double step,
                              const RecordOptions& rec = {});

// { sqrt(Gamma0)|G><R|, sqrt(kappa_o) a, sqrt(kappa_m) b } on `basis`.
std::vector<OperatorMatrix> standard_collapse_ops(const PhysicalParams& p,
                                                  const CompositeBasis& basis);

// ---------------------------------------------------------------------------
// Dissipative fast path. The exchange Hamiltonian conserves total excitation
// and every collapse operator lowers it by exactly one, so a density matrix
// that starts sector-block-diagonal stays sector-block-diagonal: only the
// (2k+1)x(2k+1) diagonal blocks are stored and evolved, and the commutator
// uses the tridiagonal structure of each sector block. This is an exact
// restructuring of propagate_lindblad for this model class (equivalence is
// enforced by tests), not an approximation.
class SectorBlockLindblad {
 public:
  SectorBlockLindblad(int N, double Gamma0, double kappa_o, double kappa_m);

  struct Result {
    double final_n_optical = 0.0;
    double final_fidelity = 0.0;  // population of site 2N+1 at t = T
    double trace_drift = 0.0;
    double peak_n_optical = 0.0;  // checked at every step
    double peak_time = 0.0;
    Trajectory trajectory;        // filled per RecordOptions
  };

  // Initial state |0, N, G> (all photons in the microwave resonator). The two
  // envelope peaks are scaled independently by scale_m / scale_o.
  Result run(const PulseSchedule& schedule, double scale_m, double scale_o,
             int steps, const RecordOptions& rec = {});

 private:
  int N_;
  double Gamma0_, kappa_o_, kappa_m_;

  struct Sector {
    int dim = 0;
    Eigen::VectorXd n_opt, n_mw, atom;  // diagonal observable weights
    Eigen::VectorXd decay;              // Gamma0*m + kappa_o*n1 + kappa_m*n2
    // Lowering maps into sector k-1: local source -> local target + weight.
    struct Feed {
      double rate;
      std::vector<int> dst;      // -1 when the op annihilates the state
      std::vector<double> w;
    };
    std::vector<Feed> feeds;
  };
  std::vector<Sector> sectors_;
  mutable std::vector<double> hop_;  // per-sector hopping scratch (length 2N)

  using Blocks = std::vector<Eigen::MatrixXcd>;
  void derivative(double Gm, double Go, const Blocks& rho, Blocks& out) const;
  double block_n_optical(const Blocks& rho) const;
};

}  // namespace fsl
