#pragma once

// Hamiltonian builders: the dual-mode (microwave + optical) exchange model of
// a driven superatom, its fixed-sector chain form with sqrt-scaled alternating
// hoppings, the sin/cos pulse schedule, the collective-coupling map, and the
// single-atom four-level / two-level validation models.

#include "fsl/fockspace.hpp"
#include "fsl/params.hpp"

#include <array>
#include <utility>
#include <vector>

namespace fsl {

enum class PulseFamily { SinCos };

// Gm(t) = g_peak * sin(pi t / 2T), Go(t) = g_peak * cos(pi t / 2T);
// Gm^2 + Go^2 = g_peak^2 at every t.
struct PulseSchedule {
  double g_peak = 0.0;  // rad/us
  double T = 0.0;       // us
  PulseFamily family = PulseFamily::SinCos;

  struct Envelopes {
    double Gm, Go;  // rad/us
  };
  // Throws std::domain_error outside [0, T] or for T <= 0.
  Envelopes envelopes(double t) const;
};

// sqrt(Na) * g_single; unit-agnostic. Throws std::domain_error for Na < 1.
double collective_coupling(int Na, double g_single);

// Alternating hopping amplitudes of the 2N+1-site chain:
//   u_j = Gm * sqrt(N - j + 1)   couples sites 2j-1 <-> 2j,
//   v_j = Go * sqrt(j)           couples sites 2j   <-> 2j+1,   j = 1..N.
struct ChainModel {
  int N = 0;
  std::vector<double> u, v;  // rad/us, length N each
};

ChainModel chain_model(int N, double Gm, double Go);

// Real symmetric tridiagonal matrix of the chain (dimension 2N+1).
Eigen::MatrixXd chain_matrix(const ChainModel& chain);

std::pair<ChainModel, Eigen::MatrixXd> fsl_chain_hamiltonian(int N, double Gm, double Go);

// H = Gm |R><G| b + Go |R><G| a + h.c. — Hermitian, conserves total
// excitation. The _into variant fills a preallocated matrix without resizing
// checks beyond dimension assertions (used inside propagation loops).
void superatom_jc_into(double Gm, double Go, const CompositeBasis& basis,
                       Eigen::MatrixXcd& H);
OperatorMatrix superatom_jc_hamiltonian(double Gm, double Go, const CompositeBasis& basis);

// ---------------------------------------------------------------------------
// Single-atom validation models: one atom with levels {g, r1, r2, e} (full)
// or {g, r2} (effective), each bosonic mode truncated at n_max photons.
// Ordering is level-major, then n_opt, then n_mw.
class SingleAtomBasis {
 public:
  enum Level : int { g = 0, r1 = 1, r2 = 2, e = 3 };

  static SingleAtomBasis four_level(int n_max);  // {g, r1, r2, e}
  static SingleAtomBasis two_level(int n_max);   // {g, r2}

  int size() const { return n_levels_ * (n_max_ + 1) * (n_max_ + 1); }
  int n_max() const { return n_max_; }
  int n_levels() const { return n_levels_; }

  // Ordinal of |level; n_opt, n_mw>, or -1 when the level is not retained.
  int ordinal(Level level, int n_opt, int n_mw) const;
  Level level_of(int ordinal) const;
  int n_opt_of(int ordinal) const;
  int n_mw_of(int ordinal) const;

 private:
  SingleAtomBasis(std::vector<Level> levels, int n_max);
  int n_max_ = 0;
  int n_levels_ = 0;
  std::array<int, 4> slot_of_level_{};  // Level -> slot or -1
  std::vector<Level> level_of_slot_;
};

// Four-level model in the interaction picture, with the oscillating phases
// carried explicitly:
//   H = (Omega1/2)|g><r1| e^{+i Delta t} + g_m |r2><r1| b e^{+i Delta t}
//     + (Omega2/2)|e><r2| e^{+i delta t} + g_o |e><g| a e^{+i delta t} + h.c.
void full_single_atom_into(const SingleAtomBasis& basis, double Omega1, double Omega2,
                           double g_m, double g_o, double Delta, double delta,
                           double t, Eigen::MatrixXcd& H);

// Two-level model after eliminating the far-detuned intermediate levels
// (light shifts deliberately absent — cancelled externally):
//   H = (g_m Omega1 / 2 Delta)|r2><g| b + (g_o Omega2 / 2 delta)|r2><g| a + h.c.
// Throws std::domain_error when either detuning is zero.
void effective_single_atom_into(const SingleAtomBasis& basis, double Omega1, double Omega2,
                                double g_m, double g_o, double Delta, double delta,
                                Eigen::MatrixXcd& H);

// Convenience wrappers resolving Omega1(t) = Omega1_max sin(pi t/2T) and
// Omega2(t) = Omega2_max cos(pi t/2T) from the parameter set.
Eigen::MatrixXcd full_single_atom_hamiltonian(const PhysicalParams& p, double t,
                                              const SingleAtomBasis& basis);
Eigen::MatrixXcd effective_single_atom_hamiltonian(const PhysicalParams& p, double t,
                                                   const SingleAtomBasis& basis);

// R_b = (Delta * C6 / (sqrt(Na) g_m Omega1))^{1/6} in um. Inputs in any one
// consistent angular-frequency unit (the 2*pi factors cancel); all positive,
// else std::domain_error.
double blockade_radius(double C6, double Delta, int Na, double g_m, double Omega1);

}  // namespace fsl
