#include "fsl/model.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace fsl {

namespace {

void require_square(const Eigen::MatrixXcd& H, int dim, const char* who) {
  if (H.rows() != dim || H.cols() != dim)
    throw std::invalid_argument(std::string(who) + ": matrix must be preallocated to basis size");
}

}  // namespace

PulseSchedule::Envelopes PulseSchedule::envelopes(double t) const {
  if (T <= 0.0) throw std::domain_error("pulse duration must be positive");
  if (t < 0.0 || t > T) throw std::domain_error("time outside pulse window [0, T]");
  const double phase = std::numbers::pi * t / (2.0 * T);
  return {g_peak * std::sin(phase), g_peak * std::cos(phase)};
}

double collective_coupling(int Na, double g_single) {
  if (Na < 1) throw std::domain_error("atom number must be at least 1");
  return std::sqrt(static_cast<double>(Na)) * g_single;
}

ChainModel chain_model(int N, double Gm, double Go) {
  if (N < 0) throw std::domain_error("excitation number must be non-negative");
  ChainModel chain;
  chain.N = N;
  chain.u.resize(N);
  chain.v.resize(N);
  for (int j = 1; j <= N; ++j) {
    chain.u[j - 1] = Gm * std::sqrt(static_cast<double>(N - j + 1));
    chain.v[j - 1] = Go * std::sqrt(static_cast<double>(j));
  }
  return chain;
}

Eigen::MatrixXd chain_matrix(const ChainModel& chain) {
  const int dim = 2 * chain.N + 1;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (int b = 0; b < dim - 1; ++b) {
    const double hop = (b % 2 == 0) ? chain.u[b / 2] : chain.v[(b - 1) / 2];
    H(b, b + 1) = hop;
    H(b + 1, b) = hop;
  }
  return H;
}

std::pair<ChainModel, Eigen::MatrixXd> fsl_chain_hamiltonian(int N, double Gm, double Go) {
  ChainModel chain = chain_model(N, Gm, Go);
  Eigen::MatrixXd H = chain_matrix(chain);
  return {std::move(chain), std::move(H)};
}

void superatom_jc_into(double Gm, double Go, const CompositeBasis& basis,
                       Eigen::MatrixXcd& H) {
  require_square(H, basis.size(), "superatom_jc_into");
  H.setZero();
  for (int col = 0; col < basis.size(); ++col) {
    const BasisState& s = basis.state(col);
    if (s.atom != AtomLevel::G) continue;
    if (s.n_mw > 0) {
      const int row = basis.ordinal({s.n_opt, s.n_mw - 1, AtomLevel::R});
      if (row >= 0) {
        const double amp = Gm * std::sqrt(static_cast<double>(s.n_mw));
        H(row, col) += amp;
        H(col, row) += amp;
      }
    }
    if (s.n_opt > 0) {
      const int row = basis.ordinal({s.n_opt - 1, s.n_mw, AtomLevel::R});
      if (row >= 0) {
        const double amp = Go * std::sqrt(static_cast<double>(s.n_opt));
        H(row, col) += amp;
        H(col, row) += amp;
      }
    }
  }
}

OperatorMatrix superatom_jc_hamiltonian(double Gm, double Go, const CompositeBasis& basis) {
  OperatorMatrix op;
  op.basis_mode = basis.mode();
  op.N = basis.N();
  op.sector_leaking = false;  // conserves total excitation
  op.mat.resize(basis.size(), basis.size());
  superatom_jc_into(Gm, Go, basis, op.mat);
  return op;
}

// ---------------------------------------------------------------------------

SingleAtomBasis::SingleAtomBasis(std::vector<Level> levels, int n_max)
    : n_max_(n_max), n_levels_(static_cast<int>(levels.size())),
      level_of_slot_(std::move(levels)) {
  if (n_max < 0) throw std::domain_error("photon cutoff must be non-negative");
  slot_of_level_.fill(-1);
  for (int s = 0; s < n_levels_; ++s) slot_of_level_[level_of_slot_[s]] = s;
}

SingleAtomBasis SingleAtomBasis::four_level(int n_max) {
  return SingleAtomBasis({g, r1, r2, e}, n_max);
}

SingleAtomBasis SingleAtomBasis::two_level(int n_max) {
  return SingleAtomBasis({g, r2}, n_max);
}

int SingleAtomBasis::ordinal(Level level, int n_opt, int n_mw) const {
  if (n_opt < 0 || n_opt > n_max_ || n_mw < 0 || n_mw > n_max_) return -1;
  const int slot = slot_of_level_[level];
  if (slot < 0) return -1;
  return (slot * (n_max_ + 1) + n_opt) * (n_max_ + 1) + n_mw;
}

SingleAtomBasis::Level SingleAtomBasis::level_of(int ordinal) const {
  return level_of_slot_[ordinal / ((n_max_ + 1) * (n_max_ + 1))];
}

int SingleAtomBasis::n_opt_of(int ordinal) const {
  return (ordinal / (n_max_ + 1)) % (n_max_ + 1);
}

int SingleAtomBasis::n_mw_of(int ordinal) const { return ordinal % (n_max_ + 1); }

void full_single_atom_into(const SingleAtomBasis& basis, double Omega1, double Omega2,
                           double g_m, double g_o, double Delta, double delta,
                           double t, Eigen::MatrixXcd& H) {
  require_square(H, basis.size(), "full_single_atom_into");
  H.setZero();
  const std::complex<double> phase_D = std::polar(1.0, Delta * t);
  const std::complex<double> phase_d = std::polar(1.0, delta * t);
  const auto add = [&H](int row, int col, std::complex<double> val) {
    if (row < 0 || col < 0) return;
    H(row, col) += val;
    H(col, row) += std::conj(val);
  };
  const int n_max = basis.n_max();
  using L = SingleAtomBasis::Level;
  for (int no = 0; no <= n_max; ++no) {
    for (int nm = 0; nm <= n_max; ++nm) {
      // (Omega1/2) |g><r1| e^{+i Delta t}
      add(basis.ordinal(L::g, no, nm), basis.ordinal(L::r1, no, nm),
          0.5 * Omega1 * phase_D);
      // g_m |r2><r1| b e^{+i Delta t}
      if (nm > 0)
        add(basis.ordinal(L::r2, no, nm - 1), basis.ordinal(L::r1, no, nm),
            g_m * std::sqrt(static_cast<double>(nm)) * phase_D);
      // (Omega2/2) |e><r2| e^{+i delta t}
      add(basis.ordinal(L::e, no, nm), basis.ordinal(L::r2, no, nm),
          0.5 * Omega2 * phase_d);
      // g_o |e><g| a e^{+i delta t}
      if (no > 0)
        add(basis.ordinal(L::e, no - 1, nm), basis.ordinal(L::g, no, nm),
            g_o * std::sqrt(static_cast<double>(no)) * phase_d);
    }
  }
}

void effective_single_atom_into(const SingleAtomBasis& basis, double Omega1, double Omega2,
                                double g_m, double g_o, double Delta, double delta,
                                Eigen::MatrixXcd& H) {
  require_square(H, basis.size(), "effective_single_atom_into");
  if (Delta == 0.0 || delta == 0.0)
    throw std::domain_error("effective model requires nonzero detunings");
  H.setZero();
  const double Gm_eff = g_m * Omega1 / (2.0 * Delta);
  const double Go_eff = g_o * Omega2 / (2.0 * delta);
  const auto add = [&H](int row, int col, double val) {
    if (row < 0 || col < 0) return;
    H(row, col) += val;
    H(col, row) += val;
  };
  const int n_max = basis.n_max();
  using L = SingleAtomBasis::Level;
  for (int no = 0; no <= n_max; ++no) {
    for (int nm = 0; nm <= n_max; ++nm) {
      if (nm > 0)
        add(basis.ordinal(L::r2, no, nm - 1), basis.ordinal(L::g, no, nm),
            Gm_eff * std::sqrt(static_cast<double>(nm)));
      if (no > 0)
        add(basis.ordinal(L::r2, no - 1, nm), basis.ordinal(L::g, no, nm),
            Go_eff * std::sqrt(static_cast<double>(no)));
    }
  }
}

Eigen::MatrixXcd full_single_atom_hamiltonian(const PhysicalParams& p, double t,
                                              const SingleAtomBasis& basis) {
  const double phase = std::numbers::pi * t / (2.0 * p.T_us);
  Eigen::MatrixXcd H(basis.size(), basis.size());
  full_single_atom_into(basis, p.Omega1_max() * std::sin(phase),
                        p.Omega2_max() * std::cos(phase), p.g_m(), p.g_o(),
                        p.Delta(), p.delta(), t, H);
  return H;
}

Eigen::MatrixXcd effective_single_atom_hamiltonian(const PhysicalParams& p, double t,
                                                   const SingleAtomBasis& basis) {
  const double phase = std::numbers::pi * t / (2.0 * p.T_us);
  Eigen::MatrixXcd H(basis.size(), basis.size());
  effective_single_atom_into(basis, p.Omega1_max() * std::sin(phase),
                             p.Omega2_max() * std::cos(phase), p.g_m(), p.g_o(),
                             p.Delta(), p.delta(), H);
  return H;
}

double blockade_radius(double C6, double Delta, int Na, double g_m, double Omega1) {
  if (C6 <= 0.0 || Delta <= 0.0 || Na < 1 || g_m <= 0.0 || Omega1 <= 0.0)
    throw std::domain_error("blockade radius requires positive C6, Delta, Na, g_m, Omega1");
  return std::pow(Delta * C6 / (std::sqrt(static_cast<double>(Na)) * g_m * Omega1),
                  1.0 / 6.0);
}

}  // namespace fsl
