#include "fsl/fockspace.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace fsl {

int site_index(const BasisState& state, int N) {
  if (state.excitation() != N)
    throw std::domain_error("not an FSL site: state lies outside the " +
                            std::to_string(N) + "-excitation sector");
  return state.atom == AtomLevel::G ? 2 * state.n_opt + 1 : 2 * (state.n_opt + 1);
}

BasisState state_of_site(int site, int N) {
  if (site < 1 || site > 2 * N + 1)
    throw std::domain_error("site index out of range [1, 2N+1]");
  if (site % 2 == 1) {
    const int j = (site - 1) / 2;
    return {j, N - j, AtomLevel::G};
  }
  const int j = site / 2;
  return {j - 1, N - j, AtomLevel::R};
}

int site_n_opt(int site) { return site % 2 == 1 ? (site - 1) / 2 : site / 2 - 1; }

int CompositeBasis::key(const BasisState& s) const {
  if (s.n_opt < 0 || s.n_opt > N_ || s.n_mw < 0 || s.n_mw > N_) return -1;
  return (s.n_opt * (N_ + 1) + s.n_mw) * 2 + static_cast<int>(s.atom);
}

int CompositeBasis::ordinal(const BasisState& s) const {
  const int k = key(s);
  return k < 0 ? -1 : lookup_[k];
}

int CompositeBasis::sector_offset(int k) const {
  if (mode_ == BasisMode::FixedSector) {
    if (k != N_) throw std::domain_error("fixed-sector basis holds only sector N");
    return 0;
  }
  if (k < 0 || k > N_) throw std::domain_error("sector index out of range");
  return k * k;
}

CompositeBasis CompositeBasis::build(int N, BasisMode mode) {
  if (N < 0) throw std::domain_error("excitation number must be non-negative");
  CompositeBasis b;
  b.N_ = N;
  b.mode_ = mode;
  const int k_lo = (mode == BasisMode::FixedSector) ? N : 0;
  for (int k = k_lo; k <= N; ++k)
    for (int site = 1; site <= 2 * k + 1; ++site) b.states_.push_back(state_of_site(site, k));
  b.lookup_.assign(2 * (N + 1) * (N + 1), -1);
  for (int i = 0; i < b.size(); ++i) b.lookup_[b.key(b.states_[i])] = i;
  return b;
}

OperatorMatrix annihilation(BosonMode mode, const CompositeBasis& basis) {
  OperatorMatrix op;
  op.basis_mode = basis.mode();
  op.N = basis.N();
  op.sector_leaking = basis.mode() == BasisMode::FixedSector;
  op.mat = Eigen::MatrixXcd::Zero(basis.size(), basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    BasisState target = basis.state(i);
    int& n = (mode == BosonMode::Optical) ? target.n_opt : target.n_mw;
    if (n == 0) continue;  // annihilates the mode vacuum
    const double amp = std::sqrt(static_cast<double>(n));
    --n;
    if (const int row = basis.ordinal(target); row >= 0) op.mat(row, i) = amp;
  }
  return op;
}

OperatorMatrix atom_lowering(const CompositeBasis& basis) {
  OperatorMatrix op;
  op.basis_mode = basis.mode();
  op.N = basis.N();
  op.sector_leaking = basis.mode() == BasisMode::FixedSector;
  op.mat = Eigen::MatrixXcd::Zero(basis.size(), basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    BasisState target = basis.state(i);
    if (target.atom != AtomLevel::R) continue;
    target.atom = AtomLevel::G;
    if (const int row = basis.ordinal(target); row >= 0) op.mat(row, i) = 1.0;
  }
  return op;
}

void write_basis_csv(const CompositeBasis& basis, std::ostream& out) {
  out << "ordinal,n_opt,n_mw,atom,sector,site\n";
  for (int i = 0; i < basis.size(); ++i) {
    const BasisState& s = basis.state(i);
    const int k = s.excitation();
    out << i << ',' << s.n_opt << ',' << s.n_mw << ','
        << (s.atom == AtomLevel::G ? 'G' : 'R') << ',' << k << ','
        << site_index(s, k) << '\n';
  }
}

}  // namespace fsl
