#include "fsl/dynamics.hpp"

#include "fsl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsl {

namespace {

constexpr std::complex<double> kMinusI{0.0, -1.0};
constexpr double kDriftLimit = 1e-6;

// The Lindblad generator is traceless on every input, so fixed-step RK4
// conserves the trace exactly even when the step is unstable; trace drift
// alone cannot flag a too-coarse step. Populations leaving [0, 1] can.
double diagonal_violation(const Eigen::MatrixXcd& rho) {
  double v = 0.0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    const double d = rho(i, i).real();
    if (!std::isfinite(d)) return std::numeric_limits<double>::infinity();
    v = std::max({v, -d, d - 1.0});
  }
  return v;
}

// Diagonal observable weights of a basis, plus the contiguous span of the
// top-excitation sector (site order, so the span is the site-space vector).
struct ObservableWeights {
  Eigen::VectorXd opt, mw, atom, leak;
  int top_off = 0;
  int top_dim = 0;

  explicit ObservableWeights(const CompositeBasis& basis) {
    const int n = basis.size();
    opt.resize(n);
    mw.resize(n);
    atom.resize(n);
    leak.resize(n);
    for (int i = 0; i < n; ++i) {
      const BasisState& s = basis.state(i);
      opt(i) = s.n_opt;
      mw(i) = s.n_mw;
      atom(i) = s.atom == AtomLevel::R ? 1.0 : 0.0;
      leak(i) = s.excitation() < basis.N() ? 1.0 : 0.0;
    }
    top_off = basis.sector_offset(basis.N());
    top_dim = 2 * basis.N() + 1;
  }
};

Observables observables_from_diag(const Eigen::VectorXd& pop, const ObservableWeights& w) {
  Observables o;
  o.n_optical = w.opt.dot(pop);
  o.n_microwave = w.mw.dot(pop);
  o.atom_excitation = w.atom.dot(pop);
  o.leaked_weight = w.leak.dot(pop);
  o.site_populations = pop.segment(w.top_off, w.top_dim);
  return o;
}

// Step indices (on a 0..steps grid) at which to record, endpoints included.
std::vector<long long> sample_indices(int count, long long steps) {
  std::vector<long long> idx;
  if (count <= 0) return idx;
  const long long S = std::min<long long>(count, steps + 1);
  if (S == 1) {
    idx.push_back(steps);
    return idx;
  }
  for (long long s = 0; s < S; ++s) {
    const long long i = std::llround(static_cast<double>(s) * steps / (S - 1));
    if (idx.empty() || i > idx.back()) idx.push_back(i);
  }
  return idx;
}

long long resolve_steps(double T, double step) {
  if (T <= 0.0) throw std::domain_error("propagation horizon must be positive");
  if (step <= 0.0) throw std::domain_error("integrator step must be positive");
  return std::max<long long>(1, std::llround(T / step));
}

// Shared recording state for the dense propagators.
struct Recorder {
  const RecordOptions& rec;
  const CompositeBasis& basis;
  const ObservableWeights& w;
  Trajectory& traj;
  double T;
  long long steps;

  std::vector<long long> obs_idx, snap_idx;
  std::size_t obs_cursor = 0, snap_cursor = 0;

  HamiltonianBuilder eigen_builder;
  Eigen::MatrixXcd Heig;
  SpectrumSnapshot prev_snap;
  bool have_prev = false;

  Recorder(const RecordOptions& rec_, const CompositeBasis& basis_,
           const ObservableWeights& w_, Trajectory& traj_, double T_, long long steps_,
           const HamiltonianBuilder& H_of_t)
      : rec(rec_), basis(basis_), w(w_), traj(traj_), T(T_), steps(steps_) {
    obs_idx = sample_indices(rec.samples, steps);
    snap_idx = sample_indices(rec.state_snapshots, steps);
    if (rec.track_eigen) {
      if (rec.eigen_hamiltonian) {
        eigen_builder = rec.eigen_hamiltonian;
      } else if (basis.mode() == BasisMode::FixedSector) {
        eigen_builder = H_of_t;
      } else {
        throw std::invalid_argument(
            "eigen tracking on a multi-sector basis needs an explicit top-sector Hamiltonian");
      }
      Heig.resize(w.top_dim, w.top_dim);
    }
  }

  bool wants_obs(long long i) const {
    return obs_cursor < obs_idx.size() && obs_idx[obs_cursor] == i;
  }
  bool wants_snap(long long i) const {
    return snap_cursor < snap_idx.size() && snap_idx[snap_cursor] == i;
  }

  double grid_time(long long i) const { return std::min(static_cast<double>(i) * (T / steps), T); }

  // rho_top: top-sector block (pure states pass |psi_top><psi_top| lazily via
  // the vector overloads below).
  void record_obs(long long i, const Eigen::VectorXd& pop,
                  const std::function<double(const Eigen::VectorXcd&)>& mode_pop) {
    const double t = grid_time(i);
    traj.times.push_back(t);
    const Observables o = observables_from_diag(pop, w);
    traj.n_optical.push_back(o.n_optical);
    traj.n_microwave.push_back(o.n_microwave);
    traj.atom_excitation.push_back(o.atom_excitation);
    traj.leaked_weight.push_back(o.leaked_weight);
    if (rec.record_sites) traj.site_populations.push_back(o.site_populations);
    if (rec.track_eigen) {
      eigen_builder(t, Heig);
      SpectrumSnapshot snap =
          instantaneous_spectrum(Heig, t, have_prev ? &prev_snap : nullptr);
      const int N = basis.N();
      double p0 = 0.0, pp = 0.0, pm = 0.0;
      p0 = mode_pop(snap.eigenvectors.col(N));
      if (N + 1 < w.top_dim) pp = mode_pop(snap.eigenvectors.col(N + 1));
      if (N - 1 >= 0) pm = mode_pop(snap.eigenvectors.col(N - 1));
      traj.P0.push_back(p0);
      traj.Pp1.push_back(pp);
      traj.Pm1.push_back(pm);
      prev_snap = std::move(snap);
      have_prev = true;
    }
    ++obs_cursor;
  }
};

}  // namespace

Observables observables(const Eigen::VectorXcd& psi, const CompositeBasis& basis) {
  if (psi.size() != basis.size())
    throw std::invalid_argument("state dimension does not match basis");
  const ObservableWeights w(basis);
  return observables_from_diag(psi.cwiseAbs2(), w);
}

Observables observables(const Eigen::MatrixXcd& rho, const CompositeBasis& basis) {
  if (rho.rows() != basis.size() || rho.cols() != basis.size())
    throw std::invalid_argument("density matrix dimension does not match basis");
  const ObservableWeights w(basis);
  return observables_from_diag(rho.diagonal().real(), w);
}

Eigen::VectorXd eigen_populations(const Eigen::VectorXcd& psi, const SpectrumSnapshot& snap) {
  if (snap.eigenvectors.rows() != psi.size())
    throw std::invalid_argument("state dimension does not match spectrum snapshot");
  Eigen::VectorXd out(snap.eigenvectors.cols());
  for (int k = 0; k < snap.eigenvectors.cols(); ++k)
    out(k) = std::norm(snap.eigenvectors.col(k).dot(psi));
  return out;
}

Trajectory propagate_schrodinger(const HamiltonianBuilder& H_of_t,
                                 const Eigen::VectorXcd& psi0,
                                 const CompositeBasis& basis,
                                 double T, double step,
                                 const RecordOptions& rec) {
  if (!H_of_t) throw std::invalid_argument("Hamiltonian builder is empty");
  if (psi0.size() != basis.size())
    throw std::invalid_argument("initial state dimension does not match basis");
  const long long steps = resolve_steps(T, step);
  const double h = T / steps;
  const int n = basis.size();
  const ObservableWeights w(basis);

  Trajectory traj;
  Recorder recorder(rec, basis, w, traj, T, steps, H_of_t);

  Eigen::VectorXcd psi = psi0;
  Eigen::MatrixXcd Ht(n, n), Hm(n, n), He(n, n);
  Eigen::VectorXcd k1(n), k2(n), k3(n), k4(n), tmp(n);

  const auto record_at = [&](long long i) {
    if (recorder.wants_obs(i)) {
      recorder.record_obs(i, psi.cwiseAbs2(), [&](const Eigen::VectorXcd& phi) {
        return std::norm(phi.dot(psi.segment(w.top_off, w.top_dim)));
      });
    }
    if (recorder.wants_snap(i)) {
      traj.snapshot_times.push_back(recorder.grid_time(i));
      traj.state_snapshots.push_back(psi);
      ++recorder.snap_cursor;
    }
    const double n_opt = w.opt.dot(psi.cwiseAbs2());
    if (i == 0 || n_opt > traj.peak_n_optical) {
      traj.peak_n_optical = n_opt;
      traj.peak_time = recorder.grid_time(i);
    }
  };

  H_of_t(0.0, Ht);
  record_at(0);
  for (long long i = 0; i < steps; ++i) {
    const double t = i * h;
    H_of_t(std::min(t + 0.5 * h, T), Hm);
    H_of_t(std::min(t + h, T), He);

    k1.noalias() = Ht * psi;
    tmp = psi + (0.5 * h) * (kMinusI * k1);
    k2.noalias() = Hm * tmp;
    tmp = psi + (0.5 * h) * (kMinusI * k2);
    k3.noalias() = Hm * tmp;
    tmp = psi + h * (kMinusI * k3);
    k4.noalias() = He * tmp;
    psi += (h / 6.0) * (kMinusI * (k1 + 2.0 * k2 + 2.0 * k3 + k4));

    Ht.swap(He);
    record_at(i + 1);
  }

  traj.final_norm_drift = std::abs(psi.norm() - 1.0);
  if (traj.final_norm_drift > kDriftLimit)
    throw NumericsError("step too coarse: norm drift " +
                        std::to_string(traj.final_norm_drift) + " exceeds 1e-6");
  return traj;
}

Trajectory propagate_lindblad(const HamiltonianBuilder& H_of_t,
                              const Eigen::MatrixXcd& rho0,
                              const CompositeBasis& basis,
                              const std::vector<OperatorMatrix>& collapse,
                              double T, double step,
                              const RecordOptions& rec) {
  if (!H_of_t) throw std::invalid_argument("Hamiltonian builder is empty");
  const int n = basis.size();
  if (rho0.rows() != n || rho0.cols() != n)
    throw std::invalid_argument("initial density matrix dimension does not match basis");
  for (const OperatorMatrix& op : collapse) {
    if (op.sector_leaking)
      throw std::domain_error(
          "collapse operator leaks outside the retained space; use an all-sectors basis");
    if (op.mat.rows() != n || op.mat.cols() != n)
      throw std::invalid_argument("collapse operator dimension does not match basis");
  }
  const long long steps = resolve_steps(T, step);
  const double h = T / steps;
  const ObservableWeights w(basis);

  std::vector<Eigen::MatrixXcd> Cs, Cds;
  Eigen::MatrixXcd Dsum = Eigen::MatrixXcd::Zero(n, n);
  for (const OperatorMatrix& op : collapse) {
    Cs.push_back(op.mat);
    Cds.push_back(op.mat.adjoint());
    Dsum += op.mat.adjoint() * op.mat;
  }

  Trajectory traj;
  Recorder recorder(rec, basis, w, traj, T, steps, H_of_t);

  Eigen::MatrixXcd rho = rho0;
  Eigen::MatrixXcd Ht(n, n), Hm(n, n), He(n, n);
  Eigen::MatrixXcd k1(n, n), k2(n, n), k3(n, n), k4(n, n), tmp(n, n);

  const auto rhs = [&](const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& r,
                       Eigen::MatrixXcd& out) {
    out = kMinusI * (H * r - r * H) - 0.5 * (Dsum * r + r * Dsum);
    for (std::size_t c = 0; c < Cs.size(); ++c) out += Cs[c] * r * Cds[c];
  };

  const auto record_at = [&](long long i) {
    if (recorder.wants_obs(i)) {
      recorder.record_obs(i, rho.diagonal().real(), [&](const Eigen::VectorXcd& phi) {
        const auto block = rho.block(w.top_off, w.top_off, w.top_dim, w.top_dim);
        return std::real(phi.dot(block * phi));
      });
    }
    if (recorder.wants_snap(i)) {
      traj.snapshot_times.push_back(recorder.grid_time(i));
      traj.density_snapshots.push_back(rho);
      ++recorder.snap_cursor;
    }
    const double n_opt = w.opt.dot(rho.diagonal().real());
    if (i == 0 || n_opt > traj.peak_n_optical) {
      traj.peak_n_optical = n_opt;
      traj.peak_time = recorder.grid_time(i);
    }
  };

  H_of_t(0.0, Ht);
  record_at(0);
  for (long long i = 0; i < steps; ++i) {
    const double t = i * h;
    H_of_t(std::min(t + 0.5 * h, T), Hm);
    H_of_t(std::min(t + h, T), He);

    rhs(Ht, rho, k1);
    tmp = rho + (0.5 * h) * k1;
    rhs(Hm, tmp, k2);
    tmp = rho + (0.5 * h) * k2;
    rhs(Hm, tmp, k3);
    tmp = rho + h * k3;
    rhs(He, tmp, k4);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    Ht.swap(He);
    record_at(i + 1);
  }

  traj.final_trace_drift = std::abs(rho.trace().real() - 1.0);
  if (traj.final_trace_drift > kDriftLimit)
    throw NumericsError("step too coarse: trace drift " +
                        std::to_string(traj.final_trace_drift) + " exceeds 1e-6");
  if (const double viol = diagonal_violation(rho); viol > kDriftLimit)
    throw NumericsError("step too coarse: populations left [0, 1] by " +
                        std::to_string(viol));
  return traj;
}

std::vector<OperatorMatrix> standard_collapse_ops(const PhysicalParams& p,
                                                  const CompositeBasis& basis) {
  std::vector<OperatorMatrix> ops;
  ops.push_back(atom_lowering(basis));
  ops.back().mat *= std::sqrt(p.Gamma0());
  ops.push_back(annihilation(BosonMode::Optical, basis));
  ops.back().mat *= std::sqrt(p.kappa_o());
  ops.push_back(annihilation(BosonMode::Microwave, basis));
  ops.back().mat *= std::sqrt(p.kappa_m());
  return ops;
}

// ---------------------------------------------------------------------------

SectorBlockLindblad::SectorBlockLindblad(int N, double Gamma0, double kappa_o,
                                         double kappa_m)
    : N_(N), Gamma0_(Gamma0), kappa_o_(kappa_o), kappa_m_(kappa_m) {
  if (N < 0) throw std::domain_error("excitation number must be non-negative");
  if (Gamma0 < 0.0 || kappa_o < 0.0 || kappa_m < 0.0)
    throw std::domain_error("decay rates must be non-negative");
  hop_.assign(std::max(1, 2 * N), 0.0);
  sectors_.resize(N + 1);
  for (int k = 0; k <= N; ++k) {
    Sector& sec = sectors_[k];
    sec.dim = 2 * k + 1;
    sec.n_opt.resize(sec.dim);
    sec.n_mw.resize(sec.dim);
    sec.atom.resize(sec.dim);
    for (int i = 0; i < sec.dim; ++i) {
      const BasisState s = state_of_site(i + 1, k);
      sec.n_opt(i) = s.n_opt;
      sec.n_mw(i) = s.n_mw;
      sec.atom(i) = s.atom == AtomLevel::R ? 1.0 : 0.0;
    }
    sec.decay = Gamma0 * sec.atom + kappa_o * sec.n_opt + kappa_m * sec.n_mw;
    if (k == 0) continue;
    // Collapse channels feeding sector k-1: atom |G><R|, then a, then b.
    for (int channel = 0; channel < 3; ++channel) {
      Sector::Feed feed;
      feed.rate = channel == 0 ? Gamma0 : (channel == 1 ? kappa_o : kappa_m);
      feed.dst.assign(sec.dim, -1);
      feed.w.assign(sec.dim, 0.0);
      for (int i = 0; i < sec.dim; ++i) {
        BasisState s = state_of_site(i + 1, k);
        double weight = 0.0;
        if (channel == 0) {
          if (s.atom != AtomLevel::R) continue;
          s.atom = AtomLevel::G;
          weight = 1.0;
        } else if (channel == 1) {
          if (s.n_opt == 0) continue;
          weight = std::sqrt(static_cast<double>(s.n_opt));
          --s.n_opt;
        } else {
          if (s.n_mw == 0) continue;
          weight = std::sqrt(static_cast<double>(s.n_mw));
          --s.n_mw;
        }
        feed.dst[i] = site_index(s, k - 1) - 1;
        feed.w[i] = weight;
      }
      sec.feeds.push_back(std::move(feed));
    }
  }
}

void SectorBlockLindblad::derivative(double Gm, double Go, const Blocks& rho,
                                     Blocks& out) const {
  for (int k = 0; k <= N_; ++k) {
    const Sector& sec = sectors_[k];
    const int d = sec.dim;
    const Eigen::MatrixXcd& r = rho[k];
    Eigen::MatrixXcd& o = out[k];

    // Alternating hopping amplitudes of the sector-k chain.
    double* hop = hop_.data();
    for (int b = 0; b < d - 1; ++b)
      hop[b] = (b % 2 == 0) ? Gm * std::sqrt(static_cast<double>(k - b / 2))
                            : Go * std::sqrt(static_cast<double>((b + 1) / 2));

    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        std::complex<double> hr{0.0, 0.0};  // (H r)(i,j)
        if (i > 0) hr += hop[i - 1] * r(i - 1, j);
        if (i + 1 < d) hr += hop[i] * r(i + 1, j);
        std::complex<double> rh{0.0, 0.0};  // (r H)(i,j)
        if (j > 0) rh += r(i, j - 1) * hop[j - 1];
        if (j + 1 < d) rh += r(i, j + 1) * hop[j];
        o(i, j) = kMinusI * (hr - rh) - 0.5 * (sec.decay(i) + sec.decay(j)) * r(i, j);
      }
    }
  }
  // Lowering feeds into the sector below.
  for (int k = 1; k <= N_; ++k) {
    const Sector& sec = sectors_[k];
    const Eigen::MatrixXcd& r = rho[k];
    Eigen::MatrixXcd& lower = out[k - 1];
    for (const Sector::Feed& feed : sec.feeds) {
      if (feed.rate == 0.0) continue;
      for (int i = 0; i < sec.dim; ++i) {
        if (feed.dst[i] < 0) continue;
        const double wi = feed.rate * feed.w[i];
        for (int j = 0; j < sec.dim; ++j) {
          if (feed.dst[j] < 0) continue;
          lower(feed.dst[i], feed.dst[j]) += wi * feed.w[j] * r(i, j);
        }
      }
    }
  }
}

double SectorBlockLindblad::block_n_optical(const Blocks& rho) const {
  double total = 0.0;
  for (int k = 0; k <= N_; ++k)
    total += sectors_[k].n_opt.dot(rho[k].diagonal().real());
  return total;
}

SectorBlockLindblad::Result SectorBlockLindblad::run(const PulseSchedule& schedule,
                                                     double scale_m, double scale_o,
                                                     int steps, const RecordOptions& rec) {
  if (steps < 1) throw std::domain_error("step count must be positive");
  const double T = schedule.T;
  if (T <= 0.0) throw std::domain_error("pulse duration must be positive");
  const double h = T / steps;

  const auto couplings = [&](double t) {
    const PulseSchedule::Envelopes env = schedule.envelopes(std::clamp(t, 0.0, T));
    return std::pair<double, double>{scale_m * env.Gm, scale_o * env.Go};
  };

  Blocks rho(N_ + 1), k1(N_ + 1), k2(N_ + 1), k3(N_ + 1), k4(N_ + 1), tmp(N_ + 1);
  for (int k = 0; k <= N_; ++k) {
    const int d = 2 * k + 1;
    rho[k] = Eigen::MatrixXcd::Zero(d, d);
    for (Blocks* b : {&k1, &k2, &k3, &k4, &tmp}) (*b)[k].resize(d, d);
  }
  rho[N_](0, 0) = 1.0;  // |n_opt=0, n_mw=N, G>

  Result result;
  Trajectory& traj = result.trajectory;
  const std::vector<long long> obs_idx = sample_indices(rec.samples, steps);
  const std::vector<long long> snap_idx = sample_indices(rec.state_snapshots, steps);
  std::size_t obs_cursor = 0, snap_cursor = 0;
  SpectrumSnapshot prev_snap;
  bool have_prev = false;
  const int top = N_;

  const auto record_at = [&](long long i) {
    const double t = std::min(i * h, T);
    const double n_opt = block_n_optical(rho);
    if (i == 0 || n_opt > result.peak_n_optical) {
      result.peak_n_optical = n_opt;
      result.peak_time = t;
    }
    if (obs_cursor < obs_idx.size() && obs_idx[obs_cursor] == i) {
      ++obs_cursor;
      traj.times.push_back(t);
      double nm = 0.0, at = 0.0, lower = 0.0;
      for (int k = 0; k <= N_; ++k) {
        const Eigen::VectorXd diag = rho[k].diagonal().real();
        nm += sectors_[k].n_mw.dot(diag);
        at += sectors_[k].atom.dot(diag);
        if (k < top) lower += diag.sum();
      }
      traj.n_optical.push_back(n_opt);
      traj.n_microwave.push_back(nm);
      traj.atom_excitation.push_back(at);
      traj.leaked_weight.push_back(lower);
      if (rec.record_sites) traj.site_populations.push_back(rho[top].diagonal().real());
      if (rec.track_eigen) {
        const auto [Gm, Go] = couplings(t);
        SpectrumSnapshot snap = instantaneous_spectrum(
            chain_matrix(chain_model(top, Gm, Go)), t, have_prev ? &prev_snap : nullptr);
        const auto pop = [&](int col) {
          const Eigen::VectorXcd& phi = snap.eigenvectors.col(col);
          return std::real(phi.dot(rho[top] * phi));
        };
        traj.P0.push_back(pop(top));
        traj.Pp1.push_back(top + 1 < 2 * top + 1 ? pop(top + 1) : 0.0);
        traj.Pm1.push_back(top - 1 >= 0 ? pop(top - 1) : 0.0);
        prev_snap = std::move(snap);
        have_prev = true;
      }
    }
    if (snap_cursor < snap_idx.size() && snap_idx[snap_cursor] == i) {
      ++snap_cursor;
      traj.snapshot_times.push_back(t);
      const int full = (N_ + 1) * (N_ + 1);
      Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(full, full);
      for (int k = 0; k <= N_; ++k)
        dense.block(k * k, k * k, 2 * k + 1, 2 * k + 1) = rho[k];
      traj.density_snapshots.push_back(std::move(dense));
    }
  };

  record_at(0);
  for (long long i = 0; i < steps; ++i) {
    const double t = i * h;
    const auto [Gm1, Go1] = couplings(t);
    const auto [Gm2, Go2] = couplings(t + 0.5 * h);
    const auto [Gm3, Go3] = couplings(t + h);

    derivative(Gm1, Go1, rho, k1);
    for (int k = 0; k <= N_; ++k) tmp[k] = rho[k] + (0.5 * h) * k1[k];
    derivative(Gm2, Go2, tmp, k2);
    for (int k = 0; k <= N_; ++k) tmp[k] = rho[k] + (0.5 * h) * k2[k];
    derivative(Gm2, Go2, tmp, k3);
    for (int k = 0; k <= N_; ++k) tmp[k] = rho[k] + h * k3[k];
    derivative(Gm3, Go3, tmp, k4);
    for (int k = 0; k <= N_; ++k)
      rho[k] += (h / 6.0) * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);

    record_at(i + 1);
  }

  double trace = 0.0;
  for (int k = 0; k <= N_; ++k) trace += rho[k].diagonal().real().sum();
  result.trace_drift = std::abs(trace - 1.0);
  traj.final_trace_drift = result.trace_drift;
  traj.peak_n_optical = result.peak_n_optical;
  traj.peak_time = result.peak_time;
  if (result.trace_drift > kDriftLimit)
    throw NumericsError("step too coarse: trace drift " +
                        std::to_string(result.trace_drift) + " exceeds 1e-6");
  double viol = 0.0;
  for (int k = 0; k <= N_; ++k) viol = std::max(viol, diagonal_violation(rho[k]));
  if (viol > kDriftLimit)
    throw NumericsError("step too coarse: populations left [0, 1] by " +
                        std::to_string(viol));
  result.final_n_optical = block_n_optical(rho);
  result.final_fidelity = rho[N_].diagonal().real()(2 * N_);
  return result;
}

}  // namespace fsl
