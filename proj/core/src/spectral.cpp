#include "fsl/spectral.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace fsl {

namespace {

// Largest-magnitude component made real positive (first such index on ties).
void fix_column_phase(Eigen::MatrixXcd& V, int col) {
  int best = 0;
  double best_mag = std::abs(V(0, col));
  for (int i = 1; i < V.rows(); ++i) {
    const double m = std::abs(V(i, col));
    if (m > best_mag) {
      best_mag = m;
      best = i;
    }
  }
  if (best_mag <= 0.0) return;
  V.col(col) *= std::conj(V(best, col)) / best_mag;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / i;
  return r;
}

}  // namespace

SpectrumSnapshot instantaneous_spectrum(const Eigen::MatrixXcd& H, double t,
                                        const SpectrumSnapshot* previous) {
  const int n = static_cast<int>(H.rows());
  if (H.cols() != n) throw std::invalid_argument("Hamiltonian must be square");
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("Hamiltonian is not Hermitian");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed to converge");

  SpectrumSnapshot snap;
  snap.t = t;
  snap.eigenvalues = solver.eigenvalues();
  snap.eigenvectors = solver.eigenvectors();

  if (previous == nullptr) {
    for (int c = 0; c < n; ++c) fix_column_phase(snap.eigenvectors, c);
    return snap;
  }
  if (previous->eigenvectors.rows() != n || previous->eigenvectors.cols() != n)
    throw std::invalid_argument("previous snapshot has mismatched dimension");

  // Group eigenvalues into (near-)degenerate clusters and align each cluster
  // to the previous snapshot: phase rotation for simple levels, orthogonal
  // Procrustes rotation inside degenerate subspaces.
  const double lam_scale = std::max(1.0, snap.eigenvalues.cwiseAbs().maxCoeff());
  const double deg_tol = 1e-8 * lam_scale;
  for (int lo = 0; lo < n;) {
    int hi = lo + 1;
    while (hi < n && snap.eigenvalues(hi) - snap.eigenvalues(hi - 1) <= deg_tol) ++hi;
    const int m = hi - lo;
    if (m == 1) {
      const std::complex<double> ov =
          snap.eigenvectors.col(lo).dot(previous->eigenvectors.col(lo));
      // Eigen's dot conjugates its *first* argument: ov = <new|prev>.
      if (std::abs(ov) > 1e-12)
        snap.eigenvectors.col(lo) *= ov / std::abs(ov);
      else
        fix_column_phase(snap.eigenvectors, lo);
    } else {
      const Eigen::MatrixXcd M = snap.eigenvectors.middleCols(lo, m).adjoint() *
                                 previous->eigenvectors.middleCols(lo, m);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Eigen::MatrixXcd R = svd.matrixU() * svd.matrixV().adjoint();
      snap.eigenvectors.middleCols(lo, m) =
          (snap.eigenvectors.middleCols(lo, m) * R).eval();
    }
    lo = hi;
  }
  return snap;
}

SpectrumSnapshot instantaneous_spectrum(const Eigen::MatrixXd& H, double t,
                                        const SpectrumSnapshot* previous) {
  return instantaneous_spectrum(Eigen::MatrixXcd(H.cast<std::complex<double>>()), t,
                                previous);
}

BrightDark bright_dark_coefficients(double Gm, double Go) {
  const double G = std::hypot(Gm, Go);
  if (G == 0.0) throw std::domain_error("bright/dark modes undefined for zero couplings");
  return {Gm / G, Go / G, Go / G, -Gm / G};
}

double defect_center(int N, double Gm, double Go) {
  if (N < 0) throw std::domain_error("excitation number must be non-negative");
  const double G2 = Gm * Gm + Go * Go;
  if (G2 == 0.0) throw std::domain_error("defect center undefined for zero couplings");
  return N * (Gm * Gm) / G2;
}

ZeroMode zero_mode_analytic(int N, double Gm, double Go) {
  if (N < 0) throw std::domain_error("excitation number must be non-negative");
  const double G = std::hypot(Gm, Go);
  if (G == 0.0) throw std::domain_error("zero mode undefined for zero couplings");
  ZeroMode mode;
  mode.amplitudes = Eigen::VectorXd::Zero(2 * N + 1);
  const double co = Go / G;
  const double cm = Gm / G;
  for (int j = 0; j <= N; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    mode.amplitudes(2 * j) = sign * std::sqrt(binomial(N, j)) *
                             std::pow(co, N - j) * std::pow(cm, j);
  }
  mode.amplitudes.normalize();
  mode.center_site = 2.0 * defect_center(N, Gm, Go) + 1.0;
  return mode;
}

PhaseClass phase_classify(const ChainModel& chain) {
  bool u_zero = false, v_zero = false;
  double log_u = 0.0, log_v = 0.0;
  for (double u : chain.u) {
    if (u == 0.0) u_zero = true;
    else log_u += 2.0 * std::log(std::abs(u));
  }
  for (double v : chain.v) {
    if (v == 0.0) v_zero = true;
    else log_v += 2.0 * std::log(std::abs(v));
  }
  PhaseClass pc;
  if (u_zero && v_zero) {
    pc.raw_sign = 0;
  } else if (u_zero) {
    pc.raw_sign = -1;
  } else if (v_zero) {
    pc.raw_sign = 1;
  } else {
    const double tol = 1e-12 * std::max({1.0, std::abs(log_u), std::abs(log_v)});
    if (std::abs(log_u - log_v) <= tol)
      pc.raw_sign = 0;
    else
      pc.raw_sign = (log_u > log_v) ? 1 : -1;
  }
  pc.winding = (pc.raw_sign == 1) ? 0 : 1;
  return pc;
}

}  // namespace fsl
