#pragma once

// Eigenstructure analysis of the chain / dual-mode exchange models: full
// instantaneous spectra with deterministic phase fixing and continuity
// tracking, bright/dark mode coefficients, the analytic zero-energy defect
// mode, its center, and the winding-number phase classification.

#include "fsl/model.hpp"

#include <Eigen/Dense>

namespace fsl {

struct SpectrumSnapshot {
  double t = 0.0;                // us
  Eigen::VectorXd eigenvalues;   // ascending, rad/us
  Eigen::MatrixXcd eigenvectors; // columns aligned to eigenvalues, phase-fixed
};

// Dense Hermitian eigendecomposition. Without `previous`, each eigenvector's
// largest-magnitude component is made real positive. With `previous`, phases
// (and, inside degenerate subspaces, the basis — via orthogonal Procrustes)
// are chosen to maximise overlap with the previous snapshot for continuity.
// Throws std::invalid_argument when H is not Hermitian within tolerance.
SpectrumSnapshot instantaneous_spectrum(const Eigen::MatrixXcd& H, double t,
                                        const SpectrumSnapshot* previous = nullptr);
SpectrumSnapshot instantaneous_spectrum(const Eigen::MatrixXd& H, double t,
                                        const SpectrumSnapshot* previous = nullptr);

// Field superpositions coupled to (bright) and decoupled from (dark) the
// atom: bright = (Gm, Go)/G, dark = (Go, -Gm)/G with G = sqrt(Gm^2+Go^2).
// Coefficient order is (microwave, optical). Both couplings zero -> domain error.
struct BrightDark {
  double bright_mw, bright_opt;
  double dark_mw, dark_opt;
};
BrightDark bright_dark_coefficients(double Gm, double Go);

// Zero-energy defect mode over the 2N+1 sites:
//   amplitude(site 2j+1) = sqrt(binom(N, j)) (Go/G)^{N-j} (-Gm/G)^j,
// even sites identically zero; normalized exactly. `center_site` = 2 j* + 1
// in site coordinates with j* = defect_center(N, Gm, Go).
struct ZeroMode {
  Eigen::VectorXd amplitudes;  // length 2N+1
  double center_site = 1.0;
};
ZeroMode zero_mode_analytic(int N, double Gm, double Go);

// Center of the zero mode in the j coordinate (mean of its binomial site
// populations): j* = N Gm^2 / (Gm^2 + Go^2). Limits: Gm=0 -> 0 (left edge,
// site 1), Go=0 -> N (right edge), Gm=Go -> N/2 (chain midpoint site N+1).
double defect_center(int N, double Gm, double Go);

// Winding classification from sign(prod u_j^2 - prod v_j^2): +1 -> trivial
// (winding 0); -1 or 0 (boundary, by convention) -> winding 1. raw_sign
// preserves the sign datum itself.
struct PhaseClass {
  int winding = 0;   // {0, 1}
  int raw_sign = 0;  // {-1, 0, +1}
};
PhaseClass phase_classify(const ChainModel& chain);

}  // namespace fsl
