#include <doctest.h>

#include <fsl/dynamics.hpp>
#include <fsl/errors.hpp>
#include <fsl/experiments.hpp>
#include <fsl/fockspace.hpp>
#include <fsl/model.hpp>
#include <fsl/params.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>

using namespace fsl;

namespace {

// Exchange Hamiltonian under the default schedule on an arbitrary basis.
HamiltonianBuilder schedule_builder(const PhysicalParams& p, const CompositeBasis& basis) {
  const PulseSchedule s{p.g(), p.T_us, PulseFamily::SinCos};
  return [s, &basis](double t, Eigen::MatrixXcd& H) {
    const auto env = s.envelopes(std::clamp(t, 0.0, s.T));
    superatom_jc_into(env.Gm, env.Go, basis, H);
  };
}

Eigen::VectorXcd top_sector_start(const CompositeBasis& basis) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(basis.size());
  psi(basis.ordinal(BasisState{0, basis.N(), AtomLevel::G})) = 1.0;
  return psi;
}

}  // namespace

TEST_CASE("lindblad with zero rates matches the schrodinger propagation") {
  PhysicalParams p;
  p.kappa_o_MHz = p.kappa_m_MHz = p.Gamma0_MHz = 0.0;
  p.N_excitations = 2;
  p.T_us = 2.0;
  const double step = p.T_us / 400.0;

  const auto pure_basis = CompositeBasis::build(2, BasisMode::FixedSector);
  RecordOptions rec;
  rec.samples = 5;
  const Trajectory unit = propagate_schrodinger(schedule_builder(p, pure_basis),
                                                top_sector_start(pure_basis), pure_basis,
                                                p.T_us, step, rec);

  const auto mixed_basis = CompositeBasis::build(2, BasisMode::AllSectorsUpTo);
  const Eigen::VectorXcd psi0 = top_sector_start(mixed_basis);
  const Trajectory diss =
      propagate_lindblad(schedule_builder(p, mixed_basis), psi0 * psi0.adjoint(), mixed_basis,
                         standard_collapse_ops(p, mixed_basis), p.T_us, step, rec);

  REQUIRE(unit.times.size() == diss.times.size());
  for (std::size_t i = 0; i < unit.times.size(); ++i) {
    CHECK(std::abs(unit.n_optical[i] - diss.n_optical[i]) <= 1e-8);
    CHECK((unit.site_populations[i] - diss.site_populations[i]).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(diss.leaked_weight[i] <= 1e-10);
  }
}

TEST_CASE("damped empty cavity decays as exp(-kappa t)") {
  PhysicalParams p;
  p.kappa_o_MHz = 0.05;
  p.kappa_m_MHz = p.Gamma0_MHz = 0.0;
  const double kappa = p.kappa_o();

  const auto basis = CompositeBasis::build(1, BasisMode::AllSectorsUpTo);
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(basis.size());
  psi0(basis.ordinal(BasisState{1, 0, AtomLevel::G})) = 1.0;

  const double T = 3.0;
  RecordOptions rec;
  rec.samples = 7;
  rec.record_sites = false;
  const auto H0 = [](double, Eigen::MatrixXcd& H) { H.setZero(); };
  const Trajectory tr = propagate_lindblad(H0, psi0 * psi0.adjoint(), basis,
                                           standard_collapse_ops(p, basis), T, T / 3000.0, rec);
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    CHECK(std::abs(tr.n_optical[i] - std::exp(-kappa * tr.times[i])) <= 1e-6);
}

TEST_CASE("rk4 global error falls sixteen-fold per step halving") {
  PhysicalParams p;
  p.N_excitations = 2;
  p.T_us = 1.0;
  const auto basis = CompositeBasis::build(2, BasisMode::FixedSector);
  const auto H = schedule_builder(p, basis);
  const Eigen::VectorXcd psi0 = top_sector_start(basis);

  RecordOptions rec;
  rec.samples = 1;
  rec.record_sites = false;
  rec.state_snapshots = 1;  // final state
  const auto final_state = [&](int steps) {
    const Trajectory tr =
        propagate_schrodinger(H, psi0, basis, p.T_us, p.T_us / steps, rec);
    REQUIRE(tr.state_snapshots.size() >= 1);
    return tr.state_snapshots.back();
  };
  const Eigen::VectorXcd ref = final_state(6400);
  const double e50 = (final_state(50) - ref).norm();
  const double e100 = (final_state(100) - ref).norm();
  REQUIRE(e100 > 1e-13);  // above roundoff so the ratio is meaningful
  const double ratio = e50 / e100;
  CHECK(ratio > 16.0 * 0.7);
  CHECK(ratio < 16.0 * 1.3);
}

TEST_CASE("sector-block fast path equals the dense master equation") {
  PhysicalParams p;
  p.N_excitations = 2;
  p.T_us = 2.0;
  // Rates boosted so dissipation is material over 2 us.
  p.Gamma0_MHz = 0.36;
  p.kappa_o_MHz = 0.34;
  p.kappa_m_MHz = 0.2;
  const int steps = 2000;

  RecordOptions rec;
  rec.samples = 4;
  const auto basis = CompositeBasis::build(2, BasisMode::AllSectorsUpTo);
  const Eigen::VectorXcd psi0 = top_sector_start(basis);
  const Trajectory dense =
      propagate_lindblad(schedule_builder(p, basis), psi0 * psi0.adjoint(), basis,
                         standard_collapse_ops(p, basis), p.T_us, p.T_us / steps, rec);

  SectorBlockLindblad fast(2, p.Gamma0(), p.kappa_o(), p.kappa_m());
  const auto res = fast.run(PulseSchedule{p.g(), p.T_us, PulseFamily::SinCos}, 1.0, 1.0,
                            steps, rec);

  REQUIRE(res.trajectory.times.size() == dense.times.size());
  for (std::size_t i = 0; i < dense.times.size(); ++i) {
    CHECK(std::abs(dense.n_optical[i] - res.trajectory.n_optical[i]) <= 1e-8);
    CHECK(std::abs(dense.n_microwave[i] - res.trajectory.n_microwave[i]) <= 1e-8);
    CHECK(std::abs(dense.atom_excitation[i] - res.trajectory.atom_excitation[i]) <= 1e-8);
    CHECK(std::abs(dense.leaked_weight[i] - res.trajectory.leaked_weight[i]) <= 1e-8);
    CHECK((dense.site_populations[i] - res.trajectory.site_populations[i])
              .cwiseAbs()
              .maxCoeff() <= 1e-8);
  }
  const double dense_fid = dense.site_populations.back()(4);
  CHECK(std::abs(dense_fid - res.final_fidelity) <= 1e-8);
}

TEST_CASE("density snapshots stay hermitian, unit-trace and positive") {
  PhysicalParams p;
  p.N_excitations = 2;
  p.T_us = 2.0;
  p.Gamma0_MHz = 0.36;
  const auto basis = CompositeBasis::build(2, BasisMode::AllSectorsUpTo);
  const Eigen::VectorXcd psi0 = top_sector_start(basis);
  RecordOptions rec;
  rec.samples = 2;
  rec.state_snapshots = 3;
  const Trajectory tr =
      propagate_lindblad(schedule_builder(p, basis), psi0 * psi0.adjoint(), basis,
                         standard_collapse_ops(p, basis), p.T_us, p.T_us / 1000.0, rec);
  REQUIRE(tr.density_snapshots.size() == 3);
  for (const Eigen::MatrixXcd& rho : tr.density_snapshots) {
    CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(std::abs(rho.trace().real() - 1.0) <= 1e-9);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    CHECK(es.eigenvalues().minCoeff() >= -1e-9);
  }
}

TEST_CASE("too-coarse steps raise the numerics error, not silent drift") {
  const PhysicalParams p;
  TransferOptions opt;
  opt.steps = 3;
  CHECK_THROWS_AS(run_transfer(p, 5, 8.2, false, opt), NumericsError);
  CHECK_THROWS_AS(run_transfer(p, 5, 8.2, true, opt), NumericsError);
}

TEST_CASE("sector-leaking collapse operators are rejected") {
  const PhysicalParams p;
  const auto fixed = CompositeBasis::build(2, BasisMode::FixedSector);
  const Eigen::VectorXcd psi0 = top_sector_start(fixed);
  const auto H = schedule_builder(p, fixed);
  CHECK_THROWS_AS(propagate_lindblad(H, psi0 * psi0.adjoint(), fixed,
                                     standard_collapse_ops(p, fixed), 1.0, 0.01),
                  std::domain_error);
}

TEST_CASE("eigen tracking on a multi-sector basis needs an explicit chain") {
  const PhysicalParams p;
  const auto basis = CompositeBasis::build(2, BasisMode::AllSectorsUpTo);
  const Eigen::VectorXcd psi0 = top_sector_start(basis);
  RecordOptions rec;
  rec.track_eigen = true;
  CHECK_THROWS_AS(propagate_lindblad(schedule_builder(p, basis), psi0 * psi0.adjoint(), basis,
                                     standard_collapse_ops(p, basis), 1.0, 0.01, rec),
                  std::invalid_argument);
}

TEST_CASE("trajectory recording: dedup, monotone times, peak >= final") {
  PhysicalParams p;
  p.N_excitations = 2;
  const auto basis = CompositeBasis::build(2, BasisMode::FixedSector);
  RecordOptions rec;
  rec.samples = 1000;  // more than steps: each grid point recorded once
  const Trajectory tr = propagate_schrodinger(schedule_builder(p, basis),
                                              top_sector_start(basis), basis, 2.0,
                                              2.0 / 100.0, rec);
  CHECK(tr.times.size() == 101);
  for (std::size_t i = 1; i < tr.times.size(); ++i) CHECK(tr.times[i] > tr.times[i - 1]);
  CHECK(tr.times.front() == 0.0);
  CHECK(tr.times.back() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(tr.peak_n_optical >= tr.n_optical.back() - 1e-15);
  CHECK(tr.final_norm_drift <= 1e-10);
}

TEST_CASE("standard collapse set carries the configured rates") {
  const PhysicalParams p;
  const auto basis = CompositeBasis::build(1, BasisMode::AllSectorsUpTo);
  const auto ops = standard_collapse_ops(p, basis);
  REQUIRE(ops.size() == 3);
  // sqrt(rate) scaling: the atom-lowering entry equals sqrt(Gamma0).
  const int src = basis.ordinal(BasisState{0, 0, AtomLevel::R});
  const int dst = basis.ordinal(BasisState{0, 0, AtomLevel::G});
  CHECK(ops[0].mat(dst, src).real() == doctest::Approx(std::sqrt(p.Gamma0())).epsilon(1e-12));
  const int osrc = basis.ordinal(BasisState{1, 0, AtomLevel::G});
  const int odst = basis.ordinal(BasisState{0, 0, AtomLevel::G});
  CHECK(ops[1].mat(odst, osrc).real() == doctest::Approx(std::sqrt(p.kappa_o())).epsilon(1e-12));
  const int msrc = basis.ordinal(BasisState{0, 1, AtomLevel::G});
  CHECK(ops[2].mat(odst, msrc).real() == doctest::Approx(std::sqrt(p.kappa_m())).epsilon(1e-12));
}

TEST_CASE("eigen populations of a unit state sum to one") {
  const auto snap = instantaneous_spectrum(chain_matrix(chain_model(2, 0.4, 0.9)), 0.0);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(5);
  psi(0) = std::complex<double>(0.6, 0.0);
  psi(3) = std::complex<double>(0.0, 0.8);
  const Eigen::VectorXd pops = eigen_populations(psi, snap);
  CHECK(pops.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pops.minCoeff() >= 0.0);
}
