#pragma once

// Truncated Hilbert space of two bosonic modes — optical (a) and microwave
// (b) — plus a two-level (super)atom {G, R}, together with the site indexing
// of the associated Fock-state lattice.
//
// Within the k-excitation sector the 2k+1 states are arranged as a 1D chain
// (sites are 1-based):
//   site 2j+1  =  |n_opt = j,     n_mw = k - j,  G>
//   site 2j    =  |n_opt = j - 1, n_mw = k - j,  R>
// so excitation exchange between the atom and either mode acts as
// nearest-neighbour hopping along the chain.

#include <Eigen/Dense>

#include <iosfwd>
#include <vector>

namespace fsl {

enum class AtomLevel : int { G = 0, R = 1 };

struct BasisState {
  int n_opt = 0;                    // optical photon number
  int n_mw = 0;                     // microwave photon number
  AtomLevel atom = AtomLevel::G;

  int excitation() const { return n_opt + n_mw + (atom == AtomLevel::R ? 1 : 0); }
  bool operator==(const BasisState&) const = default;
};

enum class BasisMode {
  FixedSector,    // the 2N+1 states with excitation == N, in site order
  AllSectorsUpTo  // all (N+1)^2 states with excitation <= N
};

// AllSectorsUpTo ordering is sector-major ascending with site order inside
// each sector, so sector k occupies the contiguous ordinal range
// [k^2, k^2 + 2k] and every photon/atom lowering operator is strictly
// block-lower-triangular.
class CompositeBasis {
 public:
  static CompositeBasis build(int N, BasisMode mode);

  int size() const { return static_cast<int>(states_.size()); }
  int N() const { return N_; }
  BasisMode mode() const { return mode_; }

  const BasisState& state(int ordinal) const { return states_[ordinal]; }
  const std::vector<BasisState>& states() const { return states_; }

  // Ordinal of a state, or -1 when it lies outside the basis.
  int ordinal(const BasisState& s) const;

  // First ordinal of sector k (AllSectorsUpTo: k^2; FixedSector: 0 for k==N).
  int sector_offset(int k) const;

 private:
  int N_ = 0;
  BasisMode mode_ = BasisMode::FixedSector;
  std::vector<BasisState> states_;
  std::vector<int> lookup_;  // dense (n_opt, n_mw, atom) -> ordinal map
  int key(const BasisState& s) const;
};

// Dense operator tied to a basis. Hamiltonian builders fill `mat` in rad/us;
// ladder operators are dimensionless. `sector_leaking` marks operators whose
// true action leaves the retained space (any lowering operator built on a
// FixedSector basis); dissipative propagation rejects such operators.
struct OperatorMatrix {
  Eigen::MatrixXcd mat;
  BasisMode basis_mode = BasisMode::FixedSector;
  int N = 0;
  bool sector_leaking = false;
};

enum class BosonMode { Optical, Microwave };

// <n-1|a|n> = sqrt(n) on the designated mode, identity elsewhere; amplitudes
// whose image leaves the basis are dropped (and the operator flagged when the
// basis cannot contain any image sector).
OperatorMatrix annihilation(BosonMode mode, const CompositeBasis& basis);

// |G><R| on the atom, identity on the modes (dimensionless).
OperatorMatrix atom_lowering(const CompositeBasis& basis);

// Site map within the N-excitation sector; throws std::domain_error
// ("not an FSL site") for states outside the sector. Sites run 1..2N+1.
int site_index(const BasisState& state, int N);
BasisState state_of_site(int site, int N);

// Optical photon number carried by a site (odd s -> (s-1)/2, even s -> s/2-1).
int site_n_opt(int site);

// CSV dump: ordinal, n_opt, n_mw, atom, sector, site.
void write_basis_csv(const CompositeBasis& basis, std::ostream& out);

}  // namespace fsl
