#pragma once

#include "dwalk/spectral_scan.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace dwalk {

/// Spinor wavefunction on a periodic lattice of n sites per axis. Amplitudes
/// are site-major with components interleaved; the site index is
/// x + n (y + n z).
class LatticeState {
 public:
  /// Zero state. dim is 1 or 3, components 2 or 4, n >= 4.
  LatticeState(int dim, std::size_t n, int components);

  int dim() const { return dim_; }
  std::size_t sites_per_axis() const { return n_; }
  std::size_t site_count() const { return sites_; }
  int components() const { return components_; }
  std::size_t size() const { return amp_.size(); }

  cplx& at(std::size_t site, int component) {
    return amp_[site * static_cast<std::size_t>(components_) + static_cast<std::size_t>(component)];
  }
  cplx at(std::size_t site, int component) const {
    return amp_[site * static_cast<std::size_t>(components_) + static_cast<std::size_t>(component)];
  }
  std::vector<cplx>& amplitudes() { return amp_; }
  const std::vector<cplx>& amplitudes() const { return amp_; }

  std::size_t site_index(std::size_t x, std::size_t y = 0, std::size_t z = 0) const {
    return x + n_ * (y + n_ * z);
  }
  /// Lattice coordinates of a site index.
  std::array<std::size_t, 3> coords(std::size_t site) const;

  double norm() const;
  /// Rescales to unit norm; throws on the zero state.
  void normalize();
  /// Per-site probability, summed over components.
  std::vector<double> density() const;

 private:
  int dim_;
  std::size_t n_;
  std::size_t sites_;
  int components_;
  std::vector<cplx> amp_;
};

/// A state for `walk` with one spinor on a single site (normalized).
LatticeState localized_state(const WalkSpec& walk, std::size_t n, std::size_t site,
                             const std::vector<cplx>& spinor);

/// 1-D Gaussian packet built in momentum space from the eigenvectors of the
/// branch with E > 0 (branch = +1) or E < 0 (branch = -1), centred at x0 with
/// momentum p0 and momentum width sigma_p.
LatticeState branch_wavepacket_1d(const Walk1DParams& params, std::size_t n, double x0,
                                  double p0, double sigma_p, int branch);

/// One step by shifts on the lattice: each axis factor gamma+ S + gamma0 +
/// gamma- S^dag (x, then y, then z; shifts reversed for the K- block), then
/// the mass unitary.
LatticeState step_position(const WalkSpec& walk, const LatticeState& state);

/// One step through the DFT: psi~(p) = sum_n e^{-ipn} psi_n, multiply by the
/// momentum-space walk, transform back.
LatticeState step_momentum(const WalkSpec& walk, const LatticeState& state);

LatticeState evolve_position(const WalkSpec& walk, const LatticeState& state, std::size_t steps);
/// `steps` applications of U(p) between a single forward and inverse DFT.
LatticeState evolve_momentum(const WalkSpec& walk, const LatticeState& state, std::size_t steps);

/// Full step matrix (n^dim * spinor_dim square) built column by column.
Eigen::MatrixXcd step_matrix_position(const WalkSpec& walk, std::size_t n);
Eigen::MatrixXcd step_matrix_momentum(const WalkSpec& walk, std::size_t n);

/// max |a - b| over amplitudes.
double max_amplitude_deviation(const LatticeState& a, const LatticeState& b);

struct SymmetryReport {
  double translation_defect;     // ||[S, U]||_F
  double adjoint_defect_sigma_y;  // ||sy U sy - U^dag||_F
  double adjoint_defect_dressed;  // same with conjugator sy W^dag
  double locality_violation;      // max |U_mn| over dist(m, n) > 1
};

SymmetryReport symmetry_checks(const Walk1DParams& params, std::size_t n);

}  // namespace dwalk
