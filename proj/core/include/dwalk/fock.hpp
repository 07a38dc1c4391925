#pragma once

#include "dwalk/spin_algebra.hpp"

#include <Eigen/SparseCore>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace dwalk {

using ManyBodyOperator = Eigen::SparseMatrix<cplx, Eigen::ColMajor, std::int64_t>;

/// Thrown when a requested many-body construction would exceed the memory
/// budget.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ResourceBudget {
  std::size_t max_bytes = std::size_t{2} << 30;
};

enum class Boundary { periodic, open };

/// Behaviour of the link ladder at the edge of the truncated range.
enum class LinkEdge {
  clipped,  // V|-L> = 0, V^dag|L> = 0
  clock,    // V|-L> = |L>
};

/// Fermion modes j = 2 n + a (site n, component a), Jordan-Wigner ordered.
/// Basis states are occupation bitstrings; |S> = c+_{j1} ... c+_{jk} |0> with
/// j1 < ... < jk.
class FockSpace {
 public:
  explicit FockSpace(int sites);

  int sites() const { return sites_; }
  int modes() const { return 2 * sites_; }
  std::int64_t dim() const { return std::int64_t{1} << modes(); }
  static int mode(int site, int component) { return 2 * site + component; }

 private:
  int sites_;
};

/// Fermions times one truncated link per edge. A link value l in [-L, L] is
/// stored as digit l + L; basis index = occupation + 2^{2N} * link_index with
/// link 0 the least significant digit. Link s joins sites s and s + 1 (mod N
/// when periodic).
class GaugeLatticeSpace {
 public:
  GaugeLatticeSpace(int sites, int truncation, Boundary boundary);

  const FockSpace& fock() const { return fock_; }
  int sites() const { return fock_.sites(); }
  int truncation() const { return truncation_; }
  Boundary boundary() const { return boundary_; }
  int links() const { return links_; }
  std::int64_t link_dim() const { return link_dim_; }
  std::int64_t dim() const { return fock_.dim() * link_dim_; }

  std::uint32_t occupation(std::int64_t index) const {
    return static_cast<std::uint32_t>(index & (fock_.dim() - 1));
  }
  std::int64_t link_index(std::int64_t index) const { return index >> fock_.modes(); }
  int link_value(std::int64_t index, int link) const;
  std::vector<int> link_values(std::int64_t index) const;
  std::int64_t index(std::uint32_t occupation, const std::vector<int>& link_values) const;

  /// Links to the left and right of a site; -1 where an open chain has none.
  int left_link(int site) const;
  int right_link(int site) const;

 private:
  FockSpace fock_;
  int truncation_;
  Boundary boundary_;
  int links_;
  std::int64_t link_dim_;
  std::vector<std::int64_t> link_stride_;
};

/// (-1)^{number of occupied modes below j}.
inline double jw_sign(std::uint32_t occupation, int j) {
  const std::uint32_t below = occupation & ((std::uint32_t{1} << j) - 1);
  return (__builtin_popcount(below) & 1) ? -1.0 : 1.0;
}

/// Annihilators psi_n^a, indexed by mode 2 n + a.
std::vector<ManyBodyOperator> build_fields(int sites);
std::vector<ManyBodyOperator> build_fields(const GaugeLatticeSpace& space);

ManyBodyOperator total_number(const GaugeLatticeSpace& space);
ManyBodyOperator site_number(const GaugeLatticeSpace& space, int site);

/// Electric field E_s, diagonal with eigenvalue l.
ManyBodyOperator link_field(const GaugeLatticeSpace& space, int link);
/// Lowering V_s|l> = |l - 1>, so that [V_s, E_s] = V_s.
ManyBodyOperator link_lowering(const GaugeLatticeSpace& space, int link,
                               LinkEdge edge = LinkEdge::clipped);

/// Bitstrings with k of the given number of modes set, ascending.
std::vector<std::uint32_t> sector_states(int modes, int k);

/// Basis vector of a gauge space.
Eigen::VectorXcd basis_vector(const GaugeLatticeSpace& space, std::uint32_t occupation,
                              const std::vector<int>& link_values);

double frobenius_norm(const ManyBodyOperator& a);
double commutator_norm(const ManyBodyOperator& a, const ManyBodyOperator& b);
double anticommutator_defect(const ManyBodyOperator& a, const ManyBodyOperator& b,
                             double expected_identity_coeff);
/// ||[A, diag(d)]||_F evaluated entrywise.
double commutator_with_diagonal(const ManyBodyOperator& a, const Eigen::VectorXcd& d);
double unitarity_defect(const ManyBodyOperator& u);

}  // namespace dwalk
