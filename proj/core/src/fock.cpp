#include "dwalk/fock.hpp"

#include <cmath>
#include <string>

namespace dwalk {

namespace {

using Triplet = Eigen::Triplet<cplx, std::int64_t>;

ManyBodyOperator from_triplets(std::int64_t dim, const std::vector<Triplet>& t) {
  ManyBodyOperator m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

ManyBodyOperator diagonal_operator(std::int64_t dim, const std::vector<double>& d) {
  std::vector<Triplet> t;
  for (std::int64_t i = 0; i < dim; ++i) {
    if (d[static_cast<std::size_t>(i)] != 0.0) t.emplace_back(i, i, d[static_cast<std::size_t>(i)]);
  }
  return from_triplets(dim, t);
}

void check_link(const GaugeLatticeSpace& space, int link) {
  if (link < 0 || link >= space.links()) throw std::invalid_argument("link index out of range");
}

}  // namespace

FockSpace::FockSpace(int sites) : sites_(sites) {
  if (sites < 2 || sites > 8) throw std::invalid_argument("Fock space supports 2..8 sites");
}

GaugeLatticeSpace::GaugeLatticeSpace(int sites, int truncation, Boundary boundary)
    : fock_(sites), truncation_(truncation), boundary_(boundary) {
  if (truncation < 0) throw std::invalid_argument("link truncation must be >= 0");
  links_ = boundary == Boundary::periodic ? sites : sites - 1;
  link_dim_ = 1;
  const std::int64_t base = 2 * truncation + 1;
  for (int s = 0; s < links_; ++s) {
    link_stride_.push_back(link_dim_);
    link_dim_ *= base;
    if (link_dim_ > (std::int64_t{1} << 40)) throw ResourceLimitError("link space too large");
  }
}

int GaugeLatticeSpace::link_value(std::int64_t index, int link) const {
  const std::int64_t base = 2 * truncation_ + 1;
  return static_cast<int>((link_index(index) / link_stride_[static_cast<std::size_t>(link)]) % base) -
         truncation_;
}

std::vector<int> GaugeLatticeSpace::link_values(std::int64_t index) const {
  std::vector<int> v(static_cast<std::size_t>(links_));
  for (int s = 0; s < links_; ++s) v[static_cast<std::size_t>(s)] = link_value(index, s);
  return v;
}

std::int64_t GaugeLatticeSpace::index(std::uint32_t occupation,
                                      const std::vector<int>& link_values) const {
  if (static_cast<int>(link_values.size()) != links_) {
    throw std::invalid_argument("expected one value per link");
  }
  if (occupation >= static_cast<std::uint64_t>(fock_.dim())) {
    throw std::invalid_argument("occupation has bits beyond the mode count");
  }
  std::int64_t li = 0;
  for (int s = 0; s < links_; ++s) {
    const int l = link_values[static_cast<std::size_t>(s)];
    if (l < -truncation_ || l > truncation_) throw std::invalid_argument("link value out of range");
    li += (l + truncation_) * link_stride_[static_cast<std::size_t>(s)];
  }
  return static_cast<std::int64_t>(occupation) + fock_.dim() * li;
}

int GaugeLatticeSpace::left_link(int site) const {
  if (site > 0) return site - 1;
  return boundary_ == Boundary::periodic ? sites() - 1 : -1;
}

int GaugeLatticeSpace::right_link(int site) const {
  if (site < sites() - 1) return site;
  return boundary_ == Boundary::periodic ? site : -1;
}

std::vector<ManyBodyOperator> build_fields(int sites) {
  return build_fields(GaugeLatticeSpace(sites, 0, Boundary::periodic));
}

std::vector<ManyBodyOperator> build_fields(const GaugeLatticeSpace& space) {
  const int modes = space.fock().modes();
  std::vector<ManyBodyOperator> out;
  out.reserve(static_cast<std::size_t>(modes));
  for (int j = 0; j < modes; ++j) {
    std::vector<Triplet> t;
    const std::uint32_t bit = std::uint32_t{1} << j;
    for (std::int64_t i = 0; i < space.dim(); ++i) {
      const std::uint32_t occ = space.occupation(i);
      if (!(occ & bit)) continue;
      t.emplace_back(i - bit, i, jw_sign(occ, j));
    }
    out.push_back(from_triplets(space.dim(), t));
  }
  return out;
}

ManyBodyOperator total_number(const GaugeLatticeSpace& space) {
  std::vector<double> d(static_cast<std::size_t>(space.dim()));
  for (std::int64_t i = 0; i < space.dim(); ++i) {
    d[static_cast<std::size_t>(i)] = __builtin_popcount(space.occupation(i));
  }
  return diagonal_operator(space.dim(), d);
}

ManyBodyOperator site_number(const GaugeLatticeSpace& space, int site) {
  if (site < 0 || site >= space.sites()) throw std::invalid_argument("site out of range");
  const std::uint32_t mask = std::uint32_t{3} << (2 * site);
  std::vector<double> d(static_cast<std::size_t>(space.dim()));
  for (std::int64_t i = 0; i < space.dim(); ++i) {
    d[static_cast<std::size_t>(i)] = __builtin_popcount(space.occupation(i) & mask);
  }
  return diagonal_operator(space.dim(), d);
}

ManyBodyOperator link_field(const GaugeLatticeSpace& space, int link) {
  check_link(space, link);
  std::vector<double> d(static_cast<std::size_t>(space.dim()));
  for (std::int64_t i = 0; i < space.dim(); ++i) {
    d[static_cast<std::size_t>(i)] = space.link_value(i, link);
  }
  return diagonal_operator(space.dim(), d);
}

ManyBodyOperator link_lowering(const GaugeLatticeSpace& space, int link, LinkEdge edge) {
  check_link(space, link);
  const int L = space.truncation();
  std::vector<Triplet> t;
  for (std::int64_t i = 0; i < space.dim(); ++i) {
    auto links = space.link_values(i);
    int& l = links[static_cast<std::size_t>(link)];
    if (l == -L) {
      if (edge == LinkEdge::clipped) continue;
      l = L;
    } else {
      l -= 1;
    }
    t.emplace_back(space.index(space.occupation(i), links), i, 1.0);
  }
  return from_triplets(space.dim(), t);
}

std::vector<std::uint32_t> sector_states(int modes, int k) {
  if (modes < 0 || modes > 31 || k < 0 || k > modes) throw std::invalid_argument("bad sector");
  std::vector<std::uint32_t> out;
  for (std::uint32_t s = 0; s < (std::uint32_t{1} << modes); ++s) {
    if (__builtin_popcount(s) == k) out.push_back(s);
  }
  return out;
}

Eigen::VectorXcd basis_vector(const GaugeLatticeSpace& space, std::uint32_t occupation,
                              const std::vector<int>& link_values) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space.dim());
  v(space.index(occupation, link_values)) = 1.0;
  return v;
}

double frobenius_norm(const ManyBodyOperator& a) { return a.norm(); }

double commutator_norm(const ManyBodyOperator& a, const ManyBodyOperator& b) {
  const ManyBodyOperator c = a * b - b * a;
  return c.norm();
}

double anticommutator_defect(const ManyBodyOperator& a, const ManyBodyOperator& b,
                             double expected_identity_coeff) {
  ManyBodyOperator c = a * b + b * a;
  if (expected_identity_coeff != 0.0) {
    ManyBodyOperator id(a.rows(), a.cols());
    id.setIdentity();
    c -= expected_identity_coeff * id;
  }
  return c.norm();
}

double commutator_with_diagonal(const ManyBodyOperator& a, const Eigen::VectorXcd& d) {
  if (d.size() != a.rows() || a.rows() != a.cols()) throw std::invalid_argument("shape mismatch");
  double s = 0.0;
  for (std::int64_t k = 0; k < a.outerSize(); ++k) {
    for (ManyBodyOperator::InnerIterator it(a, k); it; ++it) {
      s += std::norm(it.value() * (d(it.col()) - d(it.row())));
    }
  }
  return std::sqrt(s);
}

double unitarity_defect(const ManyBodyOperator& u) {
  ManyBodyOperator id(u.rows(), u.cols());
  id.setIdentity();
  const ManyBodyOperator c = ManyBodyOperator(u.adjoint()) * u - id;
  return c.norm();
}

}  // namespace dwalk
