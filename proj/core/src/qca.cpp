#include "dwalk/qca.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace dwalk {

namespace {

using Triplet = Eigen::Triplet<cplx, std::int64_t>;
using SmallMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 16, 16>;

constexpr double kPi = std::numbers::pi;
constexpr double kPrune = 1e-14;

void prune(ManyBodyOperator& m) {
  m.prune([](std::int64_t, std::int64_t, const cplx& v) { return std::abs(v) > kPrune; });
}

Eigen::MatrixXcd expm_neg_i(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (h + h.adjoint()));
  const Eigen::VectorXd& ev = es.eigenvalues();
  Eigen::VectorXcd ph(ev.size());
  for (Eigen::Index k = 0; k < ev.size(); ++k) ph(k) = cplx{std::cos(ev(k)), -std::sin(ev(k))};
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::MatrixXcd site_local(int sites, const SpinMatrix& s) {
  const int d = 2 * sites;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 0; n < sites; ++n) m.block(2 * n, 2 * n, 2, 2) = s;
  return m;
}

std::vector<int> occupied_modes(std::uint32_t occ) {
  std::vector<int> out;
  while (occ) {
    out.push_back(__builtin_ctz(occ));
    occ &= occ - 1;
  }
  return out;
}

// Second-quantized d Gamma(h) restricted to one number sector.
Eigen::MatrixXcd sector_generator(const Eigen::MatrixXcd& h, const std::vector<std::uint32_t>& states,
                                  const std::vector<std::int64_t>& row_of) {
  const auto d = static_cast<Eigen::Index>(states.size());
  const int modes = static_cast<int>(h.rows());
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    const std::uint32_t s = states[static_cast<std::size_t>(c)];
    for (int j : occupied_modes(s)) {
      const std::uint32_t removed = s & ~(std::uint32_t{1} << j);
      const double sj = jw_sign(s, j);
      for (int i = 0; i < modes; ++i) {
        if (i == j) {
          g(c, c) += h(i, i);
          continue;
        }
        if (removed & (std::uint32_t{1} << i)) continue;
        const std::uint32_t t = removed | (std::uint32_t{1} << i);
        g(row_of[t], c) += sj * jw_sign(removed, i) * h(i, j);
      }
    }
  }
  return g;
}

Eigen::MatrixXcd sector_by_minors(const Eigen::MatrixXcd& u, const std::vector<std::uint32_t>& states,
                                  int k) {
  const auto d = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXcd block(d, d);
  if (k == 0) {
    block(0, 0) = 1.0;
    return block;
  }
  std::vector<std::vector<int>> modes;
  modes.reserve(states.size());
  for (auto s : states) modes.push_back(occupied_modes(s));
  SmallMatrix sub(k, k);
  for (Eigen::Index c = 0; c < d; ++c) {
    const auto& cm = modes[static_cast<std::size_t>(c)];
    for (Eigen::Index r = 0; r < d; ++r) {
      const auto& rm = modes[static_cast<std::size_t>(r)];
      for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
          sub(a, b) = u(rm[static_cast<std::size_t>(a)], cm[static_cast<std::size_t>(b)]);
        }
      }
      block(r, c) = sub.determinant();
    }
  }
  return block;
}

std::vector<std::int64_t> row_lookup(int modes, const std::vector<std::uint32_t>& states) {
  std::vector<std::int64_t> row_of(std::size_t{1} << modes, -1);
  for (std::size_t r = 0; r < states.size(); ++r) row_of[states[r]] = static_cast<std::int64_t>(r);
  return row_of;
}

// Gamma(v (+) ... (+) v) for one 2x2 site unitary v; links untouched.
ManyBodyOperator local_rotation(const GaugeLatticeSpace& space, const SpinMatrix& v) {
  const int sites = space.sites();
  const cplx det = v(0, 0) * v(1, 1) - v(0, 1) * v(1, 0);
  std::vector<Triplet> t;
  std::vector<std::pair<std::uint32_t, cplx>> cur, next;
  for (std::int64_t i = 0; i < space.dim(); ++i) {
    const std::uint32_t occ = space.occupation(i);
    cur.assign(1, {0u, cplx{1.0, 0.0}});
    for (int n = 0; n < sites; ++n) {
      const std::uint32_t b0 = std::uint32_t{1} << (2 * n);
      const std::uint32_t b1 = b0 << 1;
      const std::uint32_t bits = (occ >> (2 * n)) & 3u;
      next.clear();
      for (const auto& [o, a] : cur) {
        switch (bits) {
          case 0:
            next.emplace_back(o, a);
            break;
          case 1:
            next.emplace_back(o | b0, a * v(0, 0));
            next.emplace_back(o | b1, a * v(1, 0));
            break;
          case 2:
            next.emplace_back(o | b0, a * v(0, 1));
            next.emplace_back(o | b1, a * v(1, 1));
            break;
          default:
            next.emplace_back(o | b0 | b1, a * det);
            break;
        }
      }
      std::swap(cur, next);
    }
    const std::int64_t base = i - occ;
    for (const auto& [o, a] : cur) {
      if (std::abs(a) > kPrune) t.emplace_back(base + o, i, a);
    }
  }
  ManyBodyOperator m(space.dim(), space.dim());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

// Moves every particle of one spinor component by `dir` sites around the
// ring. With track_links, a right hop lowers the crossed link and a left hop
// raises it.
ManyBodyOperator mode_shift(const GaugeLatticeSpace& space, int component, int dir,
                            bool track_links, LinkEdge edge) {
  if (space.boundary() != Boundary::periodic) {
    throw std::invalid_argument("mode shifts need a periodic lattice");
  }
  const int sites = space.sites();
  const int L = space.truncation();
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(space.dim()));
  for (std::int64_t i = 0; i < space.dim(); ++i) {
    const std::uint32_t occ = space.occupation(i);
    const auto modes = occupied_modes(occ);
    std::vector<int> mapped(modes.size());
    std::vector<int> links = track_links ? space.link_values(i) : std::vector<int>{};
    bool dropped = false;
    std::uint32_t out = 0;
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const int site = modes[m] / 2;
      const int comp = modes[m] % 2;
      int target = modes[m];
      if (comp == component) {
        const int to = (site + dir + sites) % sites;
        target = FockSpace::mode(to, comp);
        if (track_links) {
          const int link = dir > 0 ? space.right_link(site) : space.left_link(site);
          int& l = links[static_cast<std::size_t>(link)];
          l += dir > 0 ? -1 : 1;
          if (l < -L || l > L) {
            if (edge == LinkEdge::clipped) {
              dropped = true;
            } else {
              l += l > L ? -(2 * L + 1) : (2 * L + 1);
            }
          }
        }
      }
      mapped[m] = target;
      out |= std::uint32_t{1} << target;
    }
    if (dropped) continue;
    int inversions = 0;
    for (std::size_t a = 0; a < mapped.size(); ++a) {
      for (std::size_t b = a + 1; b < mapped.size(); ++b) inversions += mapped[a] > mapped[b];
    }
    const double sign = (inversions & 1) ? -1.0 : 1.0;
    const std::int64_t row = track_links ? space.index(out, links) : i - occ + out;
    t.emplace_back(row, i, sign);
  }
  ManyBodyOperator m(space.dim(), space.dim());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SpinMatrix rotation_to(double theta) {
  // Columns are the +1 and -1 eigenvectors of sigma_theta.
  return exp_neg_i(pauli(Axis::x), 0.5 * theta);
}

ManyBodyOperator factorized_step(const Walk1DParams& params, const GaugeLatticeSpace& space,
                                 bool track_links, LinkEdge edge) {
  const SpinMatrix va = rotation_to(params.theta);
  const SpinMatrix vb = rotation_to(-params.theta);
  const SpinMatrix w = mass_unitary_1d(params.mass_dt);
  ManyBodyOperator d = local_rotation(space, w * va);
  const ManyBodyOperator factors[] = {
      mode_shift(space, 0, +1, track_links, edge),
      local_rotation(space, va.adjoint() * vb),
      mode_shift(space, 1, -1, track_links, edge),
      local_rotation(space, vb.adjoint()),
  };
  for (const auto& f : factors) {
    d = d * f;
    prune(d);
  }
  return d;
}

void check_budget(std::size_t bytes, const ResourceBudget& budget) {
  if (bytes > budget.max_bytes) {
    throw ResourceLimitError("estimated " + std::to_string(bytes) + " bytes exceeds the budget of " +
                             std::to_string(budget.max_bytes));
  }
}

}  // namespace

Eigen::MatrixXcd momentum_generator(int sites, const SpinMatrix& s) {
  if (sites < 2) throw std::invalid_argument("need at least two sites");
  const int d = 2 * sites;
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(sites, sites);
  for (int k = 0; k < sites; ++k) {
    const double pk = wrap_phase(2.0 * kPi * k / sites);
    for (int n = 0; n < sites; ++n) {
      for (int m = 0; m < sites; ++m) {
        const double a = pk * (n - m);
        p(n, m) += cplx{std::cos(a), std::sin(a)} * (0.5 * pk / sites);
      }
    }
  }
  Eigen::MatrixXcd h(d, d);
  for (int n = 0; n < sites; ++n) {
    for (int m = 0; m < sites; ++m) h.block(2 * n, 2 * m, 2, 2) = p(n, m) * s;
  }
  return h;
}

Eigen::MatrixXcd single_particle_step(const Walk1DParams& params, int sites) {
  params.validate();
  const Eigen::MatrixXcd ha = momentum_generator(sites, rotated_pauli_1d(params.theta));
  const Eigen::MatrixXcd hb = momentum_generator(sites, rotated_pauli_1d(-params.theta));
  const Eigen::MatrixXcd hm = params.mass_dt * site_local(sites, pauli(Axis::x));
  return expm_neg_i(hm) * expm_neg_i(ha) * expm_neg_i(hb);
}

std::size_t estimate_step_bytes(const GaugeLatticeSpace& space, FreeStepRoute route) {
  const int modes = space.fock().modes();
  // sum_k C(2N, k)^2 = C(4N, 2N) nonzeros per link configuration at most.
  double nnz = 1.0;
  for (int i = 1; i <= modes; ++i) nnz = nnz * (modes + i) / i;
  nnz *= static_cast<double>(space.link_dim());
  const double per_entry = sizeof(cplx) + sizeof(std::int64_t);
  const double factor = route == FreeStepRoute::minors ? 1.0 : 3.0;
  const double bytes = nnz * per_entry * factor;
  return bytes > 1e18 ? static_cast<std::size_t>(1e18) : static_cast<std::size_t>(bytes);
}

Eigen::MatrixXcd free_step_sector(const Walk1DParams& params, int sites, int k,
                                  FreeStepRoute route) {
  params.validate();
  const FockSpace fock(sites);
  const int modes = fock.modes();
  const auto states = sector_states(modes, k);
  switch (route) {
    case FreeStepRoute::minors:
      return sector_by_minors(single_particle_step(params, sites), states, k);
    case FreeStepRoute::exponential: {
      const auto row_of = row_lookup(modes, states);
      const Eigen::MatrixXcd ha = momentum_generator(sites, rotated_pauli_1d(params.theta));
      const Eigen::MatrixXcd hb = momentum_generator(sites, rotated_pauli_1d(-params.theta));
      const Eigen::MatrixXcd hm = params.mass_dt * site_local(sites, pauli(Axis::x));
      return expm_neg_i(sector_generator(hm, states, row_of)) *
             expm_neg_i(sector_generator(ha, states, row_of)) *
             expm_neg_i(sector_generator(hb, states, row_of));
    }
    case FreeStepRoute::factorized:
      break;
  }
  const GaugeLatticeSpace space(sites, 0, Boundary::periodic);
  return sector_block(factorized_step(params, space, false, LinkEdge::clipped), modes, k);
}

ManyBodyOperator build_free_step(const Walk1DParams& params, int sites, FreeStepRoute route,
                                 const ResourceBudget& budget) {
  params.validate();
  const GaugeLatticeSpace space(sites, 0, Boundary::periodic);
  check_budget(estimate_step_bytes(space, route), budget);
  if (route == FreeStepRoute::factorized) return factorized_step(params, space, false, LinkEdge::clipped);

  const int modes = space.fock().modes();
  const Eigen::MatrixXcd u = single_particle_step(params, sites);
  std::vector<Triplet> t;
  for (int k = 0; k <= modes; ++k) {
    const auto states = sector_states(modes, k);
    const Eigen::MatrixXcd block = route == FreeStepRoute::minors
                                       ? sector_by_minors(u, states, k)
                                       : free_step_sector(params, sites, k, route);
    for (Eigen::Index c = 0; c < block.cols(); ++c) {
      for (Eigen::Index r = 0; r < block.rows(); ++r) {
        if (std::abs(block(r, c)) > kPrune) {
          t.emplace_back(states[static_cast<std::size_t>(r)], states[static_cast<std::size_t>(c)],
                         block(r, c));
        }
      }
    }
  }
  ManyBodyOperator m(space.dim(), space.dim());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

Eigen::MatrixXcd sector_block(const ManyBodyOperator& op, int modes, int k) {
  if (op.rows() != (std::int64_t{1} << modes)) throw std::invalid_argument("operator size mismatch");
  const auto states = sector_states(modes, k);
  const auto row_of = row_lookup(modes, states);
  const auto d = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    for (ManyBodyOperator::InnerIterator it(op, states[static_cast<std::size_t>(c)]); it; ++it) {
      const std::int64_t r = row_of[static_cast<std::size_t>(it.row())];
      if (r < 0) {
        if (std::abs(it.value()) > kPrune) throw std::logic_error("operator leaves the number sector");
        continue;
      }
      block(r, c) = it.value();
    }
  }
  return block;
}

Eigen::VectorXcd gauge_phases(const GaugeLatticeSpace& space, const std::vector<double>& alpha) {
  if (static_cast<int>(alpha.size()) != space.sites()) {
    throw std::invalid_argument("need one gauge angle per site");
  }
  const int sites = space.sites();
  Eigen::VectorXcd g(space.dim());
  for (std::int64_t i = 0; i < space.dim(); ++i) {
    const std::uint32_t occ = space.occupation(i);
    double phase = 0.0;
    for (int n = 0; n < sites; ++n) {
      phase += alpha[static_cast<std::size_t>(n)] * __builtin_popcount((occ >> (2 * n)) & 3u);
    }
    for (int s = 0; s < space.links(); ++s) {
      const double da = alpha[static_cast<std::size_t>((s + 1) % sites)] - alpha[static_cast<std::size_t>(s)];
      phase += space.link_value(i, s) * da;
    }
    g(i) = cplx{std::cos(phase), std::sin(phase)};
  }
  return g;
}

ManyBodyOperator build_gauge_transform(const GaugeLatticeSpace& space,
                                       const std::vector<double>& alpha) {
  const Eigen::VectorXcd g = gauge_phases(space, alpha);
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(g.size()));
  for (Eigen::Index i = 0; i < g.size(); ++i) t.emplace_back(i, i, g(i));
  ManyBodyOperator m(space.dim(), space.dim());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

ManyBodyOperator build_interacting_step(const Walk1DParams& params,
                                        const GaugeLatticeSpace& space, double coupling_dt,
                                        LinkEdge edge, const ResourceBudget& budget) {
  params.validate();
  if (!std::isfinite(coupling_dt)) throw std::invalid_argument("coupling_dt must be finite");
  if (space.boundary() != Boundary::periodic) {
    throw std::invalid_argument("the interacting step is built on a periodic lattice");
  }
  check_budget(estimate_step_bytes(space, FreeStepRoute::factorized), budget);
  ManyBodyOperator d = factorized_step(params, space, true, edge);

  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(space.dim()));
  for (std::int64_t i = 0; i < space.dim(); ++i) {
    double e2 = 0.0;
    for (int s = 0; s < space.links(); ++s) {
      const int l = space.link_value(i, s);
      e2 += static_cast<double>(l) * l;
    }
    t.emplace_back(i, i, cplx{std::cos(coupling_dt * e2), -std::sin(coupling_dt * e2)});
  }
  ManyBodyOperator de(space.dim(), space.dim());
  de.setFromTriplets(t.begin(), t.end());
  d = d * de;
  prune(d);
  return d;
}

Eigen::VectorXd gauss_values(const GaugeLatticeSpace& space, int site) {
  if (site < 0 || site >= space.sites()) throw std::invalid_argument("site out of range");
  const int right = space.right_link(site);
  const int left = space.left_link(site);
  Eigen::VectorXd j(space.dim());
  for (std::int64_t i = 0; i < space.dim(); ++i) {
    double v = -static_cast<double>(__builtin_popcount((space.occupation(i) >> (2 * site)) & 3u));
    if (right >= 0) v += space.link_value(i, right);
    if (left >= 0) v -= space.link_value(i, left);
    j(i) = v;
  }
  return j;
}

ManyBodyOperator gauss_charge(const GaugeLatticeSpace& space, int site) {
  const Eigen::VectorXd j = gauss_values(space, site);
  std::vector<Triplet> t;
  for (Eigen::Index i = 0; i < j.size(); ++i) {
    if (j(i) != 0.0) t.emplace_back(i, i, j(i));
  }
  ManyBodyOperator m(space.dim(), space.dim());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

ManyBodyOperator barred_field(const GaugeLatticeSpace& space, int site, int component,
                              LinkEdge edge) {
  if (space.boundary() != Boundary::open) throw std::invalid_argument("barred fields need an open chain");
  if (component != 0 && component != 1) throw std::invalid_argument("component must be 0 or 1");
  const auto fields = build_fields(space);
  ManyBodyOperator out = fields[static_cast<std::size_t>(FockSpace::mode(site, component))];
  for (int s = site; s < space.links(); ++s) out = out * link_lowering(space, s, edge);
  return out;
}

std::vector<TrajectoryPoint> run_trajectory(const ManyBodyOperator& step,
                                            const GaugeLatticeSpace& space,
                                            const Eigen::VectorXcd& psi0, std::size_t steps) {
  if (psi0.size() != space.dim() || step.rows() != space.dim()) {
    throw std::invalid_argument("state and step do not match the space");
  }
  const int sites = space.sites();
  std::vector<Eigen::VectorXd> gauss;
  for (int n = 0; n < sites; ++n) gauss.push_back(gauss_values(space, n));

  auto measure = [&](const Eigen::VectorXcd& psi, std::size_t t, double prev_norm) {
    TrajectoryPoint p;
    p.step = t;
    p.norm = psi.squaredNorm();
    p.leakage = t == 0 ? 0.0 : prev_norm - p.norm;
    p.occupation.assign(static_cast<std::size_t>(sites), 0.0);
    p.link_field.assign(static_cast<std::size_t>(space.links()), 0.0);
    p.gauss.assign(static_cast<std::size_t>(sites), 0.0);
    p.gauss_sq.assign(static_cast<std::size_t>(sites), 0.0);
    if (!(p.norm > 0.0)) return p;
    for (std::int64_t i = 0; i < space.dim(); ++i) {
      const double w = std::norm(psi(i)) / p.norm;
      if (w == 0.0) continue;
      const std::uint32_t occ = space.occupation(i);
      for (int n = 0; n < sites; ++n) {
        const auto sn = static_cast<std::size_t>(n);
        p.occupation[sn] += w * __builtin_popcount((occ >> (2 * n)) & 3u);
        p.gauss[sn] += w * gauss[sn](i);
        p.gauss_sq[sn] += w * gauss[sn](i) * gauss[sn](i);
      }
      for (int s = 0; s < space.links(); ++s) {
        p.link_field[static_cast<std::size_t>(s)] += w * space.link_value(i, s);
      }
    }
    return p;
  };

  std::vector<TrajectoryPoint> out;
  out.reserve(steps + 1);
  Eigen::VectorXcd psi = psi0;
  out.push_back(measure(psi, 0, 0.0));
  for (std::size_t t = 1; t <= steps; ++t) {
    psi = step * psi;
    out.push_back(measure(psi, t, out.back().norm));
  }
  return out;
}

double gauss_drift(const std::vector<TrajectoryPoint>& traj) {
  double d = 0.0;
  if (traj.empty()) return d;
  const auto& first = traj.front();
  for (const auto& p : traj) {
    for (std::size_t n = 0; n < p.gauss.size(); ++n) {
      d = std::max(d, std::abs(p.gauss[n] - first.gauss[n]));
      d = std::max(d, std::abs(p.gauss_sq[n] - first.gauss_sq[n]));
    }
  }
  return d;
}

}  // namespace dwalk
