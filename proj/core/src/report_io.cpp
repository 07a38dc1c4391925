#include "dwalk/report_io.hpp"

#include <fmt/format.h>

#include <cmath>

namespace dwalk {

namespace {

nlohmann::json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

nlohmann::json momentum_json(const MomentumVec& p, int dim) {
  if (dim == 1) return nlohmann::json::array({p[0]});
  return nlohmann::json::array({p[0], p[1], p[2]});
}

nlohmann::json refined_json(const std::vector<RefinedPoint>& pts, int dim) {
  auto arr = nlohmann::json::array();
  for (const auto& rp : pts) {
    arr.push_back({{"momentum", momentum_json(rp.momentum, dim)},
                   {"residual", rp.residual},
                   {"energies", std::vector<double>(rp.energies.begin(), rp.energies.end())}});
  }
  return arr;
}

}  // namespace

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

namespace {

void dump_into(const nlohmann::json& j, int indent, int depth, std::string& out) {
  const auto pad = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case nlohmann::json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ',';
        first = false;
        pad(depth + 1);
        dump_into(e, indent, depth + 1, out);
      }
      pad(depth);
      out += ']';
      return;
    }
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        pad(depth + 1);
        out += nlohmann::json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump_into(it.value(), indent, depth + 1, out);
      }
      pad(depth);
      out += '}';
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const nlohmann::json& j, int indent) {
  std::string out;
  dump_into(j, indent, 0, out);
  return out;
}

void write_scan_csv(const ScanReport& report, std::ostream& out) {
  const int dim = report.walk.dim();
  const int nE = report.walk.spinor_dim();
  out << (dim == 1 ? "p" : "p_x,p_y,p_z");
  for (int k = 0; k < nE; ++k) out << ",E_" << k;
  out << '\n';
  std::string line;
  for (const auto& rec : report.records) {
    line.clear();
    for (int j = 0; j < dim; ++j) {
      if (j) line += ',';
      line += format_double(rec.momentum[static_cast<std::size_t>(j)]);
    }
    for (double e : rec.energies) {
      line += ',';
      line += format_double(e);
    }
    line += '\n';
    out << line;
  }
}

nlohmann::json walk_json(const WalkSpec& walk) {
  return {{"kind", std::string(to_string(walk.kind))},
          {"dim", walk.dim()},
          {"theta", walk.theta},
          {"mass_dt", walk.mass_dt},
          {"extended_theta", walk.extended_theta}};
}

nlohmann::json scan_metadata_json(const ScanReport& report) {
  const int dim = report.walk.dim();
  auto pts = [&](const std::vector<MomentumVec>& v) {
    auto arr = nlohmann::json::array();
    for (const auto& p : v) arr.push_back(momentum_json(p, dim));
    return arr;
  };
  return {{"walk", walk_json(report.walk)},
          {"geometry", std::string(to_string(report.geometry))},
          {"n", report.n},
          {"points", report.records.size()},
          {"midpoint_offset", report.options.midpoint_offset},
          {"threshold", report.options.threshold},
          {"max_abs_energy", report.max_abs_energy},
          {"argmax", momentum_json(report.argmax, dim)},
          {"bound_rhs", number_or_null(report.bound_rhs)},
          {"low_points", pts(report.low_points)},
          {"high_points", pts(report.high_points)}};
}

nlohmann::json special_points_json(const SpecialPointSearch& search, int dim) {
  return {{"eps_e", search.eps_e},
          {"exclude_radius", search.exclude_radius},
          {"doublers", refined_json(search.doublers, dim)},
          {"pseudo_doublers", refined_json(search.pseudo_doublers, dim)}};
}

nlohmann::json bound_certificate_json(const BoundCertificate& cert, const WalkSpec& walk,
                                      std::size_t n) {
  const int dim = walk.dim();
  auto axis = nlohmann::json::array();
  for (int j = 0; j < dim; ++j) axis.push_back(cert.axis_max[static_cast<std::size_t>(j)]);
  return {{"walk", walk_json(walk)},
          {"n", n},
          {"holds", cert.holds},
          {"max_abs_energy", cert.max_e},
          {"rhs", cert.rhs},
          {"argmax", momentum_json(cert.argmax, dim)},
          {"axis_max", axis},
          {"axis_rhs", cert.axis_rhs},
          {"axis_holds", cert.axis_holds}};
}

void write_state_csv(const LatticeState& state, std::ostream& out) {
  out << (state.dim() == 1 ? "x" : "x,y,z");
  for (int a = 0; a < state.components(); ++a) out << ",re_" << a << ",im_" << a;
  out << '\n';
  for (std::size_t s = 0; s < state.site_count(); ++s) {
    const auto c = state.coords(s);
    out << c[0];
    if (state.dim() == 3) out << ',' << c[1] << ',' << c[2];
    for (int a = 0; a < state.components(); ++a) {
      out << ',' << format_double(state.at(s, a).real()) << ','
          << format_double(state.at(s, a).imag());
    }
    out << '\n';
  }
}

void write_density_header(int dim, std::ostream& out) {
  out << (dim == 1 ? "step,x,density\n" : "step,x,y,z,density\n");
}

void write_density_rows(const LatticeState& state, std::size_t step, std::ostream& out) {
  const auto d = state.density();
  for (std::size_t s = 0; s < d.size(); ++s) {
    const auto c = state.coords(s);
    out << step << ',' << c[0];
    if (state.dim() == 3) out << ',' << c[1] << ',' << c[2];
    out << ',' << format_double(d[s]) << '\n';
  }
}

void write_trajectory_csv(const std::vector<TrajectoryPoint>& traj, std::ostream& out) {
  if (traj.empty()) return;
  const auto& f = traj.front();
  out << "step,norm,leakage";
  for (std::size_t n = 0; n < f.occupation.size(); ++n) out << ",N_" << n;
  for (std::size_t s = 0; s < f.link_field.size(); ++s) out << ",E_" << s;
  for (std::size_t n = 0; n < f.gauss.size(); ++n) out << ",J_" << n;
  for (std::size_t n = 0; n < f.gauss_sq.size(); ++n) out << ",J2_" << n;
  out << '\n';
  for (const auto& p : traj) {
    out << p.step << ',' << format_double(p.norm) << ',' << format_double(p.leakage);
    for (double v : p.occupation) out << ',' << format_double(v);
    for (double v : p.link_field) out << ',' << format_double(v);
    for (double v : p.gauss) out << ',' << format_double(v);
    for (double v : p.gauss_sq) out << ',' << format_double(v);
    out << '\n';
  }
}

}  // namespace dwalk
