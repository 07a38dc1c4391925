#pragma once

#include "dwalk/position_space.hpp"
#include "dwalk/qca.hpp"
#include "dwalk/spectral_scan.hpp"

#include <nlohmann/json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace dwalk {

/// %.17g, '.' decimal point regardless of locale.
std::string format_double(double v);

/// JSON text with every float written by format_double (non-finite as null).
std::string dump_json(const nlohmann::json& j, int indent = 2);

/// Header "p,E_0,E_1" for 1-D walks, "p_x,p_y,p_z,E_0,..." otherwise; one row
/// per record.
void write_scan_csv(const ScanReport& report, std::ostream& out);

nlohmann::json walk_json(const WalkSpec& walk);
nlohmann::json scan_metadata_json(const ScanReport& report);
nlohmann::json special_points_json(const SpecialPointSearch& search, int dim);
nlohmann::json bound_certificate_json(const BoundCertificate& cert, const WalkSpec& walk,
                                      std::size_t n);

/// "x[,y,z],re_0,im_0,..." per site.
void write_state_csv(const LatticeState& state, std::ostream& out);

/// Long format "step,x[,y,z],density".
void write_density_header(int dim, std::ostream& out);
void write_density_rows(const LatticeState& state, std::size_t step, std::ostream& out);

/// "step,norm,leakage,N_0..,E_0..,J_0..,J2_0..".
void write_trajectory_csv(const std::vector<TrajectoryPoint>& traj, std::ostream& out);

}  // namespace dwalk
