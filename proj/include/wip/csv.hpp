#pragma once

#include <locale>
#include <ostream>
#include <sstream>
#include <string>

#include "wip/sim.hpp"

namespace wip {

inline constexpr const char* kCsvHeader =
    "t,x,y,theta,alpha,phi,alpha_dot,p1,p2,E,res_x,res_y,res_theta";

/// One row per sample, 17 significant digits, classic locale, LF endings.
inline void write_csv(std::ostream& out, const Trajectory& traj) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << kCsvHeader << '\n';
  for (const Sample& s : traj.samples) {
    const ReducedState& r = s.reduced;
    os << s.t << ',' << r.x << ',' << r.y << ',' << r.theta << ',' << r.alpha << ',' << r.phi
       << ',' << r.alpha_dot << ',' << r.p1 << ',' << r.p2 << ',' << s.diag.energy << ','
       << s.diag.residual[0] << ',' << s.diag.residual[1] << ',' << s.diag.residual[2] << '\n';
  }
  out << os.str();
}

}  // namespace wip
