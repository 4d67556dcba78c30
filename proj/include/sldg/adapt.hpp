// Gradient-based adaptivity: indicator, fixed-fraction marking, and exact
// L2 solution transfer onto a refined mesh.
#pragma once

#include "sldg/space.hpp"

namespace sldg {

// eta_e = h_e * max_{volume quadrature points} |grad u_h|, with the same
// default volume rule as assembly.
std::vector<double> indicator(const Solution& u);

// Ids of the ceil(theta*N) largest indicators, theta in [0,1]; ties prefer
// the lower element id. The returned ids are sorted ascending.
std::vector<int> mark(const std::vector<double>& eta, double theta);

// L2-projects u onto a space over a mesh refined from u's mesh (checked via
// lineage uids). Projection is exact: carried-over elements of equal degree
// copy coefficients bitwise, children integrate the parent polynomial.
Solution transfer(const Solution& u, std::shared_ptr<const DgSpace> new_space);

}  // namespace sldg
