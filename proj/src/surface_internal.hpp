#pragma once

#include <optional>
#include <utility>

#include "cuspkit/surfaces.hpp"

namespace cuspkit::detail {

// Primitive lattice vector v = p*mu + q*lambda parallel to a direction, with the
// spacing of the parallel family of lattice lines and a vector stepping to the next line.
struct LatticeDirection {
    long p = 0, q = 1;
    cplx v;
    double period = 0.0;
    cplx step;
    std::pair<long, long> step_index;
};

std::optional<LatticeDirection> lattice_direction(cplx dir, cplx mu, cplx lambda, double tol, long bound);
double line_offset(const GeodesicPlane& v);
bool near_pole(const GeodesicPlane& p, cplx pole, double tol);
GeodesicPlane snap_to(const GeodesicPlane& p, cplx pole);
std::optional<CrossingWitness> find_crossing(const PlaneLiftSet& s, double tol, double tangency_tol);

} // namespace cuspkit::detail
