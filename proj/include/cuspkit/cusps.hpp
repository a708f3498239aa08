#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cuspkit/horoballs.hpp"
#include "cuspkit/manifold.hpp"

namespace cuspkit {

// Flat cusp torus: lattice generated by t_mu and t_lambda at scale 1, drawn at scale t.
struct CuspShape {
    cplx t_mu{1.0};
    cplx t_lambda{0.0, 1.0};
    double scale = 1.0;
    int cusp = 0;

    CuspShape() = default;
    CuspShape(cplx mu, cplx lambda, double t = 1.0, int k = 0);
    double area() const;
    CuspShape rescaled(double t) const;
};

CuspShape cusp_shape_of(const Manifold& m, int cusp, double scale = 1.0);

// The class lambda + k*mu, i.e. the slope (k, 1).
struct LCurve {
    long k = 0;
    std::pair<long, long> slope() const { return {k, 1}; }
};

double slope_length(const CuspShape& s, long p, long q);
double width(const CuspShape& s, const LCurve& c);
// Width with respect to an arbitrary slope: area / length.
double width_along(const CuspShape& s, long p, long q);
LCurve minimal_l_curve(const CuspShape& s);
long intersection_number(std::pair<long, long> c1, std::pair<long, long> c2);

struct CuspTangency {
    int frame_cusp;  // cusp placed at infinity
    int other_cusp;  // cusp of the tangent finite ball
    cplx center;     // display coordinates of that ball
    double diameter;
    Word word;
    double distance;
};

struct WidthReport {
    std::vector<int> cusps;                     // complete cusps, in order
    std::vector<std::pair<long, long>> curves;  // designated slope per listed cusp
    std::vector<double> scales;                 // meridian length per cusp index (0 for filled)
    std::vector<double> widths;                 // per listed cusp
    double width = 0.0;                         // common width
    double closed_form = 0.0;                   // min_ij sqrt(W_i W_j / delta_ij)
    bool balanced = false;
    std::optional<CuspTangency> witness;
    std::vector<std::vector<double>> delta;     // largest unit-scale diameters, [frame][cusp]
};

struct BalanceOptions {
    int iterations = 60;
    double window = 1e-10;
    EnumerateOptions enumeration{};
};

// curves: one slope per complete cusp (in complete_cusps() order); longitudes when empty.
WidthReport balance_cusps(const Manifold& m, const std::vector<std::pair<long, long>>& curves = {},
                          const BalanceOptions& opts = {});

// Largest unit-scale diameters; delta[i][j] for frame i and cusp j.
std::vector<std::vector<double>> cusp_overlap_table(const Manifold& m, const EnumerateOptions& opts = {});

} // namespace cuspkit
