#include <cmath>
#include <numbers>

#include "cuspkit/triangulation.hpp"

namespace cuspkit {

namespace {

// Clausen function Cl2 on (-pi, pi], via
// Cl2(x) = x - x log|x| + sum_k 2 zeta(2k) / (2 pi)^(2k) * x^(2k+1) / (2k (2k+1)).
double clausen2(double x) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    x = std::remainder(x, two_pi);
    if (x == 0.0) return 0.0;
    double ax = std::abs(x);
    double s = x - x * std::log(ax);
    double q = (x / two_pi) * (x / two_pi);
    double qk = 1.0;
    for (int k = 1; k <= 60; ++k) {
        qk *= q;
        double term = 2.0 * std::riemann_zeta(2.0 * k) * qk * x / (2.0 * k * (2.0 * k + 1.0));
        s += term;
        if (std::abs(term) < 1e-18) break;
    }
    return s;
}

} // namespace

double lobachevsky(double theta) { return 0.5 * clausen2(2.0 * theta); }

double tetrahedron_volume(cplx z) {
    if (z.imag() == 0.0) return 0.0;
    // angles are negative for negatively oriented shapes, and L is odd
    double a = std::arg(z);
    double b = std::arg(1.0 / (1.0 - z));
    double c = std::arg((z - 1.0) / z);
    return lobachevsky(a) + lobachevsky(b) + lobachevsky(c);
}

double volume(const ShapeVector& s) {
    double v = 0.0;
    for (cplx z : s.z) v += tetrahedron_volume(z);
    return v;
}

} // namespace cuspkit
