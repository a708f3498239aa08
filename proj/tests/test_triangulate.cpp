#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <regex>
#include <sstream>

#include "cuspkit/triangulation.hpp"

using namespace cuspkit;
constexpr double pi = std::numbers::pi;

namespace {

// L(theta) = -int_0^theta log|2 sin u| du, by quadrature, reduced mod pi.
double lobachevsky_quad(double theta) {
    theta = std::fmod(theta, pi);
    if (theta < 0) theta += pi;
    if (theta == 0.0) return 0.0;
    boost::math::quadrature::tanh_sinh<double> ts;
    auto f = [](double u) { return -std::log(2.0 * std::sin(u)); };
    return ts.integrate(f, 0.0, theta);
}

double tet_volume_oracle(cplx z) {
    return lobachevsky_quad(std::arg(z)) + lobachevsky_quad(std::arg(1.0 - 1.0 / z)) +
           lobachevsky_quad(std::arg(1.0 / (1.0 - z)));
}

std::string path(const char* name) { return std::string(CUSPKIT_DATA) + "/" + name; }

double reference_volume(const char* name) {
    std::ifstream in(path(name));
    std::string line;
    std::regex re("reference volume ([0-9.]+)");
    std::smatch m;
    while (std::getline(in, line))
        if (std::regex_search(line, m, re)) return std::stod(m[1]);
    return -1;
}

cplx target(RowTarget t) { return t == RowTarget::completeness ? cplx(0) : cplx(0, 2 * pi); }

} // namespace

TEST_CASE("Lobachevsky function against quadrature") {
    for (double t : {0.1, 0.5, pi / 6, pi / 3, 1.2, 2.0, 3.0})
        CHECK(lobachevsky(t) == doctest::Approx(lobachevsky_quad(t)).epsilon(1e-11));
    CHECK(lobachevsky(pi / 2) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(lobachevsky(pi / 3 + pi) == doctest::Approx(lobachevsky(pi / 3)).epsilon(1e-12));
    // regular ideal tetrahedron
    CHECK(tetrahedron_volume(std::polar(1.0, pi / 3)) == doctest::Approx(1.0149416064096536).epsilon(1e-12));
}

TEST_CASE("figure-eight volume against the quadrature oracle") {
    auto t0 = std::chrono::steady_clock::now();
    auto tri = load_triangulation(path("fig8.tri"));
    auto s = solve_shapes(tri);
    double v = volume(s);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    double oracle = 0;
    for (cplx z : s.z) oracle += tet_volume_oracle(z);
    CHECK(s.geometric);
    CHECK(std::abs(v - oracle) < 1e-9);
    CHECK(std::abs(v - 2.029883212819) < 1e-9);
    CHECK(std::abs(6 * lobachevsky_quad(pi / 3) - 2.029883212819) < 1e-9);
    for (cplx z : s.z) CHECK(std::abs(z - std::polar(1.0, pi / 3)) < 1e-9);
    CHECK(secs < 1.0);
}

TEST_CASE("every bundled triangulation solves to its reference volume with zero residual") {
    for (const char* name : {"fig8.tri", "fig8_alt.tri", "whitehead.tri", "p333.tri", "p555.tri", "p777.tri",
                             "fig7link.tri", "twistfamily.tri"}) {
        CAPTURE(name);
        auto tri = without_fillings(load_triangulation(path(name)));
        auto s = solve_shapes(tri);
        CHECK(s.geometric);
        double oracle = 0;
        for (cplx z : s.z) oracle += tet_volume_oracle(z);
        CHECK(std::abs(volume(s) - oracle) < 1e-9);
        CHECK(std::abs(oracle - reference_volume(name)) < 1e-8);
        // residual oracle on the logarithmic equations
        double worst = 0;
        for (const auto& r : active_rows(tri)) {
            cplx sum(0.0, r.row.m * pi);
            for (std::size_t i = 0; i < s.z.size(); ++i)
                sum += double(r.row.a[i]) * std::log(s.z[i]) + double(r.row.b[i]) * std::log(1.0 - s.z[i]);
            worst = std::max(worst, std::abs(sum - target(r.target)));
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("cusp shape is independent of the triangulation") {
    auto a = load_triangulation(path("fig8.tri")), b = load_triangulation(path("fig8_alt.tri"));
    cplx sa = cusp_shape(a, solve_shapes(a), 0), sb = cusp_shape(b, solve_shapes(b), 0);
    CHECK(sa.imag() > 0);
    // the figure-eight cusp is the lattice spanned by 1 and 2*sqrt(3) i, up to change of basis
    CHECK(std::abs(std::abs(sa.imag()) - 2 * std::sqrt(3.0)) < 1e-9);
    CHECK(std::abs(sb.imag() - sa.imag()) < 1e-9);
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_triangulation(""), ParseError);
    CHECK_THROWS_AS(load_triangulation(path("empty.tri")), ParseError);
    CHECK_THROWS_AS(load_triangulation(path("does_not_exist.tri")), std::exception);
    CHECK_THROWS_AS(parse_triangulation("manifold x\ntetrahedra 1\nedge 1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_triangulation("manifold x\ntetrahedra two\n"), ParseError);
    try {
        parse_triangulation("manifold x\ntetrahedra 1\nbogus 1 2 3\n");
        FAIL("no error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("filling rows replace the cusp equations") {
    auto tri = load_triangulation(path("twistfamily.tri"));
    REQUIRE(tri.is_filled(0));
    int fill = 0, comp = 0;
    for (const auto& r : active_rows(tri)) {
        fill += r.target == RowTarget::filling;
        comp += r.target == RowTarget::completeness;
    }
    CHECK(fill == 1);
    CHECK(comp == 2);
    auto filled = with_filling(without_fillings(tri), 0, 1, 9);
    auto s = solve_shapes(filled);
    CHECK(s.residual < 1e-10);
    CHECK(max_residual(filled, s.z) < 1e-9);
}
