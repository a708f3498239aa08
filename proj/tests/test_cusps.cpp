#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "cuspkit/cusps.hpp"
#include "cuspkit/horoballs.hpp"
#include "cuspkit/manifold.hpp"

using namespace cuspkit;

namespace {

std::string path(const char* name) { return std::string(CUSPKIT_DATA) + "/" + name; }

// Exhaustive search over a wide window; ties go to the smaller |k|, then to +k.
long brute_minimal_k(cplx mu, cplx lambda) {
    long best = 0;
    double best_len = std::abs(lambda);
    for (long a = 1; a <= 20000; ++a)
        for (long k : {a, -a}) {
            double len = std::abs(lambda + double(k) * mu);
            if (len < best_len * (1.0 - 1e-12)) {
                best_len = len;
                best = k;
            }
        }
    return best;
}

// Smallest positive distance between lines parallel to gamma through lattice points.
double line_spacing(cplx mu, cplx lambda, long p, long q) {
    cplx g = double(p) * mu + double(q) * lambda;
    cplx u = g / std::abs(g);
    double best = 1e300;
    for (long a = -60; a <= 60; ++a)
        for (long b = -60; b <= 60; ++b) {
            double d = std::abs(std::imag(std::conj(u) * (double(a) * mu + double(b) * lambda)));
            if (d > 1e-9 * std::abs(g)) best = std::min(best, d);
        }
    return best;
}

double maximal_scale(const Manifold& m, int k) { return 1.0 / std::sqrt(largest_diameters(m, k).at(k)); }

} // namespace

TEST_CASE("minimal l-curve agrees with brute force on 1000 lattices") {
    std::mt19937_64 gen(777);
    std::uniform_real_distribution<double> re(-40.0, 40.0), im(0.3, 25.0), sc(0.2, 3.0), ang(0.0, 6.283);
    int mismatched = 0;
    for (int i = 0; i < 1000; ++i) {
        cplx rot = std::polar(sc(gen), ang(gen));
        cplx mu = rot, lambda = rot * cplx(re(gen), im(gen));
        long k = minimal_l_curve(CuspShape(mu, lambda)).k;
        if (k != brute_minimal_k(mu, lambda)) ++mismatched;
    }
    CHECK(mismatched == 0);
}

TEST_CASE("minimal l-curve tie rule") {
    // lambda = 0.5 + i: k = 0 and k = -1 have equal length; the smaller |k| wins
    CHECK(minimal_l_curve(CuspShape(1.0, cplx(0.5, 1.0))).k == 0);
    CHECK(minimal_l_curve(CuspShape(1.0, cplx(-0.5, 1.0))).k == 0);
    CHECK(minimal_l_curve(CuspShape(1.0, cplx(2.5, 1.0))).k == -2);
}

TEST_CASE("width equals the spacing of parallel lattice lines") {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> re(-3.0, 3.0), im(0.4, 4.0), sc(0.3, 2.0);
    for (int i = 0; i < 200; ++i) {
        CuspShape s(1.0, cplx(re(gen), im(gen)), sc(gen));
        for (auto [p, q] : {std::pair<long, long>{0, 1}, {1, 0}, {1, 1}, {2, 1}, {-3, 2}}) {
            double spacing = line_spacing(s.t_mu * s.scale, s.t_lambda * s.scale, p, q);
            CHECK(width_along(s, p, q) == doctest::Approx(spacing).epsilon(1e-9));
        }
        LCurve c = minimal_l_curve(s);
        CHECK(width(s, c) * slope_length(s, c.k, 1) == doctest::Approx(s.area()).epsilon(1e-12));
    }
}

TEST_CASE("slope arithmetic") {
    CuspShape s(1.0, cplx(0.0, 2.0), 1.5);
    CHECK(slope_length(s, 1, 0) == doctest::Approx(1.5));
    CHECK(slope_length(s, 0, 1) == doctest::Approx(3.0));
    CHECK(s.area() == doctest::Approx(4.5));
    CHECK_THROWS_AS(slope_length(s, 0, 0), std::invalid_argument);
    CHECK(intersection_number({1, 0}, {0, 1}) == 1);
    CHECK(intersection_number({3, 1}, {-3, 1}) == 6);
}

TEST_CASE("figure-eight maximal cusp") {
    Manifold m = load_manifold(path("fig8.tri"));
    double sc = maximal_scale(m, 0);
    CuspShape s = cusp_shape_of(m, 0, sc);
    CHECK(slope_length(s, 1, 0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(s.area() == doctest::Approx(2 * std::sqrt(3.0)).epsilon(1e-9));
    auto d = enumerate(m, 0, {sc}, 0.5);
    CHECK(d.count_full_sized(1e-6) >= 1);
    CHECK(embeddedness(d).embedded);
}

TEST_CASE("pretzel longitudes have length six on the maximal cusp") {
    for (const char* name : {"p333.tri", "p555.tri", "p777.tri", "p333.hol"}) {
        CAPTURE(name);
        auto t0 = std::chrono::steady_clock::now();
        Manifold m = load_manifold(path(name));
        double sc = maximal_scale(m, 0);
        double len = slope_length(cusp_shape_of(m, 0, sc), 0, 1);
        CHECK(std::abs(len - 6.0) < 1e-6);
        CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 30.0);
        // the maximal cusp has a full-sized ball and no overlaps
        auto d = enumerate(m, 0, {sc}, 0.5);
        CHECK(d.count_full_sized(1e-6) >= 1);
        CHECK(embeddedness(d).embedded);
    }
}

TEST_CASE("balanced widths of a knot are the maximal-cusp widths") {
    Manifold m = load_manifold(path("p333.tri"));
    WidthReport r = balance_cusps(m);
    REQUIRE(r.cusps.size() == 1);
    double sc = maximal_scale(m, 0);
    CHECK(r.scales[0] == doctest::Approx(sc).epsilon(1e-8));
    CuspShape s = cusp_shape_of(m, 0, sc);
    CHECK(r.width == doctest::Approx(width_along(s, 0, 1)).epsilon(1e-8));
    CHECK(r.width == doctest::Approx(r.closed_form).epsilon(1e-6));
}

TEST_CASE("balanced link cusps reach a common width at first tangency") {
    Manifold m = load_manifold(path("whitehead.tri"));
    WidthReport r = balance_cusps(m);
    REQUIRE(r.cusps.size() == 2);
    CHECK(r.balanced);
    CHECK(r.widths[0] == doctest::Approx(r.widths[1]).epsilon(1e-8));
    CHECK(r.width == doctest::Approx(r.closed_form).epsilon(1e-6));
    REQUIRE(r.witness.has_value());
    CHECK(std::abs(r.witness->distance) < 1e-6);
    for (int k : r.cusps) {
        auto d = enumerate(m, k, r.scales, 0.3);
        CHECK(embeddedness(d).embedded);
    }
}
