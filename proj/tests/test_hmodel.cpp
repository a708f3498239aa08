#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cuspkit/hmodel.hpp"
#include "cuspkit/words.hpp"

using namespace cuspkit;

namespace {

// cosh of the hyperbolic distance in the upper half-space.
double cosh_dist(const Point3& p, const Point3& q) {
    double dz = std::norm(p.z - q.z), dt = p.t - q.t;
    return 1.0 + (dz + dt * dt) / (2.0 * p.t * q.t);
}

struct Rng {
    std::mt19937_64 gen{12345};
    double uni(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen); }
    cplx c(double r) { return {uni(-r, r), uni(-r, r)}; }
    MoebiusMap map() {
        for (;;) {
            cplx a = c(2), b = c(2), cc = c(2), d = c(2);
            cplx det = a * d - b * cc;
            if (std::abs(det) > 0.3) return MoebiusMap(a, b, cc, d);
        }
    }
    Point3 point() { return {c(2), uni(0.2, 2.0)}; }
};

// Point on the horosphere bounding b, parametrized by (u, v) in [0,1)^2.
Point3 horosphere_point(const Horoball& b, double u, double v) {
    if (b.center.is_infinite()) return {cplx(u, v), b.size};
    double r = b.size / 2, th = std::numbers::pi * (0.1 + 0.8 * u), ph = 2 * std::numbers::pi * v;
    return {b.center.value() + r * std::sin(th) * std::polar(1.0, ph), r - r * std::cos(th)};
}

bool on_sphere(const Horoball& b, const Point3& p, double tol) {
    if (b.center.is_infinite()) return std::abs(p.t - b.size) < tol * b.size;
    double r = b.size / 2;
    return std::abs(std::norm(p.z - b.center.value()) + (p.t - r) * (p.t - r) - r * r) < tol * std::max(1.0, r * r);
}

bool on_plane_boundary(const GeodesicPlane& P, cplx z, double tol) {
    if (P.is_vertical()) return std::abs(std::imag(std::conj(P.direction) * (z - P.base))) < tol * std::max(1.0, std::abs(z));
    return std::abs(std::abs(z - P.center) - P.radius) < tol * std::max(1.0, P.radius);
}

} // namespace

TEST_CASE("maps are stored with determinant one") {
    Rng r;
    for (int i = 0; i < 100; ++i) CHECK(std::abs(r.map().det() - 1.0) < 1e-12);
    CHECK_THROWS_AS(MoebiusMap(1.0, 2.0, 0.5, 1.0), GeometryError);
}

TEST_CASE("isometry invariance of point distances over 1000 random maps") {
    Rng r;
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
        MoebiusMap m = r.map();
        Point3 p = r.point(), q = r.point();
        double d0 = std::acosh(cosh_dist(p, q));
        double d1 = std::acosh(cosh_dist(apply_point(m, p), apply_point(m, q)));
        if (std::abs(d0 - d1) > 1e-9 * std::max(1.0, d0)) ++bad;
    }
    CHECK(bad == 0);
}

TEST_CASE("isometry invariance of horoball distances") {
    Rng r;
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
        MoebiusMap m = r.map();
        Horoball a(r.c(1), r.uni(0.1, 1.0)), b(r.c(1), r.uni(0.1, 1.0));
        double d0 = horoball_distance(a, b);
        // oracle: log(|z1 - z2|^2 / (D1 D2)) for two finite balls
        double oracle = std::log(std::norm(a.center.value() - b.center.value()) / (a.size * b.size));
        double d1 = horoball_distance(apply_horoball(m, a), apply_horoball(m, b));
        if (std::abs(d0 - oracle) > 1e-9 * std::max(1.0, std::abs(oracle)) ||
            std::abs(d1 - oracle) > 1e-9 * std::max(1.0, std::abs(oracle)))
            ++bad;
    }
    CHECK(bad == 0);
}

TEST_CASE("ball at infinity against a finite ball") {
    Horoball inf(BoundaryPoint::infinity(), 2.0), fin(cplx(0.3, 0.1), 0.5);
    CHECK(horoball_distance(inf, fin) == doctest::Approx(std::log(2.0 / 0.5)).epsilon(1e-12));
    CHECK(horoball_distance(inf, Horoball(cplx(0.0), 2.0)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("horoball images agree with images of horosphere points") {
    Rng r;
    int bad = 0;
    for (int i = 0; i < 200; ++i) {
        MoebiusMap m = r.map();
        Horoball b = i % 5 == 0 ? Horoball(BoundaryPoint::infinity(), r.uni(0.5, 2)) : Horoball(r.c(1), r.uni(0.1, 1.5));
        Horoball img = apply_horoball(m, b);
        for (double u : {0.1, 0.5, 0.9})
            for (double v : {0.0, 0.3, 0.7})
                if (!on_sphere(img, apply_point(m, horosphere_point(b, u, v)), 1e-8)) ++bad;
    }
    CHECK(bad == 0);
}

TEST_CASE("plane images pass through images of boundary points") {
    Rng r;
    int bad = 0;
    for (int i = 0; i < 500; ++i) {
        MoebiusMap m = r.map();
        GeodesicPlane P = i % 3 == 0 ? GeodesicPlane::vertical(r.c(1), std::polar(1.0, r.uni(0, 3)))
                                     : GeodesicPlane::hemisphere(r.c(1), r.uni(0.2, 1.5));
        GeodesicPlane Q = apply_plane(m, P);
        for (double s : {0.3, 1.7, 4.1}) {
            cplx z = P.is_vertical() ? P.base + (s - 2.0) * P.direction : P.center + std::polar(P.radius, s);
            BoundaryPoint w = apply_boundary(m, z);
            if (w.is_infinite()) continue;
            if (!on_plane_boundary(Q, w.value(), 1e-7)) ++bad;
        }
    }
    CHECK(bad == 0);
}

TEST_CASE("composition and inverse") {
    Rng r;
    for (int i = 0; i < 100; ++i) {
        MoebiusMap a = r.map(), b = r.map();
        cplx z = r.c(1);
        cplx lhs = apply_finite(a * b, z), rhs = apply_finite(a, apply_finite(b, z));
        CHECK(std::abs(lhs - rhs) < 1e-8 * std::max(1.0, std::abs(lhs)));
        CHECK((a * a.inverse()).distance_to_identity() < 1e-10);
    }
}

TEST_CASE("map_triple sends the given triple") {
    Rng r;
    for (int i = 0; i < 50; ++i) {
        cplx p[3] = {r.c(1), r.c(1), r.c(1)}, q[3] = {r.c(1), r.c(1), r.c(1)};
        MoebiusMap m = map_triple(p[0], p[1], p[2], q[0], q[1], q[2]);
        for (int k = 0; k < 3; ++k) CHECK(std::abs(apply_finite(m, p[k]) - q[k]) < 1e-7);
    }
}

TEST_CASE("tangent hemispheres touch at the expected point") {
    auto rel = plane_pair_relation(GeodesicPlane::hemisphere(0.0, 1.0), GeodesicPlane::hemisphere(2.0, 1.0), 1e-9, 1e-7);
    REQUIRE(rel.kind == PlanePairKind::tangent);
    CHECK(std::abs(rel.touch->value() - 1.0) < 1e-9);
    CHECK(plane_pair_relation(GeodesicPlane::hemisphere(0.0, 1.0), GeodesicPlane::hemisphere(1.0, 1.0), 1e-9, 1e-7).kind ==
          PlanePairKind::crossing);
    CHECK(plane_pair_relation(GeodesicPlane::vertical(0.0, 1.0), GeodesicPlane::vertical(cplx(0, 1), 1.0), 1e-9, 1e-7).kind ==
          PlanePairKind::tangent);
}

TEST_CASE("words evaluate as group elements") {
    Rng r;
    std::vector<MoebiusMap> gens{r.map(), r.map()};
    Word w = parse_word("abAB");
    CHECK(format_word(w) == "abAB");
    MoebiusMap e = evaluate(gens, word_concat(w, word_inverse(w)));
    CHECK(e.distance_to_identity() < 1e-9);
    MoebiusMap p3 = evaluate(gens, word_power(parse_word("a"), 3));
    CHECK((p3 * (gens[0] * gens[0] * gens[0]).inverse()).distance_to_identity() < 1e-9);
}
