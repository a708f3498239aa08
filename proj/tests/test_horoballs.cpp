#include <doctest.h>

#include <cmath>

#include "cuspkit/cusps.hpp"
#include "cuspkit/horoballs.hpp"
#include "cuspkit/manifold.hpp"

using namespace cuspkit;

namespace {

std::string path(const char* name) { return std::string(CUSPKIT_DATA) + "/" + name; }

const char* const kExamples[] = {"fig8.tri", "fig8_alt.tri", "whitehead.tri", "p333.tri", "p555.tri",
                                 "p777.tri", "fig7link.tri", "twistfamily.tri"};

struct Loaded {
    Manifold m;
    std::vector<double> scales;
};

Loaded load_balanced(const char* name) {
    Manifold m = load_manifold(path(name));
    auto r = balance_cusps(m);
    return {std::move(m), r.scales};
}

// A ball of the shallow diagram matching one of the deep diagram, by center (mod lattice) and size.
bool contains(const HoroballDiagram& d, const BallEntry& b, double tol) {
    for (const auto& x : d.balls) {
        if (x.cusp != b.cusp || std::abs(x.diameter - b.diameter) > tol) continue;
        // v = s mu + t lambda
        cplx v = x.center - b.center;
        double area = std::imag(std::conj(d.mu) * d.lambda);
        double s = std::imag(std::conj(v) * d.lambda) / area, t = std::imag(std::conj(d.mu) * v) / area;
        if (std::abs(s - std::round(s)) < 1e-6 && std::abs(t - std::round(t)) < 1e-6) return true;
    }
    return false;
}

} // namespace

TEST_CASE("enumeration is deterministic and depth-stable on every bundled example") {
    for (const char* name : kExamples) {
        CAPTURE(name);
        auto [m, scales] = load_balanced(name);
        for (int k : m.complete_cusps()) {
            CAPTURE(k);
            auto a = enumerate(m, k, scales, 0.2);
            auto b = enumerate(m, k, scales, 0.2);
            CHECK(a.verified);
            CHECK(diagram_json(a) == diagram_json(b));
            auto deep = enumerate(m, k, scales, 0.1);
            std::size_t kept = 0;
            for (const auto& x : deep.balls) {
                if (x.diameter < 0.2 + 1e-7) continue;
                ++kept;
                CHECK(contains(a, x, 1e-7));
            }
            CHECK(kept == a.balls.size());
            CHECK(embeddedness(deep).embedded);
        }
    }
}

TEST_CASE("ball words reproduce centers and diameters") {
    for (const char* name : {"fig8.tri", "p333.tri", "whitehead.tri"}) {
        CAPTURE(name);
        auto [m, scales] = load_balanced(name);
        for (int k : m.complete_cusps()) {
            DisplayFrame f = display_frame(m, k, scales);
            auto gens = frame_generators(m, f);
            auto d = enumerate(m, k, scales, 0.15);
            for (const auto& b : d.balls) {
                MoebiusMap g = evaluate(gens, b.word);
                BoundaryPoint foot = apply_boundary(f.from_dev, m.frame(b.cusp).fixed_point);
                BoundaryPoint c = apply_boundary(g, foot);
                REQUIRE(!c.is_infinite());
                CHECK(std::abs(c.value() - b.center) < 1e-6 * std::max(1.0, std::abs(b.center)));
                if (b.cusp == k) CHECK(1.0 / std::norm(g.c) == doctest::Approx(b.diameter).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("p333 has six full-sized balls and order six longitude symmetry") {
    auto [m, scales] = load_balanced("p333.tri");
    auto d = enumerate(m, 0, scales, 0.5);
    CHECK(d.count_full_sized(1e-6) >= 6);
    auto sym = detect_symmetry(d, 0, 1, 6);
    CHECK(sym.verified);
    CHECK(std::abs(sym.translation - d.lambda / 6.0) < 1e-6);
    CHECK_FALSE(detect_symmetry(d, 0, 1, 5).verified);
}

TEST_CASE("no ball exceeds the cusp height at a maximal cusp") {
    for (const char* name : {"fig8.tri", "p555.tri"}) {
        auto [m, scales] = load_balanced(name);
        CHECK(enumerate(m, 0, scales, 1.5).balls.empty());
    }
}

TEST_CASE("tangency graph edges are tangencies") {
    auto [m, scales] = load_balanced("fig8.tri");
    auto d = enumerate(m, 0, scales, 0.3);
    auto g = tangencies(d);
    CHECK(g.node_count == d.balls.size());
    CHECK(!g.edges.empty());
    for (const auto& e : g.edges) CHECK(std::abs(e.distance) < 1e-6);
}

TEST_CASE("exports") {
    auto [m, scales] = load_balanced("fig8.tri");
    auto d = enumerate(m, 0, scales, 0.5);
    std::string svg = diagram_svg(d);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(diagram_json(d).find("\"balls\"") != std::string::npos);
}

TEST_CASE("bad cutoffs are rejected") {
    auto [m, scales] = load_balanced("fig8.tri");
    CHECK_THROWS(enumerate(m, 0, scales, 0.0));
    CHECK_THROWS(enumerate(m, 0, scales, -1.0));
}
