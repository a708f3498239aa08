// One line per acceptance criterion; exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "cuspkit/cusps.hpp"
#include "cuspkit/horoballs.hpp"
#include "cuspkit/manifold.hpp"
#include "cuspkit/surfaces.hpp"

using namespace cuspkit;

namespace {

constexpr double pi = std::numbers::pi;

std::string data(const std::string& name) { return std::string(CUSPKIT_DATA) + "/" + name; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Clausen series: L(t) = Cl2(2t)/2, Cl2(x) = x - x log|x| + sum zeta(2n) x^(2n+1) / (n (2n+1) (2 pi)^(2n)).
double lobachevsky_series(double t) {
    t = std::remainder(t, pi);
    if (t == 0.0) return 0.0;
    double x = 2 * t, r = (x / (2 * pi)) * (x / (2 * pi)), p = x, sum = x - x * std::log(std::abs(x));
    for (int n = 1; n < 200; ++n) {
        p *= r;
        double term = std::riemann_zeta(2.0 * n) * p / (n * (2.0 * n + 1));
        sum += term;
        if (std::abs(term) < 1e-18) break;
    }
    return sum / 2;
}

double tet_volume_series(cplx z) {
    return lobachevsky_series(std::arg(z)) + lobachevsky_series(std::arg(1.0 - 1.0 / z)) +
           lobachevsky_series(std::arg(1.0 / (1.0 - z)));
}

double maximal_scale(const Manifold& m, int k) { return 1.0 / std::sqrt(largest_diameters(m, k).at(k)); }

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(int n, const std::string& title, const std::function<Outcome()>& body) {
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", n, title.c_str(), o.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(double v, int prec = 10) {
    std::ostringstream s;
    s.precision(prec);
    s << v;
    return s.str();
}

struct CandidateCase {
    const char* manifold;
    const char* candidate;
};

const CandidateCase kCandidates[] = {
    {"p333.tri", "p333_seifert.json"},
    {"p555.tri", "p555_seifert.json"},
    {"p777.tri", "p777_seifert.json"},
    {"whitehead.tri", "whitehead_checkerboard.json"},
    {"fig7link.tri", "fig7link_checkerboard_a.json"},
    {"fig7link.tri", "fig7link_checkerboard_b.json"},
    {"fig7link.tri", "fig7link_immersed.json"},
};

const char* const kExamples[] = {"fig8.tri", "fig8_alt.tri", "whitehead.tri", "p333.tri", "p555.tri",
                                 "p777.tri", "fig7link.tri", "twistfamily.tri"};

} // namespace

int main() {
    criterion(1, "figure-eight volume", [] {
        auto t0 = std::chrono::steady_clock::now();
        auto tri = load_triangulation(data("fig8.tri"));
        auto s = solve_shapes(tri);
        double v = volume(s);
        double secs = seconds_since(t0);
        double oracle = 0;
        for (cplx z : s.z) oracle += tet_volume_series(z);
        bool ok = std::abs(v - oracle) < 1e-9 && std::abs(oracle - 2.029883212819) < 1e-9 && secs < 1.0;
        return Outcome{ok, "volume " + fmt(v, 13) + ", series oracle " + fmt(oracle, 13) + ", " + fmt(secs, 3) + " s"};
    });

    std::vector<WidthReport> pretzel_widths;
    criterion(2, "pretzel longitudes have length six", [&] {
        bool ok = true;
        std::string detail;
        for (const char* name : {"p333.tri", "p555.tri", "p777.tri"}) {
            auto t0 = std::chrono::steady_clock::now();
            Manifold m = load_manifold(data(name));
            double len = slope_length(cusp_shape_of(m, 0, maximal_scale(m, 0)), 0, 1);
            double secs = seconds_since(t0);
            ok = ok && std::abs(len - 6.0) < 1e-6 && secs < 30.0;
            detail += std::string(name) + " " + fmt(len, 12) + " (" + fmt(secs, 3) + " s)  ";
        }
        return Outcome{ok, detail};
    });

    criterion(3, "p333 horoball symmetry", [] {
        Manifold m = load_manifold(data("p333.tri"));
        auto w = balance_cusps(m);
        auto d = enumerate(m, 0, w.scales, 0.5);
        auto sym = detect_symmetry(d, 0, 1, 6);
        std::size_t full = d.count_full_sized(1e-6);
        return Outcome{sym.verified && full >= 6,
                       "order-6 longitude symmetry " + std::string(sym.verified ? "verified" : "not verified") + ", " +
                           std::to_string(full) + " full-sized balls"};
    });

    criterion(4, "pretzel width window", [] {
        bool ok = true;
        double prev = 0;
        std::string detail;
        for (const char* name : {"p333.tri", "p555.tri", "p777.tri"}) {
            double w = balance_cusps(load_manifold(data(name))).width;
            ok = ok && w >= 1.0 - 1e-6 && w <= 2.0 - 1e-6 && w > prev;
            prev = w;
            detail += std::string(name) + " w = " + fmt(w) + "  ";
        }
        return Outcome{ok, detail};
    });

    std::vector<WidthTheoremReport> reports;
    for (const auto& c : kCandidates) {
        try {
            reports.push_back(width_theorem_report(load_manifold(data(c.manifold)), load_candidate(data(c.candidate))));
        } catch (const std::exception& e) {
            std::printf("note: %s / %s failed: %s\n", c.manifold, c.candidate, e.what());
            WidthTheoremReport r;
            r.manifold = c.manifold;
            r.candidate = c.candidate;
            reports.push_back(r);
        }
    }

    criterion(5, "bigon exclusion", [&] {
        std::size_t checked = 0, bigons = 0;
        for (const auto& r : reports) {
            if (r.verdict != Invariance::embedded) continue;
            ++checked;
            bigons += r.bigons;
        }
        return Outcome{bigons == 0 && checked > 0,
                       std::to_string(checked) + " embedded candidates, " + std::to_string(bigons) + " 2-gons"};
    });

    criterion(6, "3-gon detector", [&] {
        auto synth = find_ngons(synthetic_trigon_lifts(), synthetic_trigon_diagram(), 6);
        bool ok = synth.size() == 1 && synth[0].n() == 3;
        std::string detail = "synthetic fixture: " + std::to_string(synth.size()) + " witness(es)";
        std::size_t unit = 0;
        for (const auto& r : reports) {
            if (r.verdict != Invariance::embedded) continue;
            bool one = std::abs(r.width - 1.0) < 1e-6;
            unit += one;
            ok = ok && one == (r.trigons > 0);
            detail += "; " + r.manifold + "/" + r.candidate + " w = " + fmt(r.width, 8) + ", " +
                      std::to_string(r.trigons) + " 3-gons";
        }
        detail += "; width-one cases: " + std::to_string(unit);
        return Outcome{ok, detail};
    });

    criterion(7, "surface verification", [&] {
        auto find = [&](const std::string& cand) -> const WidthTheoremReport& {
            for (const auto& r : reports)
                if (r.candidate == cand) return r;
            throw std::runtime_error("no report for " + cand);
        };
        const auto& p333 = find("p333-seifert");
        bool ok = p333.verdict == Invariance::embedded && p333.slopes.size() == 1 &&
                  p333.slopes[0] == std::pair<long, long>{0, 1};
        int emb = 0, imm = 0;
        for (const auto& r : reports)
            if (r.manifold == "fig7link") {
                emb += r.verdict == Invariance::embedded;
                imm += r.verdict == Invariance::immersed;
            }
        ok = ok && emb == 2 && imm == 1;
        const auto& wh = find("whitehead-checkerboard");
        bool lcurves = wh.verdict == Invariance::embedded && wh.slopes.size() == 2;
        for (auto [p, q] : wh.slopes) lcurves = lcurves && std::abs(q) == 1;
        ok = ok && lcurves;
        std::string wslopes;
        for (auto [p, q] : wh.slopes) wslopes += "(" + std::to_string(p) + "," + std::to_string(q) + ")";
        return Outcome{ok, "p333 " + to_string(p333.verdict) + " slope (" + std::to_string(p333.slopes.at(0).first) +
                               "," + std::to_string(p333.slopes.at(0).second) + "); fig7link " + std::to_string(emb) +
                               " embedded, " + std::to_string(imm) + " immersed; Whitehead " + to_string(wh.verdict) +
                               " slopes " + wslopes};
    });

    criterion(8, "twist family decay", [] {
        auto tri = load_triangulation(data("twistfamily.tri"));
        std::vector<long> ps;
        for (long p = 5; p <= 25; ++p) ps.push_back(p);
        TwistSeries s = twist_series(tri, ps);
        bool ok = s.framing_shift == 4 && s.rows.size() == ps.size() && s.below_one_from.has_value();
        double worst = 0;
        for (std::size_t i = 0; i < s.rows.size(); ++i) {
            const auto& r = s.rows[i];
            worst = std::max(worst, std::abs(r.width * r.eta_length - r.area) / r.area);
            if (i > 0) ok = ok && r.width < s.rows[i - 1].width;
            if (s.below_one_from && r.p >= *s.below_one_from) ok = ok && r.width < 1.0;
        }
        ok = ok && worst <= 1e-6;
        std::string detail = s.rows.empty() ? "no rows"
                                            : "w_5 = " + fmt(s.rows.front().width, 8) + ", w_25 = " + fmt(s.rows.back().width, 8);
        detail += ", below one from p = " + (s.below_one_from ? std::to_string(*s.below_one_from) : std::string("none"));
        detail += ", area identity error " + fmt(worst, 3);
        return Outcome{ok, detail};
    });

    criterion(9, "property suites", [] {
        std::mt19937_64 gen(2024);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        auto rc = [&] { return cplx(u(gen), u(gen)); };
        // isometry invariance against the closed-form distance
        int iso_bad = 0;
        auto cosh_d = [](const Point3& p, const Point3& q) {
            double dt = p.t - q.t;
            return 1.0 + (std::norm(p.z - q.z) + dt * dt) / (2 * p.t * q.t);
        };
        for (int i = 0; i < 1000; ++i) {
            MoebiusMap m;
            for (;;) {
                cplx a = rc(), b = rc(), c = rc(), d = rc();
                if (std::abs(a * d - b * c) > 0.3) {
                    m = MoebiusMap(a, b, c, d);
                    break;
                }
            }
            Point3 p{rc(), std::abs(u(gen)) + 0.2}, q{rc(), std::abs(u(gen)) + 0.2};
            double d0 = std::acosh(cosh_d(p, q)), d1 = std::acosh(cosh_d(apply_point(m, p), apply_point(m, q)));
            if (std::abs(d0 - d1) > 1e-9 * std::max(1.0, d0)) ++iso_bad;
        }
        // minimal l-curve against exhaustive search
        int lc_bad = 0;
        std::uniform_real_distribution<double> re(-30.0, 30.0), im(0.3, 20.0);
        for (int i = 0; i < 1000; ++i) {
            cplx lam(re(gen), im(gen));
            long best = 0;
            double best_len = std::abs(lam);
            for (long a = 1; a <= 5000; ++a)
                for (long k : {a, -a})
                    if (std::abs(lam + double(k)) < best_len * (1.0 - 1e-12)) {
                        best_len = std::abs(lam + double(k));
                        best = k;
                    }
            if (minimal_l_curve(CuspShape(1.0, lam)).k != best) ++lc_bad;
        }
        // enumeration determinism and depth stability
        int enum_bad = 0, diagrams = 0;
        for (const char* name : kExamples) {
            Manifold m = load_manifold(data(name));
            auto scales = balance_cusps(m).scales;
            for (int k : m.complete_cusps()) {
                ++diagrams;
                auto a = enumerate(m, k, scales, 0.2), b = enumerate(m, k, scales, 0.2);
                auto deep = enumerate(m, k, scales, 0.1);
                std::size_t kept = 0;
                for (const auto& x : deep.balls) kept += x.diameter >= 0.2 + 1e-7;
                if (!a.verified || diagram_json(a) != diagram_json(b) || kept != a.balls.size()) ++enum_bad;
            }
        }
        return Outcome{iso_bad == 0 && lc_bad == 0 && enum_bad == 0,
                       "isometry " + std::to_string(iso_bad) + "/1000 off, l-curve " + std::to_string(lc_bad) +
                           "/1000 off, enumeration " + std::to_string(enum_bad) + "/" + std::to_string(diagrams) +
                           " diagrams unstable"};
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
