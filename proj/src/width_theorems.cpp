#include <json.hpp>

#include <cmath>
#include <set>
#include <sstream>

#include "cuspkit/format.hpp"
#include "cuspkit/surfaces.hpp"

namespace cuspkit {

bool WidthTheoremReport::all_pass() const {
    return std::all_of(clauses.begin(), clauses.end(), [](const Clause& c) { return !c.applicable || c.pass; });
}

namespace {

std::string num(double v) { return fmt12(v); }

} // namespace

WidthTheoremReport width_theorem_report(const Manifold& m, const SurfaceCandidate& c, int max_n) {
    constexpr double kTol = 1e-6;
    WidthTheoremReport rep;
    rep.manifold = m.name;
    rep.candidate = c.name;

    InvarianceReport inv = verify_invariant(m, c);
    rep.verdict = inv.verdict;
    const bool embedded = inv.verdict == Invariance::embedded;
    const bool tg = inv.verdict != Invariance::not_invariant;

    const std::vector<int> cusps = m.complete_cusps();
    std::vector<double> unit(m.cusp_count(), 1.0);
    std::vector<std::pair<long, long>> curves;
    std::vector<bool> meets;
    for (int k : cusps) {
        std::pair<long, long> slope{0, 1};
        bool hit = false;
        if (tg) {
            PlaneLiftSet lifts = k == c.frame_cusp ? inv.lifts : orbit_planes(m, k, unit, seed_in_frame(m, c, k, unit), 0.05);
            if (!lifts.verticals().empty()) {
                slope = boundary_slope(lifts, cusp_shape_of(m, k));
                hit = true;
            }
        }
        rep.slopes.push_back(slope);
        curves.push_back(slope);
        meets.push_back(hit);
    }
    rep.widths = balance_cusps(m, curves);
    rep.width = rep.widths.width;

    if (tg) {
        std::set<std::vector<std::pair<int, long long>>> seen;
        for (int k : cusps) {
            const auto& scales = rep.widths.scales;
            PlaneLiftSet lifts = orbit_planes(m, k, scales, seed_in_frame(m, c, k, scales), 0.05 * scales[k]);
            if (!lifts.verified) continue;
            HoroballDiagram diagram = enumerate(m, k, scales, 0.1);
            for (auto& w : find_ngons(lifts, diagram, max_n))
                if (seen.insert(ngon_signature(w)).second) rep.ngons.push_back(std::move(w));
        }
    }
    for (const auto& w : rep.ngons) {
        if (w.n() == 2) ++rep.bigons;
        if (w.n() == 3) ++rep.trigons;
    }

    const double w = rep.width;
    const bool free_like = c.freeness == Freeness::free || c.freeness == Freeness::semifree;
    auto add = [&](std::string name, bool applicable, bool pass, std::string detail) {
        rep.clauses.push_back({std::move(name), applicable, pass, std::move(detail)});
    };
    add("width_at_least_one", embedded, w >= 1.0 - kTol, "w = " + num(w));
    add("width_below_two", embedded && free_like, w <= 2.0 - kTol,
        "w = " + num(w) + ", freeness " + to_string(c.freeness));
    add("no_bigon", tg, rep.bigons == 0, std::to_string(rep.bigons) + " essential 2-gons");
    const bool unit_width = std::abs(w - 1.0) < kTol;
    add("width_one_iff_trigon", embedded, unit_width == (rep.trigons > 0),
        "|w - 1| = " + num(std::abs(w - 1.0)) + ", " + std::to_string(rep.trigons) + " essential 3-gons");
    add("trigon_parity", embedded && c.orientable.value_or(false), rep.trigons == 0,
        c.orientable ? (*c.orientable ? "orientable" : "non-orientable") : "orientability unknown");
    if (c.claimed_slope) {
        std::pair<long, long> got{0, 0};
        bool have = false;
        for (std::size_t i = 0; i < cusps.size(); ++i)
            if (cusps[i] == c.frame_cusp && meets[i]) {
                got = rep.slopes[i];
                have = true;
            }
        auto [p, q] = *c.claimed_slope;
        bool same = have && ((got.first == p && got.second == q) || (got.first == -p && got.second == -q));
        add("claimed_slope", tg, same,
            "(" + std::to_string(got.first) + "," + std::to_string(got.second) + ") on cusp " +
                std::to_string(c.frame_cusp));
    }
    return rep;
}

std::string width_theorem_json(const WidthTheoremReport& r) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["manifold"] = r.manifold;
    j["candidate"] = r.candidate;
    j["verdict"] = to_string(r.verdict);
    ordered_json slopes = ordered_json::array();
    for (std::size_t i = 0; i < r.slopes.size(); ++i)
        slopes.push_back({{"cusp", r.widths.cusps.at(i)}, {"slope", {r.slopes[i].first, r.slopes[i].second}}});
    j["slopes"] = slopes;
    j["width"] = sig12(r.width);
    ordered_json scales = ordered_json::array();
    for (double s : r.widths.scales) scales.push_back(sig12(s));
    j["scales"] = scales;
    ordered_json ngons = ordered_json::array();
    for (const auto& w : r.ngons) {
        ordered_json corners = ordered_json::array();
        for (const auto& c : w.corners) {
            ordered_json e;
            e["plane"] = c.plane;
            e["shift"] = {sig12(c.shift.real()), sig12(c.shift.imag())};
            if (c.point.is_infinite()) e["point"] = "inf";
            else e["point"] = {sig12(c.point.value().real()), sig12(c.point.value().imag())};
            e["cusp"] = c.cusp;
            e["arc"] = sig12(c.arc);
            corners.push_back(e);
        }
        ngons.push_back({{"n", w.n()}, {"frame_cusp", w.frame_cusp}, {"corners", corners}});
    }
    j["ngons"] = ngons;
    j["bigons"] = r.bigons;
    j["trigons"] = r.trigons;
    ordered_json clauses = ordered_json::array();
    for (const auto& c : r.clauses)
        clauses.push_back({{"name", c.name},
                           {"applicable", c.applicable},
                           {"pass", !c.applicable || c.pass},
                           {"detail", c.detail}});
    j["clauses"] = clauses;
    j["all_pass"] = r.all_pass();
    return j.dump(2) + "\n";
}

} // namespace cuspkit
