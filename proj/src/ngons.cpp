#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "cuspkit/surfaces.hpp"
#include "lattice_util.hpp"
#include "surface_internal.hpp"

namespace cuspkit {

namespace {

// Boundary line of a plane after w = 1/(z - c), for a plane through c, as
// (unit normal, offset): the line is Re(conj(normal) * w) = offset.
std::pair<cplx, double> inverted_line(const GeodesicPlane& P, cplx c) {
    if (P.is_vertical()) return {cplx(0, 1) * std::conj(P.direction), 0.0};
    cplx u = P.center - c;
    double r = std::abs(u);
    return {std::conj(u) / r, 1.0 / (2.0 * r)};
}

// Horospherical length of the arc between two planes tangent at c, on the
// horoball of diameter D centered there.
double corner_arc(const GeodesicPlane& A, const GeodesicPlane& B, cplx c, double D) {
    auto [n1, s1] = inverted_line(A, c);
    auto [n2, s2] = inverted_line(B, c);
    double sgn = std::real(n2 * std::conj(n1)) >= 0 ? 1.0 : -1.0;
    return std::abs(s1 - sgn * s2) * D;
}

std::vector<std::pair<int, long long>> signature(const NGonWitness& w) {
    std::vector<std::pair<int, long long>> s;
    for (const auto& c : w.corners) s.emplace_back(c.cusp, std::llround(c.arc * 1e6));
    auto best = s;
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t r = 0; r < s.size(); ++r) {
            std::rotate(s.begin(), s.begin() + 1, s.end());
            best = std::min(best, s);
        }
        std::reverse(s.begin(), s.end());
    }
    return best;
}

struct Member {
    GeodesicPlane plane;
    std::size_t index;
    cplx shift;
};

} // namespace

std::vector<std::pair<int, long long>> ngon_signature(const NGonWitness& w) { return signature(w); }

std::vector<NGonWitness> find_ngons(const PlaneLiftSet& lifts, const HoroballDiagram& diagram, int max_n,
                                    double tangency_tol) {
    std::vector<NGonWitness> out;
    if (max_n < 2 || lifts.planes.empty()) return out;
    const cplx mu = lifts.mu, lambda = lifts.lambda;
    if (diagram.cusp != lifts.cusp || std::abs(diagram.mu - mu) > 1e-9 * std::abs(mu) ||
        std::abs(diagram.lambda - lambda) > 1e-9 * std::abs(lambda))
        throw std::invalid_argument("diagram and lift set are drawn in different frames");

    PeriodicGrid grid(mu, lambda, 1e-6);
    for (std::size_t i = 0; i < diagram.balls.size(); ++i) {
        if (grid.find(diagram.balls[i].center, 0) < 0) grid.insert(diagram.balls[i].center, 0, static_cast<long>(i));
    }
    auto ball_at = [&](const std::optional<BoundaryPoint>& p) -> const BallEntry* {
        if (!p || p->is_infinite()) return nullptr;
        long i = grid.find(p->value(), 0);
        return i < 0 ? nullptr : &diagram.balls[static_cast<std::size_t>(i)];
    };
    const double tol = 10.0 * default_tolerance().tangency;
    auto touch = [&](const GeodesicPlane& a, const GeodesicPlane& b) -> std::optional<std::pair<cplx, const BallEntry*>> {
        auto rel = plane_pair_relation(a, b, tol, tangency_tol);
        if (rel.kind != PlanePairKind::tangent) return std::nullopt;
        const BallEntry* ball = ball_at(rel.touch);
        if (!ball) return std::nullopt;
        return std::make_pair(rel.touch->value(), ball);
    };

    std::vector<std::size_t> hemis;
    for (std::size_t i = 0; i < lifts.planes.size(); ++i)
        if (!lifts.planes[i].plane.is_vertical()) hemis.push_back(i);

    std::set<std::vector<std::pair<int, long long>>> seen;
    auto verts = lifts.verticals();
    for (const PlaneLift* va_lift : verts) {
        const GeodesicPlane& Va = va_lift->plane;
        auto dir = detail::lattice_direction(Va.direction, mu, lambda, 1e-6, 60);
        if (!dir) continue;
        const cplx d = Va.direction;
        const cplx along_v = std::real(std::conj(d) * dir->v) > 0 ? dir->v : -dir->v;
        const double L = std::abs(dir->v), period = dir->period;
        auto off = [&](cplx z) { return std::imag(std::conj(d) * z); };
        const double oa = off(Va.base);

        // nearest parallel lift on the side of increasing offset
        double gap = period;
        const PlaneLift* vb_lift = va_lift;
        for (const PlaneLift* other : verts) {
            if (std::abs(std::imag(std::conj(other->plane.direction) * d)) > 1e-6) continue;
            double g = off(other->plane.base) - oa;
            g -= period * std::floor(g / period);
            if (g > tol && g < gap - tol) {
                gap = g;
                vb_lift = other;
            }
        }
        const double ob = oa + gap;
        double k = std::round((ob - off(vb_lift->plane.base)) / period);
        Member A{Va, static_cast<std::size_t>(va_lift - lifts.planes.data()), 0.0};
        Member B{GeodesicPlane::vertical(vb_lift->plane.base + k * dir->step, vb_lift->plane.direction),
                 static_cast<std::size_t>(vb_lift - lifts.planes.data()), k * dir->step};
        const double infinity_arc = gap;

        auto in_strip = [&](const GeodesicPlane& H) {
            double o = off(H.center);
            double band = tangency_tol * std::max(1.0, H.radius);
            return o - H.radius >= oa - band && o + H.radius <= ob + band;
        };

        std::vector<Member> chain;
        std::vector<std::pair<cplx, const BallEntry*>> touches;

        auto same = [&](const GeodesicPlane& x, const GeodesicPlane& y) {
            return std::abs(x.center - y.center) < tol * std::max(1.0, x.radius) &&
                   std::abs(x.radius - y.radius) < tol * std::max(1.0, x.radius);
        };

        auto emit = [&](std::pair<cplx, const BallEntry*> last) {
            // cycle order: A, B, chain...; corner i joins member i to member i+1
            std::vector<Member> cyc{A, B};
            cyc.insert(cyc.end(), chain.begin(), chain.end());
            const std::size_t n = cyc.size();
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 2; j < n; ++j) {
                    if (i == 0 && j == n - 1) continue;
                    if (cyc[i].plane.is_vertical() && cyc[j].plane.is_vertical()) return;
                    if (touch(cyc[i].plane, cyc[j].plane)) return;
                }
            NGonWitness w;
            w.frame_cusp = lifts.cusp;
            w.corners.push_back({A.index, A.shift, BoundaryPoint::infinity(), lifts.cusp, infinity_arc});
            std::vector<std::pair<cplx, const BallEntry*>> pts = touches;
            pts.push_back(last);
            for (std::size_t i = 1; i < n; ++i) {
                const auto& [p, ball] = pts[i - 1];
                const Member& cur = cyc[i];
                const Member& nxt = cyc[(i + 1) % n];
                w.corners.push_back({cur.index, cur.shift, BoundaryPoint(p), ball->cusp,
                                     corner_arc(cur.plane, nxt.plane, p, ball->diameter)});
            }
            if (seen.insert(signature(w)).second) out.push_back(std::move(w));
        };

        std::function<void(const Member&)> extend = [&](const Member& H) {
            if (auto t = touch(H.plane, A.plane)) {
                emit(*t);
                return;
            }
            if (static_cast<int>(chain.size()) + 2 >= max_n) return;
            for (std::size_t qi : hemis) {
                const GeodesicPlane& Q = lifts.planes[qi].plane;
                for_each_translate(mu, lambda, H.plane.center - Q.center, H.plane.radius + Q.radius + tol, [&](cplx v) {
                    GeodesicPlane P = GeodesicPlane::hemisphere(Q.center + v, Q.radius);
                    if (!in_strip(P)) return;
                    for (const auto& m : chain)
                        if (same(m.plane, P)) return;
                    auto t = touch(H.plane, P);
                    if (!t) return;
                    if (touch(P, B.plane)) return; // chord back to B
                    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
                        if (touch(chain[i].plane, P)) return;
                    touches.push_back(*t);
                    chain.push_back({P, qi, v});
                    extend(chain.back());
                    chain.pop_back();
                    touches.pop_back();
                });
            }
        };

        if (max_n < 3) continue; // distinct parallel lines meet only at infinity
        // first hemisphere: tangent to B from inside the strip, one translate along the strip
        for (std::size_t qi : hemis) {
            const GeodesicPlane& Q = lifts.planes[qi].plane;
            double oq = off(Q.center);
            double m = std::round((ob - Q.radius - oq) / period);
            cplx across = m * dir->step;
            GeodesicPlane P = GeodesicPlane::hemisphere(Q.center + across, Q.radius);
            double along = std::real(std::conj(d) * P.center);
            cplx shift = across - std::floor(along / L) * along_v;
            P = GeodesicPlane::hemisphere(Q.center + shift, Q.radius);
            if (!in_strip(P)) continue;
            auto t = touch(B.plane, P);
            if (!t) continue;
            touches.push_back(*t);
            chain.push_back({P, qi, shift});
            extend(chain.back());
            chain.pop_back();
            touches.pop_back();
        }
    }
    return out;
}

PlaneLiftSet synthetic_trigon_lifts() {
    PlaneLiftSet s;
    s.cusp = 0;
    s.scales = {1.0};
    s.mu = 1.0;
    s.lambda = cplx(0.0, 2.0);
    s.min_radius = 0.05;
    s.planes.push_back({GeodesicPlane::vertical(0.0, cplx(0.0, 1.0)), {}});
    s.planes.push_back({GeodesicPlane::hemisphere(0.5, 0.5), {}});
    s.verified = true;
    return s;
}

HoroballDiagram synthetic_trigon_diagram() {
    HoroballDiagram d;
    d.manifold = "synthetic";
    d.cusp = 0;
    d.scales = {1.0};
    d.cutoff = 0.5;
    d.mu = 1.0;
    d.lambda = cplx(0.0, 2.0);
    d.balls.push_back({0.0, 1.0, {}, 0});
    d.verified = true;
    return d;
}

} // namespace cuspkit
