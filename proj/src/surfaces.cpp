#include "cuspkit/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <unordered_map>

#include "frame_moves.hpp"
#include "lattice_util.hpp"
#include "surface_internal.hpp"

namespace cuspkit {

std::string to_string(Freeness f) {
    switch (f) {
    case Freeness::free: return "free";
    case Freeness::semifree: return "semifree";
    case Freeness::totally_knotted: return "totally_knotted";
    case Freeness::unknown: return "unknown";
    }
    return "unknown";
}

Freeness parse_freeness(const std::string& s) {
    if (s == "free") return Freeness::free;
    if (s == "semifree") return Freeness::semifree;
    if (s == "totally_knotted") return Freeness::totally_knotted;
    if (s == "unknown") return Freeness::unknown;
    throw std::invalid_argument("unknown freeness class '" + s + "'");
}

std::string to_string(Invariance v) {
    switch (v) {
    case Invariance::embedded: return "embedded";
    case Invariance::immersed: return "immersed";
    case Invariance::not_invariant: return "not_invariant";
    }
    return "not_invariant";
}

std::vector<const PlaneLift*> PlaneLiftSet::verticals() const {
    std::vector<const PlaneLift*> out;
    for (const auto& l : planes)
        if (l.plane.is_vertical()) out.push_back(&l);
    return out;
}

namespace detail {

std::optional<LatticeDirection> lattice_direction(cplx dir, cplx mu, cplx lambda, double tol, long bound) {
    std::optional<LatticeDirection> best;
    double area = std::abs(std::imag(std::conj(mu) * lambda));
    for (long p = -bound; p <= bound; ++p) {
        for (long q = 0; q <= bound; ++q) {
            if ((q == 0 && p <= 0) || std::gcd(p, q) != 1) continue;
            cplx v = static_cast<double>(p) * mu + static_cast<double>(q) * lambda;
            if (std::abs(std::imag(std::conj(dir) * v)) > tol * std::abs(v)) continue;
            if (best && std::abs(v) >= std::abs(best->v)) continue;
            LatticeDirection d;
            d.p = p;
            d.q = q;
            d.v = v;
            d.period = area / std::abs(v);
            // complete (p, q) to a basis: p*b - q*a = 1
            long a = 0, b = 0;
            {
                long r0 = p, r1 = q, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
                while (r1 != 0) {
                    long k = r0 / r1;
                    std::tie(r0, r1) = std::make_pair(r1, r0 - k * r1);
                    std::tie(s0, s1) = std::make_pair(s1, s0 - k * s1);
                    std::tie(t0, t1) = std::make_pair(t1, t0 - k * t1);
                }
                // s0*p + t0*q = r0 = +-1
                b = s0 * r0;
                a = -t0 * r0;
            }
            d.step_index = {a, b};
            d.step = static_cast<double>(a) * mu + static_cast<double>(b) * lambda;
            cplx u = dir / std::abs(dir);
            if (std::imag(std::conj(u) * d.step) < 0) {
                d.step = -d.step;
                d.step_index = {-a, -b};
            }
            best = d;
        }
    }
    return best;
}

double line_offset(const GeodesicPlane& v) { return std::imag(std::conj(v.direction) * v.base); }

bool near_pole(const GeodesicPlane& p, cplx pole, double tol) {
    if (p.is_vertical()) return std::abs(std::imag(std::conj(p.direction) * (pole - p.base))) < tol;
    return std::abs(std::abs(pole - p.center) - p.radius) < tol * std::max(1.0, p.radius);
}

// Moves the plane by at most `tol` so that it passes exactly through `pole`.
GeodesicPlane snap_to(const GeodesicPlane& p, cplx pole) {
    if (p.is_vertical()) return GeodesicPlane::vertical(pole, p.direction);
    return GeodesicPlane::hemisphere(p.center, std::abs(pole - p.center));
}

} // namespace detail

using detail::lattice_direction;
using detail::LatticeDirection;
using detail::line_offset;

namespace {

struct LiftNode {
    GeodesicPlane plane;
    long parent;
    int move;
    std::pair<long, long> pre, shift;
    int dir_class; // -1 for hemispheres
    bool expanded = false;
};

// Hemisphere lookup modulo the lattice with tolerance.
class HemisphereIndex {
public:
    HemisphereIndex(cplx mu, cplx lambda) : mu_(mu), lambda_(lambda) {}
    template <class F>
    void near(cplx center, F&& f) const {
        auto [x, y] = wrapped(center);
        long ix = cell(x), iy = cell(y);
        for (long dx = -1; dx <= 1; ++dx)
            for (long dy = -1; dy <= 1; ++dy) {
                auto it = map_.find(key(mod(ix + dx), mod(iy + dy)));
                if (it == map_.end()) continue;
                for (std::size_t idx : it->second) f(idx);
            }
    }
    void insert(cplx center, std::size_t idx) {
        auto [x, y] = wrapped(center);
        map_[key(cell(x), cell(y))].push_back(idx);
    }

private:
    static constexpr long kCells = 512;
    std::pair<double, double> wrapped(cplx z) const {
        auto [x, y] = lattice_coords(z, mu_, lambda_);
        return {x - std::floor(x), y - std::floor(y)};
    }
    static long cell(double v) { return mod(static_cast<long>(std::floor(v * kCells))); }
    static long mod(long i) { return ((i % kCells) + kCells) % kCells; }
    static long key(long ix, long iy) { return ix * kCells + iy; }
    cplx mu_, lambda_;
    std::unordered_map<long, std::vector<std::size_t>> map_;
};

// Distance between two points modulo the lattice.
double periodic_distance(cplx a, cplx b, cplx mu, cplx lambda) {
    cplx r = reduce_point(a - b, mu, lambda);
    double best = std::abs(r);
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j)
            best = std::min(best, std::abs(r + static_cast<double>(i) * mu + static_cast<double>(j) * lambda));
    return best;
}

} // namespace

PlaneLiftSet orbit_planes(const Manifold& m, int cusp, const std::vector<double>& scales, const GeodesicPlane& seed,
                          double min_radius, const OrbitOptions& opts) {
    if (!(min_radius > 0)) throw std::invalid_argument("minimum radius must be positive");
    const DisplayFrame f = display_frame(m, cusp, scales);
    const std::vector<FrameMove> moves = frame_moves(m, cusp, scales);

    PlaneLiftSet out;
    out.cusp = cusp;
    out.scales = scales;
    out.mu = f.mu;
    out.lambda = f.lambda;
    out.min_radius = min_radius;

    const double tol = 100.0 * opts.tol;
    const double near_tol = 1e-3;
    const double huge = 100.0 * std::max(std::abs(f.mu), std::abs(f.lambda));
    std::vector<LiftNode> nodes;
    std::vector<LatticeDirection> classes;
    std::vector<std::vector<std::size_t>> class_members;
    HemisphereIndex hemis(f.mu, f.lambda);
    std::deque<std::size_t> queue;
    double theta = min_radius / 2.0;
    bool discrete = true;
    struct NearMiss {
        long existing; // lift that the new one nearly coincides with, -1 if none
        long parent;   // the new lift is move * T(pre) applied to this node
        int move;
        std::pair<long, long> pre;
    };
    std::optional<NearMiss> accumulation_pair;

    const auto& pw = m.holonomy.cusps[cusp];
    auto translation_word = [&](std::pair<long, long> t) {
        return word_concat(word_power(pw->meridian, t.first), word_power(pw->longitude, t.second));
    };
    auto lattice_index = [&](cplx v) -> std::pair<long, long> {
        auto [x, y] = f.coords(v);
        return {std::lround(x), std::lround(y)};
    };
    auto word_of = [&](std::size_t idx) {
        std::vector<std::size_t> chain;
        for (long i = static_cast<long>(idx); i >= 0; i = nodes[static_cast<std::size_t>(i)].parent)
            chain.push_back(static_cast<std::size_t>(i));
        Word w;
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            const LiftNode& n = nodes[*it];
            w = word_concat(translation_word(n.pre), w);
            if (n.move >= 0) w = word_concat(moves[static_cast<std::size_t>(n.move)].w, w);
            w = word_concat(translation_word(n.shift), w);
        }
        return w;
    };

    auto class_of = [&](cplx dir) -> int {
        for (std::size_t i = 0; i < classes.size(); ++i)
            if (std::abs(std::imag(std::conj(dir) * classes[i].v)) < 1e-6 * std::abs(classes[i].v)) return static_cast<int>(i);
        auto d = lattice_direction(dir, f.mu, f.lambda, 1e-6, 60);
        if (!d) return -1;
        // offsets in a class are measured along i*v, whatever sign the planes carry
        if (std::imag(std::conj(d->v) * d->step) < 0) {
            d->step = -d->step;
            d->step_index = {-d->step_index.first, -d->step_index.second};
        }
        classes.push_back(*d);
        class_members.emplace_back();
        return static_cast<int>(classes.size() - 1);
    };

    auto insert = [&](GeodesicPlane P, long parent, int move, std::pair<long, long> pre) {
        if (!discrete) return;
        if (P.is_vertical()) {
            int k = class_of(P.direction);
            if (k < 0) {
                discrete = false;
                out.nonlattice_vertical = true;
                accumulation_pair = NearMiss{-1, parent, move, pre};
                return;
            }
            const auto& cl = classes[static_cast<std::size_t>(k)];
            auto along = [&](cplx z) { return std::imag(std::conj(cl.v) * z) / std::abs(cl.v); };
            double o = along(P.base);
            double steps = std::floor(o / cl.period);
            cplx shift = -steps * cl.step;
            std::pair<long, long> shift_index{-static_cast<long>(steps) * cl.step_index.first,
                                              -static_cast<long>(steps) * cl.step_index.second};
            P = GeodesicPlane::vertical(P.base + shift, cl.v);
            double oo = along(P.base);
            for (std::size_t j : class_members[static_cast<std::size_t>(k)]) {
                double e = std::remainder(oo - along(nodes[j].plane.base), cl.period);
                if (std::abs(e) < tol * std::max(1.0, cl.period)) return;
                if (std::abs(e) < near_tol * cl.period) {
                    discrete = false;
                    accumulation_pair = NearMiss{static_cast<long>(j), parent, move, pre};
                    return;
                }
            }
            nodes.push_back({P, parent, move, pre, shift_index, k});
            class_members[static_cast<std::size_t>(k)].push_back(nodes.size() - 1);
            queue.push_back(nodes.size() - 1);
            return;
        }
        if (P.radius < 1e-3 * theta) return;
        if (P.radius > huge || std::abs(P.center) > huge) return; // a vertical plane lost to rounding
        cplx shift;
        cplx c = f.reduce(P.center, &shift);
        P = GeodesicPlane::hemisphere(c, P.radius);
        bool dup = false, close = false;
        long close_to = -1;
        hemis.near(c, [&](std::size_t j) {
            const auto& Q = nodes[j].plane;
            double dc = periodic_distance(Q.center, c, f.mu, f.lambda);
            double dr = std::abs(Q.radius - P.radius);
            double s = std::max(1.0, P.radius);
            if (dc < tol * s && dr < tol * s) dup = true;
            else if (dc < near_tol * P.radius && dr < near_tol * P.radius) {
                close = true;
                close_to = static_cast<long>(j);
            }
        });
        if (dup) return;
        if (close) {
            discrete = false;
            accumulation_pair = NearMiss{close_to, parent, move, pre};
            return;
        }
        nodes.push_back({P, parent, move, pre, lattice_index(shift), -1});
        hemis.insert(c, nodes.size() - 1);
        if (P.radius >= theta) queue.push_back(nodes.size() - 1);
    };

    auto expand = [&](std::size_t idx) {
        const LiftNode n = nodes[idx];
        for (std::size_t i = 0; i < moves.size(); ++i) {
            const MoebiusMap& M = moves[i].M;
            auto push = [&](cplx v) {
                GeodesicPlane src = n.plane;
                if (n.plane.is_vertical()) src = GeodesicPlane::vertical(src.base + v, src.direction);
                else src = GeodesicPlane::hemisphere(src.center + v, src.radius);
                MoebiusMap A = M;
                if (std::abs(M.c) > 1e-9 * M.norm()) {
                    cplx pole = -M.d / M.c;
                    if (detail::near_pole(src, pole, tol * std::max(1.0, std::abs(pole)))) src = detail::snap_to(src, pole);
                } else {
                    A = MoebiusMap(M.a, M.b, 0.0, M.d); // fixes infinity up to rounding
                }
                insert(apply_plane(A, src), static_cast<long>(idx), static_cast<int>(i), lattice_index(v));
            };
            if (std::abs(M.c) <= 1e-9 * M.norm()) {
                push(0.0);
                continue;
            }
            cplx pole = -M.d / M.c;
            double c2 = std::norm(M.c);
            if (n.plane.is_vertical()) {
                const auto& cl = classes[static_cast<std::size_t>(n.dir_class)];
                cplx u = cl.v / std::abs(cl.v);
                double o = std::imag(std::conj(u) * n.plane.base);
                double op = std::imag(std::conj(u) * pole);
                double reach = 1.0 / (2.0 * c2 * theta);
                long k0 = static_cast<long>(std::ceil((op - reach - o) / cl.period));
                long k1 = static_cast<long>(std::floor((op + reach - o) / cl.period));
                for (long k = k0; k <= k1; ++k) push(static_cast<double>(k) * cl.step);
            } else {
                double R = n.plane.radius;
                double reach = std::sqrt(R * R + R / (c2 * theta));
                for_each_translate(f.mu, f.lambda, pole - n.plane.center, reach, push);
            }
            if (!discrete || nodes.size() > opts.budget) return;
        }
    };

    auto drain = [&]() -> bool {
        while (!queue.empty()) {
            std::size_t idx = queue.front();
            queue.pop_front();
            if (nodes[idx].expanded) continue;
            nodes[idx].expanded = true;
            expand(idx);
            if (!discrete || nodes.size() > opts.budget) return false;
        }
        return true;
    };
    auto count_big = [&] {
        return std::count_if(nodes.begin(), nodes.end(), [&](const LiftNode& n) {
            return n.plane.is_vertical() || n.plane.radius >= min_radius;
        });
    };

    insert(seed, -1, -1, {0, 0});
    bool ok = drain();
    long before = ok ? count_big() : 0;
    int r = 0, stable = 0;
    while (ok) {
        if (r >= opts.max_refinements) {
            ok = false;
            break;
        }
        ++r;
        theta /= 2.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].plane.is_vertical() || nodes[i].plane.radius >= theta) {
                nodes[i].expanded = false;
                queue.push_back(i);
            }
        }
        ok = drain();
        long after = count_big();
        stable = (ok && after == before) ? stable + 1 : 0;
        if (stable >= 2) break;
        before = after;
    }
    out.verified = ok;
    out.discrete = discrete;
    out.refinements = r;
    out.explored = nodes.size();
    if (accumulation_pair) {
        const NearMiss& a = *accumulation_pair;
        Word wa = a.existing >= 0 ? word_of(static_cast<std::size_t>(a.existing)) : Word{};
        Word wb = a.parent >= 0 ? word_of(static_cast<std::size_t>(a.parent)) : Word{};
        wb = word_concat(translation_word(a.pre), wb);
        if (a.move >= 0) wb = word_concat(moves[static_cast<std::size_t>(a.move)].w, wb);
        out.accumulation = std::make_pair(wa, wb);
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& P = nodes[i].plane;
        if (P.is_vertical() || P.radius >= min_radius) out.planes.push_back({P, word_of(i)});
    }
    auto q = [](double v) { return std::llround(v * 1e7); };
    std::stable_sort(out.planes.begin(), out.planes.end(), [&](const PlaneLift& a, const PlaneLift& b) {
        auto key = [&](const PlaneLift& l) {
            const auto& P = l.plane;
            if (P.is_vertical())
                return std::make_tuple(0, q(std::arg(P.direction)), q(line_offset(P)), 0LL, 0LL);
            return std::make_tuple(1, -q(P.radius), q(P.center.real()), q(P.center.imag()), 0LL);
        };
        return key(a) < key(b);
    });
    return out;
}

GeodesicPlane seed_in_frame(const Manifold& m, const SurfaceCandidate& c, int cusp, const std::vector<double>& scales) {
    const CuspFrame& from = m.frame(c.frame_cusp);
    DisplayFrame to = display_frame(m, cusp, scales);
    return apply_plane(to.from_dev * from.C, c.seed);
}

namespace detail {

std::optional<CrossingWitness> find_crossing(const PlaneLiftSet& s, double tol, double tangency_tol) {
    const auto& P = s.planes;
    for (std::size_t i = 0; i < P.size(); ++i) {
        for (std::size_t j = i; j < P.size(); ++j) {
            const auto& A = P[i].plane;
            const auto& B = P[j].plane;
            if (A.is_vertical() && B.is_vertical()) {
                if (std::abs(std::imag(std::conj(A.direction) * B.direction)) > tol) return CrossingWitness{i, j, 0.0};
                continue;
            }
            if (A.is_vertical() || B.is_vertical()) {
                const auto& V = A.is_vertical() ? A : B;
                const auto& H = A.is_vertical() ? B : A;
                auto d = lattice_direction(V.direction, s.mu, s.lambda, 1e-6, 60);
                if (!d) return CrossingWitness{i, j, 0.0};
                double o = line_offset(V);
                double oh = std::imag(std::conj(V.direction) * H.center);
                double e = std::remainder(oh - o, d->period);
                // translates of the line at distance e + k*period from the center
                for (long k = -2; k <= 2; ++k) {
                    double dist = std::abs(e + static_cast<double>(k) * d->period);
                    if (dist < H.radius - tangency_tol * std::max(1.0, H.radius)) {
                        cplx shift = -std::round((oh - o - e) / d->period + static_cast<double>(k)) * d->step;
                        return CrossingWitness{A.is_vertical() ? i : j, A.is_vertical() ? j : i, -shift};
                    }
                }
                continue;
            }
            std::optional<CrossingWitness> found;
            for_each_translate(s.mu, s.lambda, A.center - B.center, A.radius + B.radius, [&](cplx v) {
                if (found) return;
                if (i == j && std::abs(v) < 1e-12) return;
                GeodesicPlane Bv = GeodesicPlane::hemisphere(B.center + v, B.radius);
                auto rel = plane_pair_relation(A, Bv, tol, tangency_tol);
                if (rel.kind == PlanePairKind::crossing) found = CrossingWitness{i, j, v};
            });
            if (found) return found;
        }
    }
    return std::nullopt;
}

} // namespace detail

InvarianceReport verify_invariant(const Manifold& m, const SurfaceCandidate& c, double min_radius,
                                  const OrbitOptions& opts) {
    InvarianceReport rep;
    std::vector<double> scales(m.cusp_count(), 1.0);
    rep.lifts = orbit_planes(m, c.frame_cusp, scales, c.seed, min_radius, opts);
    if (!rep.lifts.discrete) {
        rep.verdict = Invariance::not_invariant;
        if (rep.lifts.accumulation) {
            const auto& [a, b] = *rep.lifts.accumulation;
            rep.witness = word_concat(b, word_inverse(a));
        }
        rep.reason = rep.lifts.nonlattice_vertical ? "a vertical lift is not parallel to any peripheral translation"
                                                   : "orbit accumulates: two distinct lifts nearly coincide";
        return rep;
    }
    if (!rep.lifts.verified) {
        rep.verdict = Invariance::not_invariant;
        if (!rep.lifts.planes.empty()) rep.witness = rep.lifts.planes.back().word;
        rep.reason = "orbit is not locally finite: lifts above the radius bound kept appearing";
        return rep;
    }
    const Tolerance& t = default_tolerance();
    rep.crossing = detail::find_crossing(rep.lifts, 10.0 * opts.tol, t.tangency);
    rep.verdict = rep.crossing ? Invariance::immersed : Invariance::embedded;
    rep.reason = rep.crossing ? "lifts cross transversally" : "lifts are pairwise disjoint or tangent";
    return rep;
}

std::pair<long, long> boundary_slope(const PlaneLiftSet& lifts, const CuspShape& cusp) {
    auto verts = lifts.verticals();
    if (verts.empty()) throw GeometryError("surface misses this cusp lift");
    // directions are compared in the lattice of the lift set, expressed in the cusp's basis
    cplx dir = verts.front()->plane.direction;
    auto d = lattice_direction(dir, lifts.mu, lifts.lambda, 1e-6, 60);
    if (!d) throw GeometryError("vertical lifts are not parallel to a lattice vector");
    for (const auto* v : verts)
        if (std::abs(std::imag(std::conj(v->plane.direction) * d->v)) > 1e-6 * std::abs(d->v))
            throw GeometryError("vertical lifts point in more than one direction");
    // the lift set's lattice is the cusp lattice drawn at some scale and rotation
    cplx ratio_set = lifts.lambda / lifts.mu;
    cplx ratio_cusp = cusp.t_lambda / cusp.t_mu;
    if (std::abs(ratio_set - ratio_cusp) > 1e-6 * std::abs(ratio_cusp))
        throw GeometryError("lift set and cusp shape describe different lattices");
    long p = d->p, q = d->q;
    if (q < 0 || (q == 0 && p < 0)) {
        p = -p;
        q = -q;
    }
    return {p, q};
}

} // namespace cuspkit
