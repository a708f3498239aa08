#include "cuspkit/horoballs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

#include "frame_moves.hpp"
#include "lattice_util.hpp"

namespace cuspkit {

namespace {

constexpr double kInfiniteDiameter = 1e10;

// Words are kept as parent links and rebuilt only for reported balls:
// word = T(shift) * move * T(pre) * word(parent) * P(post), where P is a
// peripheral translation of the ball's own cusp.
struct Node {
    MoebiusMap E; // ball = E(horoball at infinity of height 1)
    cplx center;
    double diameter;
    int cusp;
    long parent;
    int move;
    std::pair<long, long> pre, shift, post;
    bool expanded = false;
};

} // namespace

cplx DisplayFrame::reduce(cplx z, cplx* shift) const {
    auto [x, y] = coords(z);
    cplx s = -std::floor(x) * mu - std::floor(y) * lambda;
    if (shift) *shift = s;
    return z + s;
}

std::pair<double, double> DisplayFrame::coords(cplx z) const { return lattice_coords(z, mu, lambda); }

DisplayFrame display_frame(const Manifold& m, int cusp, const std::vector<double>& scales) {
    const CuspFrame& cf = m.frame(cusp);
    if (cusp >= static_cast<int>(scales.size()) || !(scales[cusp] > 0))
        throw std::invalid_argument("missing or nonpositive scale for cusp " + std::to_string(cusp));
    double s = scales[cusp];
    DisplayFrame f;
    f.cusp = cusp;
    f.to_dev = cf.C * MoebiusMap::dilation(1.0 / s);
    f.from_dev = f.to_dev.inverse();
    f.mu = s;
    f.lambda = s * cf.tau;
    return f;
}

std::vector<MoebiusMap> frame_generators(const Manifold& m, const DisplayFrame& f) {
    std::vector<MoebiusMap> out;
    for (const auto& g : m.holonomy.generators) out.push_back(f.from_dev * g * f.to_dev);
    return out;
}

std::size_t HoroballDiagram::count_full_sized(double tol) const {
    return static_cast<std::size_t>(
        std::count_if(balls.begin(), balls.end(), [&](const BallEntry& b) { return std::abs(b.diameter - 1.0) < tol; }));
}

HoroballDiagram enumerate(const Manifold& m, int cusp, const std::vector<double>& scales, double cutoff,
                          const EnumerateOptions& opts) {
    return enumerate_with_moves(m, cusp, scales, cutoff, opts, nullptr);
}

HoroballDiagram enumerate_with_moves(const Manifold& m, int cusp, const std::vector<double>& scales, double cutoff,
                                     const EnumerateOptions& opts, std::vector<FrameMove>* moves_out) {
    if (!(cutoff > 0)) throw std::invalid_argument("cutoff must be positive");
    const DisplayFrame f = display_frame(m, cusp, scales);
    const std::vector<MoebiusMap> gens = frame_generators(m, f);
    std::vector<FrameMove> moves;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        moves.push_back({gens[i], Word{static_cast<int>(i) + 1}});
        moves.push_back({gens[i].inverse(), Word{-static_cast<int>(i) - 1}});
    }

    HoroballDiagram d;
    d.manifold = m.name;
    d.cusp = cusp;
    d.scales = scales;
    d.cutoff = cutoff;
    d.mu = f.mu;
    d.lambda = f.lambda;

    std::vector<Node> nodes;
    PeriodicGrid grid(f.mu, f.lambda, 10.0 * opts.tol);
    std::deque<std::size_t> queue;
    double theta = cutoff / 2.0;

    // word for the deck translation x*mu + y*lambda
    const auto& pw = m.holonomy.cusps[cusp];
    auto translation_word = [&](std::pair<long, long> t) {
        return word_concat(word_power(pw->meridian, t.first), word_power(pw->longitude, t.second));
    };
    std::vector<std::pair<cplx, cplx>> own_lattice(m.cusp_count());
    for (int j : m.complete_cusps()) own_lattice[j] = {scales[j], scales[j] * m.frame(j).tau};
    auto peripheral_word = [&](int j, std::pair<long, long> t) {
        const auto& p = m.holonomy.cusps[j];
        return word_concat(word_power(p->meridian, t.first), word_power(p->longitude, t.second));
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
            const Node& n = nodes[*it];
            w = word_concat(translation_word(n.pre), w);
            if (n.move >= 0) w = word_concat(moves[static_cast<std::size_t>(n.move)].w, w);
            w = word_concat(translation_word(n.shift), w);
            w = word_concat(w, peripheral_word(n.cusp, n.post));
        }
        return w;
    };

    auto insert = [&](MoebiusMap E, int j, long parent, int move, std::pair<long, long> pre) {
        if (std::norm(E.c) * kInfiniteDiameter < 1.0) return; // the ball at infinity itself
        cplx center = E.a / E.c;
        double diam = 1.0 / std::norm(E.c);
        cplx shift;
        center = f.reduce(center, &shift);
        if (grid.find(center, j) >= 0) return;
        E = MoebiusMap::translation(shift) * E;
        // right-multiplying by the ball's own peripheral translations keeps the entries small
        auto [lm, ll] = own_lattice[j];
        auto [x, y] = lattice_coords(E.d / E.c, lm, ll);
        std::pair<long, long> post{-std::lround(x), -std::lround(y)};
        E = E * MoebiusMap::translation(static_cast<double>(post.first) * lm + static_cast<double>(post.second) * ll);
        nodes.push_back({E, center, diam, j, parent, move, pre, lattice_index(shift), post});
        grid.insert(center, j, static_cast<long>(nodes.size() - 1));
        if (diam >= theta) queue.push_back(nodes.size() - 1);
    };

    std::vector<MoebiusMap> seeds(m.cusp_count());
    for (int j : m.complete_cusps()) seeds[j] = f.from_dev * display_frame(m, j, scales).to_dev;
    std::vector<char> promoted;
    auto reset = [&] {
        nodes.clear();
        queue.clear();
        promoted.clear();
        grid = PeriodicGrid(f.mu, f.lambda, 10.0 * opts.tol);
        theta = cutoff / 2.0;
        for (int j : m.complete_cusps())
            if (j != cusp) insert(seeds[j], j, -1, -1, {0, 0});
        for (std::size_t i = 0; i < moves.size(); ++i)
            insert(moves[i].M * seeds[cusp], cusp, -1, static_cast<int>(i), {0, 0});
    };

    // Each stored ball stands for its whole lattice orbit, so a move is applied to
    // every translate that it can enlarge past the expansion threshold.
    auto expand = [&](std::size_t idx) {
        const MoebiusMap E = nodes[idx].E;
        const cplx center = nodes[idx].center;
        const double diam = nodes[idx].diameter;
        const int j = nodes[idx].cusp;
        for (std::size_t i = 0; i < moves.size(); ++i) {
            const MoebiusMap M = moves[i].M;
            auto push = [&](cplx v) {
                insert(M * MoebiusMap::translation(v) * E, j, static_cast<long>(idx), static_cast<int>(i), lattice_index(v));
            };
            if (std::abs(M.c) < 1e-9 * M.norm()) {
                push(0.0);
                continue;
            }
            cplx pole = -M.d / M.c;
            double radius = std::sqrt(diam / theta) / std::abs(M.c);
            for_each_translate(f.mu, f.lambda, pole - center, radius, push);
        }
    };

    // Group elements of the largest balls (and their inverses) become extra moves:
    // they contain the face pairings of the Ford domain, which shortcut long words.
    auto promote = [&] {
        double largest = 0.0;
        for (const auto& n : nodes) largest = std::max(largest, n.diameter);
        std::vector<std::size_t> order;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].diameter >= opts.promote_ratio * largest) order.push_back(i);
        std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return nodes[x].diameter > nodes[y].diameter; });
        promoted.resize(nodes.size(), 0);
        std::size_t added = 0, have = 0;
        for (char c : promoted) have += c;
        for (std::size_t i : order) {
            if (have + added >= opts.max_promoted) break;
            if (promoted[i]) continue;
            promoted[i] = 1;
            ++added;
            MoebiusMap G = nodes[i].E * seeds[nodes[i].cusp].inverse();
            Word w = word_of(i);
            moves.push_back({G, w});
            moves.push_back({G.inverse(), word_inverse(w)});
        }
        return added;
    };

    auto drain = [&]() -> bool {
        while (!queue.empty()) {
            std::size_t idx = queue.front();
            queue.pop_front();
            if (nodes[idx].expanded) continue;
            nodes[idx].expanded = true;
            expand(idx);
            if (nodes.size() > opts.budget) return false;
        }
        return true;
    };
    auto count_big = [&] {
        return std::count_if(nodes.begin(), nodes.end(), [&](const Node& n) { return n.diameter >= cutoff; });
    };

    // Threshold halvings until the ball count stops changing twice in a row.
    auto search = [&](bool allow_promote, int& r) {
        reset();
        bool ok = drain();
        long before = ok ? count_big() : 0;
        int stable = 0;
        r = 0;
        while (ok) {
            if (r >= opts.max_refinements) return false;
            ++r;
            std::size_t added = allow_promote ? promote() : 0;
            if (added == 0) theta /= 2.0;
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                if (nodes[i].diameter >= theta) {
                    nodes[i].expanded = false;
                    queue.push_back(i);
                }
            }
            ok = drain();
            long after = count_big();
            stable = (ok && added == 0 && after == before) ? stable + 1 : 0;
            if (stable >= 2) return true;
            before = after;
        }
        return false;
    };
    // The first pass collects shortcut moves; the second restarts with them so every
    // ball is reached by a short product, which keeps rounding error small.
    int r = 0;
    bool ok = search(true, r);
    if (ok) ok = search(false, r);
    if (moves_out) *moves_out = moves;
    d.refinements = r;
    d.explored = nodes.size();
    d.verified = ok;

    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].diameter >= cutoff) d.balls.push_back({nodes[i].center, nodes[i].diameter, word_of(i), nodes[i].cusp});
    auto q = [](double v) { return std::llround(v * 1e7); };
    std::sort(d.balls.begin(), d.balls.end(), [&](const BallEntry& a, const BallEntry& b) {
        auto ka = std::make_tuple(-q(a.diameter), q(a.center.real()), q(a.center.imag()), a.cusp);
        auto kb = std::make_tuple(-q(b.diameter), q(b.center.real()), q(b.center.imag()), b.cusp);
        return ka < kb;
    });
    if (!ok && opts.throw_on_budget)
        throw EnumerationError("horoball enumeration budget exceeded before the diagram stabilized; increase depth", d);
    return d;
}

Embeddedness embeddedness(const HoroballDiagram& d, double tangency_tol) {
    if (!d.verified) throw EnumerationError("diagram is unverified", d);
    Embeddedness e;
    auto note = [&](int a, int b, cplx shift, double dist) {
        if (dist < e.min_distance) {
            e.min_distance = dist;
            if (dist < -tangency_tol) {
                e.embedded = false;
                e.overlap = OverlapWitness{a, b, shift, dist};
            }
        }
    };
    for (std::size_t i = 0; i < d.balls.size(); ++i) note(-1, static_cast<int>(i), 0.0, std::log(1.0 / d.balls[i].diameter));
    for (std::size_t i = 0; i < d.balls.size(); ++i) {
        for (std::size_t j = i; j < d.balls.size(); ++j) {
            const auto& A = d.balls[i];
            const auto& B = d.balls[j];
            double reach = std::sqrt(A.diameter * B.diameter) * 1.01;
            for_each_translate(d.mu, d.lambda, A.center - B.center, reach, [&](cplx v) {
                if (i == j && std::abs(v) < 1e-12) return;
                double sep = std::abs(A.center - B.center - v);
                note(static_cast<int>(i), static_cast<int>(j), v, 2.0 * std::log(sep / std::sqrt(A.diameter * B.diameter)));
            });
        }
    }
    return e;
}

TangencyGraph tangencies(const HoroballDiagram& d, double tangency_tol) {
    TangencyGraph g;
    g.node_count = d.balls.size();
    for (std::size_t i = 0; i < d.balls.size(); ++i) {
        const auto& b = d.balls[i];
        double dist = std::log(1.0 / b.diameter);
        if (std::abs(dist) < tangency_tol) g.edges.push_back({-1, static_cast<int>(i), 0.0, {b.center, b.diameter}, dist});
    }
    for (std::size_t i = 0; i < d.balls.size(); ++i) {
        for (std::size_t j = i; j < d.balls.size(); ++j) {
            const auto& A = d.balls[i];
            const auto& B = d.balls[j];
            double reach = std::sqrt(A.diameter * B.diameter) * (1.0 + 2.0 * tangency_tol);
            for_each_translate(d.mu, d.lambda, A.center - B.center, reach, [&](cplx v) {
                if (i == j && std::abs(v) < 1e-12) return;
                cplx cb = B.center + v;
                double dist = 2.0 * std::log(std::abs(A.center - cb) / std::sqrt(A.diameter * B.diameter));
                if (std::abs(dist) >= tangency_tol) return;
                // keep one copy of each self-tangency orbit pair
                if (i == j && (v.real() < 0 || (v.real() == 0 && v.imag() < 0))) return;
                double s = A.diameter / (A.diameter + B.diameter);
                Point3 p{A.center + (cb - A.center) * s, A.diameter / 2.0 + (B.diameter - A.diameter) / 2.0 * s};
                g.edges.push_back({static_cast<int>(i), static_cast<int>(j), v, p, dist});
            });
        }
    }
    return g;
}

SymmetryReport detect_symmetry(const HoroballDiagram& d, long p, long q, int order, double tol) {
    if (order < 1) throw std::invalid_argument("symmetry order must be positive");
    if (p == 0 && q == 0) throw std::invalid_argument("zero direction");
    SymmetryReport r;
    r.p = p;
    r.q = q;
    r.order = order;
    r.translation = (static_cast<double>(p) * d.mu + static_cast<double>(q) * d.lambda) / static_cast<double>(order);
    PeriodicGrid grid(d.mu, d.lambda, tol);
    for (std::size_t i = 0; i < d.balls.size(); ++i) grid.insert(d.balls[i].center, 0, static_cast<long>(i));
    r.verified = true;
    for (const auto& b : d.balls) {
        cplx img = b.center + r.translation;
        long j = grid.find(reduce_point(img, d.mu, d.lambda), 0);
        if (j < 0) {
            // balls at the cutoff may have images just below it
            if (b.diameter < d.cutoff * (1.0 + 10.0 * tol)) continue;
            r.verified = false;
            break;
        }
        if (std::abs(d.balls[static_cast<std::size_t>(j)].diameter - b.diameter) > tol * std::max(1.0, b.diameter)) {
            r.verified = false;
            break;
        }
    }
    return r;
}

std::vector<double> largest_diameters(const Manifold& m, int cusp, const EnumerateOptions& opts) {
    std::vector<double> scales(m.cusp_count(), 1.0);
    std::vector<double> best(m.cusp_count(), 0.0);
    for (double cutoff = 0.5; cutoff > 1e-4; cutoff /= 2.0) {
        HoroballDiagram d = enumerate(m, cusp, scales, cutoff, opts);
        std::fill(best.begin(), best.end(), 0.0);
        for (const auto& b : d.balls) best[b.cusp] = std::max(best[b.cusp], b.diameter);
        bool all = true;
        for (int j : m.complete_cusps()) all = all && best[j] > 0;
        if (all) return best;
    }
    throw EnumerationError("no horoballs found above the smallest cutoff; increase depth", HoroballDiagram{});
}

} // namespace cuspkit

namespace cuspkit {

std::vector<FrameMove> frame_moves(const Manifold& m, int cusp, const std::vector<double>& scales) {
    EnumerateOptions opts;
    opts.throw_on_budget = false;
    std::vector<FrameMove> moves;
    for (double cutoff = 0.5; cutoff > 1e-3; cutoff /= 2.0) {
        HoroballDiagram d = enumerate_with_moves(m, cusp, scales, cutoff, opts, &moves);
        if (!d.balls.empty()) break;
    }
    return moves;
}

} // namespace cuspkit
