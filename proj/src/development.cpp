#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>

#include "cuspkit/holonomy.hpp"

namespace cuspkit {

namespace {

using Corners = std::array<BoundaryPoint, 4>;

// Vertices at infinity, 0, 1 and conj(z): the orientation in which cusp shapes have Im > 0.
Corners standard_corners(cplx z) {
    return {BoundaryPoint::infinity(), BoundaryPoint(cplx(0.0)), BoundaryPoint(cplx(1.0)), BoundaryPoint(std::conj(z))};
}

struct FaceLetter {
    int letter = 0; // 0 for spanning-tree faces
};

struct Development {
    std::vector<MoebiusMap> place;               // tree placement of each tet
    std::vector<Corners> corners;                // tree corner positions
    std::vector<std::array<int, 4>> face_letter; // letter of g_{t,f}
    std::vector<MoebiusMap> gens;
};

// Placement of tet t2 adjacent to the placed copy of t across face f.
MoebiusMap adjacent_placement(const IdealTriangulation& tri, const ShapeVector& s, const Corners& pos, int t, int f) {
    const auto& g = tri.gluing[t];
    int t2 = g.neighbor[f];
    const auto& sigma = g.perm[f];
    Corners std2 = standard_corners(s.z[t2]);
    std::array<int, 3> vs{};
    int k = 0;
    for (int v = 0; v < 4; ++v)
        if (v != f) vs[k++] = v;
    return map_triple(std2[sigma[vs[0]]], std2[sigma[vs[1]]], std2[sigma[vs[2]]], pos[vs[0]], pos[vs[1]], pos[vs[2]]);
}

Corners place_corners(const MoebiusMap& m, cplx z) {
    Corners c = standard_corners(z);
    for (auto& p : c) p = apply_boundary(m, p);
    return c;
}

Development develop(const IdealTriangulation& tri, const ShapeVector& s) {
    const int n = tri.n;
    Development d;
    d.place.assign(n, MoebiusMap::identity());
    d.corners.resize(n);
    d.face_letter.assign(n, {0, 0, 0, 0});
    std::vector<bool> placed(n, false);
    std::vector<std::array<bool, 4>> tree(n, {false, false, false, false});

    placed[0] = true;
    d.corners[0] = standard_corners(s.z[0]);
    std::deque<int> queue{0};
    while (!queue.empty()) {
        int t = queue.front();
        queue.pop_front();
        for (int f = 0; f < 4; ++f) {
            int t2 = tri.gluing[t].neighbor[f];
            if (placed[t2]) continue;
            d.place[t2] = adjacent_placement(tri, s, d.corners[t], t, f);
            d.corners[t2] = place_corners(d.place[t2], s.z[t2]);
            placed[t2] = true;
            tree[t][f] = true;
            tree[t2][tri.gluing[t].perm[f][f]] = true;
            queue.push_back(t2);
        }
    }
    if (!std::all_of(placed.begin(), placed.end(), [](bool b) { return b; }))
        throw DevelopmentError("triangulation is not connected");

    for (int t = 0; t < n; ++t) {
        for (int f = 0; f < 4; ++f) {
            if (tree[t][f] || d.face_letter[t][f] != 0) continue;
            int t2 = tri.gluing[t].neighbor[f];
            int f2 = tri.gluing[t].perm[f][f];
            MoebiusMap N = adjacent_placement(tri, s, d.corners[t], t, f);
            d.gens.push_back(N * d.place[t2].inverse());
            int letter = static_cast<int>(d.gens.size());
            d.face_letter[t][f] = letter;
            if (t2 == t && f2 == f) throw DevelopmentError("face glued to itself");
            d.face_letter[t2][f2] = -letter;
        }
    }
    return d;
}

std::vector<Word> edge_relators(const IdealTriangulation& tri, const Development& d) {
    std::vector<Word> rels;
    std::vector<std::array<bool, 16>> seen(tri.n);
    for (auto& a : seen) a.fill(false);
    for (int t0 = 0; t0 < tri.n; ++t0) {
        for (int a0 = 0; a0 < 4; ++a0) {
            for (int b0 = a0 + 1; b0 < 4; ++b0) {
                if (seen[t0][a0 * 4 + b0]) continue;
                int c0 = -1, d0 = -1;
                for (int v = 0; v < 4; ++v) {
                    if (v == a0 || v == b0) continue;
                    (c0 < 0 ? c0 : d0) = v;
                }
                int t = t0, a = a0, b = b0, c = c0, dd = d0;
                Word w;
                for (int guard = 0; guard < 12 * tri.n + 12; ++guard) {
                    seen[t][std::min(a, b) * 4 + std::max(a, b)] = true;
                    const auto& sigma = tri.gluing[t].perm[dd];
                    if (int l = d.face_letter[t][dd]; l != 0) w.push_back(l);
                    int t2 = tri.gluing[t].neighbor[dd];
                    int a2 = sigma[a], b2 = sigma[b], c2 = sigma[dd], d2 = sigma[c];
                    t = t2;
                    a = a2;
                    b = b2;
                    c = c2;
                    dd = d2;
                    if (t == t0 && a == a0 && b == b0 && c == c0 && dd == d0) break;
                }
                free_reduce(w);
                rels.push_back(w);
            }
        }
    }
    return rels;
}

// Translation part of a parabolic in the frame where its fixed point is infinity.
cplx frame_translation(const MoebiusMap& frame_inv_times, const MoebiusMap& frame) {
    MoebiusMap m = frame_inv_times * frame;
    return m.b / m.d;
}

MoebiusMap frame_at(const BoundaryPoint& q) {
    if (q.is_infinite()) return MoebiusMap::identity();
    // w -> q - 1/w
    return MoebiusMap(q.value(), -1.0, 1.0, 0.0);
}

struct LatticeVector {
    cplx v;
    Word w;
};

LatticeVector combine_lv(const LatticeVector& x, long k, const LatticeVector& y) {
    return {x.v + static_cast<double>(k) * y.v, word_concat(x.w, word_power(y.w, k))};
}

// Integer coordinates of v in the basis (b1, b2).
std::pair<double, double> coords(cplx v, cplx b1, cplx b2) {
    double det = b1.real() * b2.imag() - b1.imag() * b2.real();
    double x = (v.real() * b2.imag() - v.imag() * b2.real()) / det;
    double y = (b1.real() * v.imag() - b1.imag() * v.real()) / det;
    return {x, y};
}

// Lagrange-Gauss reduction, tracking words.
void gauss_reduce(LatticeVector& b1, LatticeVector& b2) {
    for (int it = 0; it < 200; ++it) {
        if (std::abs(b2.v) < std::abs(b1.v)) std::swap(b1, b2);
        double mu = std::real(std::conj(b1.v) * b2.v) / std::norm(b1.v);
        long k = std::lround(mu);
        if (k == 0) break;
        b2 = combine_lv(b2, -k, b1);
    }
    if (std::abs(b2.v) < std::abs(b1.v)) std::swap(b1, b2);
}

// Basis of the lattice generated by the given vectors.
std::pair<LatticeVector, LatticeVector> lattice_basis(std::vector<LatticeVector> vs, double tol) {
    std::erase_if(vs, [&](const LatticeVector& x) { return std::abs(x.v) < tol; });
    std::sort(vs.begin(), vs.end(), [](const auto& x, const auto& y) { return std::abs(x.v) < std::abs(y.v); });
    if (vs.empty()) throw DevelopmentError("cusp has no peripheral translations");
    LatticeVector b1 = vs[0];
    std::optional<LatticeVector> b2;
    for (const auto& x : vs) {
        double cross = std::imag(std::conj(b1.v) * x.v);
        if (std::abs(cross) > tol * std::abs(b1.v) * std::abs(x.v) * 1e3) {
            b2 = x;
            break;
        }
    }
    if (!b2) throw DevelopmentError("peripheral translations are degenerate");
    gauss_reduce(b1, *b2);
    for (const auto& x : vs) {
        auto [cx, cy] = coords(x.v, b1.v, b2->v);
        if (std::abs(cx - std::round(cx)) < 1e-6 && std::abs(cy - std::round(cy)) < 1e-6) continue;
        long D = 0;
        for (long den = 2; den <= 1000; ++den) {
            if (std::abs(cx * den - std::round(cx * den)) < 1e-6 && std::abs(cy * den - std::round(cy * den)) < 1e-6) {
                D = den;
                break;
            }
        }
        if (D == 0) throw DevelopmentError("peripheral translations are not a lattice");
        // columns of [[D,0,X],[0,D,Y]] in units of (b1/D, b2/D); reduce by integer column ops
        std::array<LatticeVector, 3> col{b1, *b2, x};
        std::array<std::array<long, 3>, 2> M{{{D, 0, std::lround(cx * D)}, {0, D, std::lround(cy * D)}}};
        auto colop = [&](int i, long k, int j) { // col_i += k col_j
            for (auto& row : M) row[i] += k * row[j];
            col[i] = combine_lv(col[i], k, col[j]);
        };
        auto colswap = [&](int i, int j) {
            for (auto& row : M) std::swap(row[i], row[j]);
            std::swap(col[i], col[j]);
        };
        auto euclid_row = [&](int r, int first) {
            // leave a single nonzero entry of row r among columns first..2, in column first
            for (;;) {
                int piv = -1;
                for (int j = first; j < 3; ++j)
                    if (M[r][j] != 0 && (piv < 0 || std::labs(M[r][j]) < std::labs(M[r][piv]))) piv = j;
                if (piv < 0) return;
                bool done = true;
                for (int j = first; j < 3; ++j) {
                    if (j == piv || M[r][j] == 0) continue;
                    colop(j, -(M[r][j] / M[r][piv]), piv);
                    if (M[r][j] != 0) done = false;
                }
                if (done) {
                    if (piv != first) colswap(piv, first);
                    return;
                }
            }
        };
        euclid_row(0, 0);
        euclid_row(1, 1);
        b1 = col[0];
        b2 = col[1];
        gauss_reduce(b1, *b2);
    }
    return {b1, *b2};
}

PeripheralWords peripheral_words(const IdealTriangulation& tri, const ShapeVector& s, const Development& d,
                                 int cusp, double tol) {
    int t0 = -1, v0 = -1;
    for (int t = 0; t < tri.n && t0 < 0; ++t)
        for (int v = 0; v < 4; ++v)
            if (tri.gluing[t].cusp[v] == cusp) {
                t0 = t;
                v0 = v;
                break;
            }
    if (t0 < 0) throw DevelopmentError("cusp " + std::to_string(cusp) + " has no vertex");
    BoundaryPoint q = d.corners[t0][v0];
    MoebiusMap A = frame_at(q);
    MoebiusMap Ainv = A.inverse();

    struct State {
        Word w;
        MoebiusMap m;
    };
    std::map<std::pair<int, int>, State> visited;
    std::deque<std::pair<int, int>> queue;
    visited[{t0, v0}] = {Word{}, MoebiusMap::identity()};
    queue.push_back({t0, v0});
    std::vector<LatticeVector> trans;
    while (!queue.empty()) {
        auto [t, v] = queue.front();
        queue.pop_front();
        const State st = visited[{t, v}];
        for (int f = 0; f < 4; ++f) {
            if (f == v) continue;
            int t2 = tri.gluing[t].neighbor[f];
            int v2 = tri.gluing[t].perm[f][v];
            int l = d.face_letter[t][f];
            State nx = st;
            if (l != 0) {
                nx.w = word_concat(st.w, Word{l});
                nx.m = st.m * (l > 0 ? d.gens[l - 1] : d.gens[-l - 1].inverse());
            }
            auto it = visited.find({t2, v2});
            if (it == visited.end()) {
                visited[{t2, v2}] = nx;
                queue.push_back({t2, v2});
                continue;
            }
            Word pw = word_concat(nx.w, word_inverse(it->second.w));
            if (pw.empty()) continue;
            MoebiusMap p = nx.m * it->second.m.inverse();
            MoebiusMap conj = Ainv * p * A;
            if (std::abs(conj.c) > 1e-6 * conj.norm())
                throw DevelopmentError("development inconsistent: peripheral element does not fix the cusp");
            trans.push_back({conj.b / conj.d, pw});
        }
    }
    auto [b1, b2] = lattice_basis(trans, tol);

    // meridian: shortest lattice vector x with tau * x also in the lattice
    cplx tau = cusp_shape(tri, s, cusp);
    struct Cand {
        double len;
        long a, b;
    };
    std::vector<Cand> cands;
    for (long a = -12; a <= 12; ++a)
        for (long b = -12; b <= 12; ++b)
            if ((a || b) && std::gcd(a, b) == 1)
                cands.push_back({std::abs(static_cast<double>(a) * b1.v + static_cast<double>(b) * b2.v), a, b});
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
        if (std::abs(x.len - y.len) > 1e-9 * std::max(1.0, x.len)) return x.len < y.len;
        return std::tie(x.a, x.b) > std::tie(y.a, y.b);
    });
    for (const auto& c : cands) {
        cplx mu = static_cast<double>(c.a) * b1.v + static_cast<double>(c.b) * b2.v;
        auto [x, y] = coords(tau * mu, b1.v, b2.v);
        long lx = std::lround(x), ly = std::lround(y);
        if (std::abs(x - lx) > 1e-5 || std::abs(y - ly) > 1e-5) continue;
        if (std::labs(c.a * ly - c.b * lx) != 1) continue;
        PeripheralWords pw;
        pw.meridian = word_concat(word_power(b1.w, c.a), word_power(b2.w, c.b));
        pw.longitude = word_concat(word_power(b1.w, lx), word_power(b2.w, ly));
        return pw;
    }
    throw DevelopmentError("could not identify the meridian in the cusp lattice");
}

void cyclic_reduce(Word& w) {
    free_reduce(w);
    while (w.size() >= 2 && w.front() == -w.back()) {
        w.erase(w.begin());
        w.pop_back();
    }
}

Word substitute(const Word& w, int gen, const Word& image) {
    Word out;
    for (int x : w) {
        if (std::abs(x) == gen + 1) {
            const Word piece = x > 0 ? image : word_inverse(image);
            out.insert(out.end(), piece.begin(), piece.end());
        } else {
            out.push_back(x);
        }
    }
    free_reduce(out);
    return out;
}

Word drop_index(const Word& w, int gen) {
    Word out = w;
    for (int& x : out) {
        int g = std::abs(x) - 1;
        if (g > gen) x += x > 0 ? -1 : 1;
    }
    return out;
}

// Eliminate generators that occur exactly once in some relator.
void simplify_presentation(HolonomyRep& h, std::size_t max_len) {
    for (;;) {
        for (auto& r : h.relators) cyclic_reduce(r);
        std::erase_if(h.relators, [](const Word& r) { return r.empty(); });
        std::sort(h.relators.begin(), h.relators.end(),
                  [](const Word& a, const Word& b) { return a.size() < b.size(); });
        bool changed = false;
        for (std::size_t ri = 0; ri < h.relators.size() && !changed; ++ri) {
            const Word r = h.relators[ri];
            std::map<int, int> count;
            for (int x : r) ++count[std::abs(x) - 1];
            for (std::size_t pos = 0; pos < r.size(); ++pos) {
                int g = std::abs(r[pos]) - 1;
                if (count[g] != 1) continue;
                // rotate so the generator comes first: x^e C = 1
                Word C(r.begin() + static_cast<long>(pos) + 1, r.end());
                C.insert(C.end(), r.begin(), r.begin() + static_cast<long>(pos));
                Word image = r[pos] > 0 ? word_inverse(C) : C;
                std::vector<Word> rels;
                bool too_long = false;
                for (std::size_t j = 0; j < h.relators.size(); ++j) {
                    if (j == ri) continue;
                    rels.push_back(drop_index(substitute(h.relators[j], g, image), g));
                    too_long = too_long || rels.back().size() > max_len;
                }
                auto cusps = h.cusps;
                for (auto& c : cusps) {
                    if (!c) continue;
                    c->meridian = drop_index(substitute(c->meridian, g, image), g);
                    c->longitude = drop_index(substitute(c->longitude, g, image), g);
                    too_long = too_long || c->meridian.size() > max_len || c->longitude.size() > max_len;
                }
                if (too_long) continue;
                h.relators = std::move(rels);
                h.cusps = std::move(cusps);
                h.generators.erase(h.generators.begin() + g);
                changed = true;
                break;
            }
        }
        if (!changed) return;
    }
}

} // namespace

std::vector<int> HolonomyRep::complete_cusps() const {
    std::vector<int> out;
    for (int k = 0; k < cusp_count(); ++k)
        if (cusps[k]) out.push_back(k);
    return out;
}

double HolonomyRep::relator_residual() const {
    double worst = 0.0;
    for (const auto& r : relators) worst = std::max(worst, eval(r).distance_to_identity());
    return worst;
}

void check_holonomy(const HolonomyRep& h, double tol) {
    for (const auto& r : h.relators) {
        MoebiusMap m = h.eval(r);
        if (m.distance_to_identity() > tol * std::max(1.0, m.norm()))
            throw DevelopmentError("development inconsistent: relator " + format_word(r) + " is not the identity");
    }
    for (int k : h.complete_cusps()) {
        MoebiusMap mu = h.eval(h.cusps[k]->meridian);
        MoebiusMap la = h.eval(h.cusps[k]->longitude);
        for (const MoebiusMap* m : {&mu, &la}) {
            cplx tr = m->trace();
            if (std::abs(tr * tr - 4.0) > tol * std::max(1.0, m->norm() * m->norm()))
                throw DevelopmentError("peripheral element of cusp " + std::to_string(k) + " is not parabolic");
        }
        MoebiusMap comm = mu * la * mu.inverse() * la.inverse();
        if (comm.distance_to_identity() > tol * std::max(1.0, comm.norm()))
            throw DevelopmentError("peripheral elements of cusp " + std::to_string(k) + " do not commute");
    }
}

HolonomyRep build_holonomy(const IdealTriangulation& tri, const ShapeVector& s, const HolonomyOptions& opts) {
    if (!tri.has_gluing()) throw DevelopmentError("triangulation file has no tet gluing lines");
    if (static_cast<int>(s.z.size()) != tri.n) throw std::invalid_argument("shape vector has the wrong length");
    Development d = develop(tri, s);
    HolonomyRep h;
    h.name = tri.name;
    h.generators = d.gens;
    h.relators = edge_relators(tri, d);
    h.cusps.resize(tri.cusp_count());
    for (int k = 0; k < tri.cusp_count(); ++k)
        if (!tri.is_filled(k)) h.cusps[k] = peripheral_words(tri, s, d, k, opts.tol);
    check_holonomy(h, opts.tol);
    if (opts.simplify) {
        simplify_presentation(h, 400);
        check_holonomy(h, opts.tol);
    }
    return h;
}

CuspFrame cusp_frame(const HolonomyRep& h, int cusp) {
    if (cusp < 0 || cusp >= h.cusp_count()) throw std::out_of_range("unknown cusp");
    if (!h.cusps[cusp]) throw GeometryError("no cusp cross-section: cusp " + std::to_string(cusp) + " is filled");
    MoebiusMap mu = h.eval(h.cusps[cusp]->meridian);
    MoebiusMap la = h.eval(h.cusps[cusp]->longitude);
    BoundaryPoint q = BoundaryPoint::infinity();
    if (std::abs(mu.c) > 1e-9 * mu.norm()) q = BoundaryPoint((mu.a - mu.d) / (2.0 * mu.c));
    MoebiusMap A = frame_at(q);
    MoebiusMap Ainv = A.inverse();
    cplx tm = frame_translation(Ainv * mu, A);
    cplx tl = frame_translation(Ainv * la, A);
    CuspFrame f;
    f.C = A * MoebiusMap::dilation(tm);
    f.tau = tl / tm;
    f.fixed_point = q;
    if (f.tau.imag() <= 0) throw GeometryError("cusp " + std::to_string(cusp) + " has a degenerate or misoriented lattice");
    return f;
}

Translations cusp_translations(const HolonomyRep& h, int cusp) {
    CuspFrame f = cusp_frame(h, cusp);
    MoebiusMap A = frame_at(f.fixed_point);
    MoebiusMap Ainv = A.inverse();
    cplx tm = frame_translation(Ainv * h.eval(h.cusps[cusp]->meridian), A);
    cplx tl = frame_translation(Ainv * h.eval(h.cusps[cusp]->longitude), A);
    cplx rot = std::abs(tm) / tm;
    return {tm * rot, tl * rot};
}

Translations cusp_translations(const IdealTriangulation& tri, const ShapeVector& s, int cusp) {
    if (cusp < 0 || cusp >= tri.cusp_count()) throw std::out_of_range("unknown cusp");
    if (tri.is_filled(cusp)) throw GeometryError("no cusp cross-section");
    return cusp_translations(build_holonomy(tri, s), cusp);
}

} // namespace cuspkit
