#include "cuspkit/triangulation.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace cuspkit {

ParseError::ParseError(int line, int field, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) +
                                        (field > 0 ? ", field " + std::to_string(field) : std::string()) + ": " + what
                                  : what),
      line_(line), field_(field) {}

std::vector<int> IdealTriangulation::complete_cusps() const {
    std::vector<int> out;
    for (int k = 0; k < cusp_count(); ++k)
        if (!is_filled(k)) out.push_back(k);
    return out;
}

namespace {

struct Cursor {
    int line;
    const std::vector<std::string>& tok;

    int integer(std::size_t i) const {
        if (i >= tok.size()) throw ParseError(line, static_cast<int>(i) + 1, "missing field");
        const std::string& s = tok[i];
        int v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size())
            throw ParseError(line, static_cast<int>(i) + 1, "expected an integer, got '" + s + "'");
        return v;
    }
    const std::string& word(std::size_t i) const {
        if (i >= tok.size()) throw ParseError(line, static_cast<int>(i) + 1, "missing field");
        return tok[i];
    }
};

EquationRow parse_row(const Cursor& c, std::size_t start, int n) {
    std::size_t expected = start + 2 * static_cast<std::size_t>(n) + 1;
    if (c.tok.size() != expected)
        throw ParseError(c.line, 0,
                         "expected " + std::to_string(2 * n + 1) + " coefficients, got " +
                             std::to_string(c.tok.size() - start));
    EquationRow r;
    for (int i = 0; i < n; ++i) {
        r.a.push_back(c.integer(start + 2 * i));
        r.b.push_back(c.integer(start + 2 * i + 1));
    }
    r.m = c.integer(expected - 1);
    return r;
}

std::array<int, 4> parse_perm(const Cursor& c, std::size_t i) {
    const std::string& s = c.word(i);
    std::array<int, 4> p{};
    std::array<bool, 4> seen{};
    if (s.size() != 4) throw ParseError(c.line, static_cast<int>(i) + 1, "permutation must have 4 digits");
    for (int k = 0; k < 4; ++k) {
        int v = s[k] - '0';
        if (v < 0 || v > 3 || seen[v])
            throw ParseError(c.line, static_cast<int>(i) + 1, "invalid permutation '" + s + "'");
        seen[v] = true;
        p[k] = v;
    }
    return p;
}

} // namespace

IdealTriangulation parse_triangulation(std::string_view text) {
    IdealTriangulation tri;
    bool have_n = false;
    std::map<int, CuspData> cusps;
    std::map<int, std::pair<bool, bool>> cusp_rows;
    std::map<int, TetGluing> tets;
    std::vector<std::pair<int, std::pair<int, int>>> framings;
    std::vector<std::pair<int, std::pair<int, Filling>>> fillings;
    int lineno = 0;
    int last_line = 0;

    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
        std::istringstream ls(raw);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        last_line = lineno;
        Cursor c{lineno, tok};
        const std::string& key = tok[0];
        auto need_n = [&] {
            if (!have_n) throw ParseError(lineno, 1, "'" + key + "' before 'tetrahedra'");
        };
        if (key == "manifold") {
            if (tok.size() < 2) throw ParseError(lineno, 2, "missing manifold name");
            tri.name = tok[1];
        } else if (key == "tetrahedra") {
            if (tok.size() != 2) throw ParseError(lineno, 0, "expected 'tetrahedra <n>'");
            tri.n = c.integer(1);
            if (tri.n <= 0) throw ParseError(lineno, 2, "tetrahedron count must be positive");
            have_n = true;
        } else if (key == "edge") {
            need_n();
            tri.edges.push_back(parse_row(c, 1, tri.n));
        } else if (key == "cusp") {
            need_n();
            int k = c.integer(1);
            if (k < 0) throw ParseError(lineno, 2, "cusp index must be nonnegative");
            const std::string& kind = c.word(2);
            EquationRow r = parse_row(c, 3, tri.n);
            auto& flags = cusp_rows[k];
            if (kind == "meridian") {
                if (flags.first) throw ParseError(lineno, 3, "duplicate meridian row");
                flags.first = true;
                cusps[k].meridian = r;
            } else if (kind == "longitude") {
                if (flags.second) throw ParseError(lineno, 3, "duplicate longitude row");
                flags.second = true;
                cusps[k].longitude = r;
            } else {
                throw ParseError(lineno, 3, "expected 'meridian' or 'longitude'");
            }
        } else if (key == "framing_shift") {
            if (tok.size() != 3) throw ParseError(lineno, 0, "expected 'framing_shift <k> <s>'");
            framings.push_back({lineno, {c.integer(1), c.integer(2)}});
        } else if (key == "filling") {
            if (tok.size() != 4) throw ParseError(lineno, 0, "expected 'filling <k> <p> <q>'");
            Filling f{c.integer(2), c.integer(3)};
            if (f.p == 0 && f.q == 0) throw ParseError(lineno, 3, "filling slope (0,0)");
            fillings.push_back({lineno, {c.integer(1), f}});
        } else if (key == "tet") {
            need_n();
            if (tok.size() != 17 || tok[2] != "neighbors" || tok[7] != "perms" || tok[12] != "cusps")
                throw ParseError(lineno, 0, "expected 'tet <i> neighbors 4x perms 4x cusps 4x'");
            int i = c.integer(1);
            if (i < 0 || i >= tri.n) throw ParseError(lineno, 2, "tet index out of range");
            TetGluing g;
            for (int f = 0; f < 4; ++f) {
                g.neighbor[f] = c.integer(3 + f);
                if (g.neighbor[f] < 0 || g.neighbor[f] >= tri.n)
                    throw ParseError(lineno, 4 + f, "neighbor out of range");
                g.perm[f] = parse_perm(c, 8 + f);
                g.cusp[f] = c.integer(13 + f);
            }
            if (tets.count(i)) throw ParseError(lineno, 2, "duplicate tet line");
            tets[i] = g;
        } else {
            throw ParseError(lineno, 1, "unknown keyword '" + key + "'");
        }
    }

    int end_line = last_line + 1;
    if (!have_n) throw ParseError(end_line, 0, "missing 'tetrahedra' line");
    if (static_cast<int>(tri.edges.size()) != tri.n)
        throw ParseError(end_line, 0,
                         "expected " + std::to_string(tri.n) + " edge rows, found " +
                             std::to_string(tri.edges.size()));
    if (cusps.empty()) throw ParseError(end_line, 0, "no cusp rows");
    int k_expect = 0;
    for (auto& [k, data] : cusps) {
        if (k != k_expect) throw ParseError(end_line, 0, "cusp indices must be 0.." + std::to_string(cusps.size() - 1));
        if (!cusp_rows[k].first || !cusp_rows[k].second)
            throw ParseError(end_line, 0, "cusp " + std::to_string(k) + " needs both meridian and longitude rows");
        tri.cusps.push_back(data);
        ++k_expect;
    }
    for (auto& [ln, kv] : framings) {
        if (kv.first < 0 || kv.first >= tri.cusp_count()) throw ParseError(ln, 2, "unknown cusp");
        tri.cusps[kv.first].framing_shift = kv.second;
    }
    for (auto& [ln, kv] : fillings) {
        if (kv.first < 0 || kv.first >= tri.cusp_count()) throw ParseError(ln, 2, "unknown cusp");
        tri.cusps[kv.first].filling = kv.second;
    }
    if (!tets.empty()) {
        if (static_cast<int>(tets.size()) != tri.n) throw ParseError(end_line, 0, "incomplete tet gluing data");
        for (auto& [i, g] : tets) {
            for (int f = 0; f < 4; ++f) {
                if (g.cusp[f] < 0 || g.cusp[f] >= tri.cusp_count())
                    throw ParseError(end_line, 0, "tet " + std::to_string(i) + " references an unknown cusp");
                const TetGluing& other = tets[g.neighbor[f]];
                int f2 = g.perm[f][f];
                if (other.neighbor[f2] != i) throw ParseError(end_line, 0, "gluing of tet " + std::to_string(i) + " is not symmetric");
            }
            tri.gluing.push_back(g);
        }
    }
    if (tri.name.empty()) tri.name = "unnamed";
    return tri;
}

IdealTriangulation load_triangulation(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ParseError(0, 0, "cannot open " + path.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_triangulation(ss.str());
}

IdealTriangulation with_filling(IdealTriangulation tri, int cusp, int p, int q) {
    if (cusp < 0 || cusp >= tri.cusp_count()) throw std::out_of_range("unknown cusp");
    if (p == 0 && q == 0) throw std::invalid_argument("filling slope (0,0)");
    tri.cusps[cusp].filling = Filling{p, q};
    return tri;
}

IdealTriangulation without_fillings(IdealTriangulation tri) {
    for (auto& c : tri.cusps) c.filling.reset();
    return tri;
}

EquationRow combine(const EquationRow& r1, int c1, const EquationRow& r2, int c2) {
    EquationRow r;
    r.a.resize(r1.a.size());
    r.b.resize(r1.b.size());
    for (std::size_t i = 0; i < r1.a.size(); ++i) {
        r.a[i] = c1 * r1.a[i] + c2 * r2.a[i];
        r.b[i] = c1 * r1.b[i] + c2 * r2.b[i];
    }
    r.m = c1 * r1.m + c2 * r2.m;
    return r;
}

std::vector<ActiveRow> active_rows(const IdealTriangulation& tri) {
    std::vector<ActiveRow> rows;
    for (const auto& e : tri.edges) rows.push_back({e, RowTarget::edge});
    for (const auto& c : tri.cusps) {
        if (c.filling) {
            rows.push_back({combine(c.meridian, c.filling->p, c.longitude, c.filling->q), RowTarget::filling});
        } else {
            rows.push_back({c.meridian, RowTarget::completeness});
            rows.push_back({c.longitude, RowTarget::completeness});
        }
    }
    return rows;
}

} // namespace cuspkit
