#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "cuspkit/holonomy.hpp"

namespace cuspkit {

namespace {

double parse_real(const std::string& s, int line) {
    if (s.empty()) throw ParseError(line, 0, "empty number");
    if (s == "+" || s == "-") return s == "-" ? -1.0 : 1.0;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) throw ParseError(line, 0, "malformed complex literal near '" + s + "'");
    return v;
}

cplx parse_complex(const std::string& s, int line) {
    if (s.empty()) throw ParseError(line, 0, "empty complex literal");
    if (s.back() != 'i') return {parse_real(s, line), 0.0};
    std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        char ch = body[k];
        if ((ch == '+' || ch == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos) return {0.0, body.empty() ? 1.0 : parse_real(body, line)};
    std::string re = body.substr(0, split), im = body.substr(split);
    return {parse_real(re, line), parse_real(im, line)};
}

std::string format_complex(cplx z) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

} // namespace

HolonomyRep parse_holonomy(std::string_view text) {
    HolonomyRep h;
    std::map<int, PeripheralWords> words;
    std::map<int, std::pair<bool, bool>> have;
    std::map<int, bool> filled;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    bool any = false;
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto p = raw.find('#'); p != std::string::npos) raw.erase(p);
        std::istringstream ls(raw);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        any = true;
        const std::string& key = tok[0];
        auto word_at = [&](std::size_t i) {
            try {
                return parse_word(tok.at(i));
            } catch (const std::exception& e) {
                throw ParseError(lineno, static_cast<int>(i) + 1, e.what());
            }
        };
        if (key == "manifold") {
            if (tok.size() != 2) throw ParseError(lineno, 0, "expected 'manifold <name>'");
            h.name = tok[1];
        } else if (key == "gen") {
            if (tok.size() != 5) throw ParseError(lineno, 0, "expected 'gen <a> <b> <c> <d>'");
            cplx e[4];
            for (int i = 0; i < 4; ++i) {
                try {
                    e[i] = parse_complex(tok[1 + i], lineno);
                } catch (const ParseError&) {
                    throw ParseError(lineno, 2 + i, "malformed complex literal '" + tok[1 + i] + "'");
                }
            }
            try {
                h.generators.emplace_back(e[0], e[1], e[2], e[3]);
            } catch (const GeometryError& ex) {
                throw ParseError(lineno, 0, ex.what());
            }
        } else if (key == "relator") {
            if (tok.size() != 2) throw ParseError(lineno, 0, "expected 'relator <word>'");
            h.relators.push_back(word_at(1));
        } else if (key == "cusp") {
            if (tok.size() < 3) throw ParseError(lineno, 0, "expected 'cusp <k> meridian|longitude <word>'");
            char* end = nullptr;
            long k = std::strtol(tok[1].c_str(), &end, 10);
            if (*end != '\0' || k < 0) throw ParseError(lineno, 2, "bad cusp index");
            int ki = static_cast<int>(k);
            if (tok[2] == "filled" && tok.size() == 3) {
                filled[ki] = true;
            } else if (tok.size() == 4 && tok[2] == "meridian") {
                words[ki].meridian = word_at(3);
                have[ki].first = true;
            } else if (tok.size() == 4 && tok[2] == "longitude") {
                words[ki].longitude = word_at(3);
                have[ki].second = true;
            } else {
                throw ParseError(lineno, 3, "expected 'meridian <word>', 'longitude <word>' or 'filled'");
            }
        } else {
            throw ParseError(lineno, 1, "unknown keyword '" + key + "'");
        }
    }
    if (!any) throw ParseError(lineno + 1, 0, "empty holonomy file");
    if (h.generators.empty()) throw ParseError(lineno + 1, 0, "no generators");
    int ncusps = 0;
    for (auto& [k, _] : have) ncusps = std::max(ncusps, k + 1);
    for (auto& [k, _] : filled) ncusps = std::max(ncusps, k + 1);
    h.cusps.resize(ncusps);
    for (int k = 0; k < ncusps; ++k) {
        if (filled.count(k)) {
            if (have.count(k)) throw ParseError(lineno + 1, 0, "cusp " + std::to_string(k) + " is both filled and complete");
            continue;
        }
        if (!have[k].first || !have[k].second)
            throw ParseError(lineno + 1, 0, "cusp " + std::to_string(k) + " needs meridian and longitude words");
        h.cusps[k] = words[k];
    }
    auto check_word = [&](const Word& w) {
        for (int x : w)
            if (std::abs(x) > static_cast<int>(h.generators.size()))
                throw ParseError(lineno + 1, 0, "word " + format_word(w) + " uses an unknown generator");
    };
    for (const auto& r : h.relators) check_word(r);
    for (const auto& c : h.cusps)
        if (c) {
            check_word(c->meridian);
            check_word(c->longitude);
        }
    if (h.name.empty()) h.name = "unnamed";
    return h;
}

HolonomyRep load_holonomy(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError(0, 0, "cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_holonomy(ss.str());
}

std::string write_holonomy(const HolonomyRep& h) {
    std::ostringstream out;
    out << "manifold " << h.name << "\n";
    for (const auto& g : h.generators)
        out << "gen " << format_complex(g.a) << ' ' << format_complex(g.b) << ' ' << format_complex(g.c) << ' '
            << format_complex(g.d) << "\n";
    for (const auto& r : h.relators) out << "relator " << format_word(r) << "\n";
    for (int k = 0; k < h.cusp_count(); ++k) {
        if (!h.cusps[k]) {
            out << "cusp " << k << " filled\n";
            continue;
        }
        out << "cusp " << k << " meridian " << format_word(h.cusps[k]->meridian) << "\n";
        out << "cusp " << k << " longitude " << format_word(h.cusps[k]->longitude) << "\n";
    }
    return out.str();
}

} // namespace cuspkit
