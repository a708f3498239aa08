#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cuspkit/cusps.hpp"
#include "cuspkit/format.hpp"
#include "cuspkit/horoballs.hpp"
#include "cuspkit/manifold.hpp"
#include "cuspkit/surfaces.hpp"

using namespace cuspkit;
using nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kNumeric = 2, kVerification = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    std::string format = "text";
    std::string output;
};

ordered_json num(double v) { return sig12(v); }
ordered_json pair_json(std::pair<long, long> s) { return ordered_json::array({s.first, s.second}); }
ordered_json cplx_json(cplx z) { return ordered_json::array({sig12(z.real()), sig12(z.imag())}); }

void emit(const Config& cfg, const ordered_json& j, const std::string& text) {
    std::string body = cfg.format == "json" ? j.dump(2) + "\n" : text;
    if (cfg.output.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(cfg.output);
    if (!out) throw UsageError("cannot write " + cfg.output);
    out << body;
}

std::pair<long, long> parse_pair(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos) throw UsageError("expected p,q but got '" + s + "'");
    try {
        std::size_t a = 0, b = 0;
        long p = std::stol(s.substr(0, comma), &a);
        long q = std::stol(s.substr(comma + 1), &b);
        if (a != comma || b != s.size() - comma - 1) throw UsageError("expected p,q but got '" + s + "'");
        return {p, q};
    } catch (const std::logic_error&) {
        throw UsageError("expected p,q but got '" + s + "'");
    }
}

std::vector<long> parse_range(const std::string& s) {
    auto dots = s.find("..");
    if (dots == std::string::npos) throw UsageError("range must look like a..b");
    long a = 0, b = 0;
    try {
        a = std::stol(s.substr(0, dots));
        b = std::stol(s.substr(dots + 2));
    } catch (const std::logic_error&) {
        throw UsageError("range must look like a..b");
    }
    if (a > b) throw UsageError("empty range " + s);
    std::vector<long> out;
    for (long p = a; p <= b; ++p) out.push_back(p);
    return out;
}

int require_cusp(const Manifold& m, int cusp) {
    auto cs = m.complete_cusps();
    if (cusp < 0) return cs.at(0);
    if (std::find(cs.begin(), cs.end(), cusp) == cs.end())
        throw UsageError("cusp " + std::to_string(cusp) + " is not a complete cusp");
    return cusp;
}

// Own maximal scale of one cusp, every other cusp shrunk away.
double maximal_scale(const Manifold& m, int cusp) {
    double d = largest_diameters(m, cusp).at(static_cast<std::size_t>(cusp));
    return 1.0 / std::sqrt(d);
}

int cmd_solve(const Config& cfg, const std::string& path) {
    IdealTriangulation tri = load_triangulation(path);
    ShapeVector s = solve_shapes(tri);
    double vol = volume(s);
    ordered_json j;
    j["manifold"] = tri.name;
    ordered_json shapes = ordered_json::array();
    for (cplx z : s.z) shapes.push_back(cplx_json(z));
    j["shapes"] = shapes;
    j["residual"] = num(s.residual);
    j["volume"] = num(vol);
    j["geometric"] = s.geometric;
    std::ostringstream t;
    t << "manifold   " << tri.name << "\n"
      << "tetrahedra " << tri.n << "\n"
      << "volume     " << fmt12(vol) << "\n"
      << "residual   " << fmt12(s.residual) << "\n"
      << "geometric  " << (s.geometric ? "true" : "false") << "\n";
    for (std::size_t i = 0; i < s.z.size(); ++i)
        t << "  z" << i << " = " << fmt12(s.z[i].real()) << (s.z[i].imag() < 0 ? " - " : " + ")
          << fmt12(std::abs(s.z[i].imag())) << "i\n";
    emit(cfg, j, t.str());
    return kOk;
}

int cmd_width(const Config& cfg, const std::string& path, const std::string& curve, bool balance) {
    Manifold m = load_manifold(path);
    auto cusps = m.complete_cusps();
    std::vector<std::pair<long, long>> curves;
    for (int k : cusps) {
        if (curve == "longitude") curves.push_back({0, 1});
        else if (curve == "minimal") curves.push_back(minimal_l_curve(cusp_shape_of(m, k)).slope());
        else curves.push_back(parse_pair(curve));
        if (curves.back() == std::pair<long, long>{0, 0}) throw UsageError("zero slope");
    }
    ordered_json j;
    j["manifold"] = m.name;
    j["balanced"] = balance || cusps.size() == 1;
    ordered_json rows = ordered_json::array();
    std::ostringstream t;
    if (balance || cusps.size() == 1) {
        WidthReport r = balance_cusps(m, curves);
        for (std::size_t i = 0; i < cusps.size(); ++i) {
            int k = cusps[i];
            CuspShape s = cusp_shape_of(m, k, r.scales[static_cast<std::size_t>(k)]);
            rows.push_back({{"cusp", k},
                            {"curve", pair_json(curves[i])},
                            {"scale", num(r.scales[static_cast<std::size_t>(k)])},
                            {"area", num(s.area())},
                            {"curve_length", num(slope_length(s, curves[i].first, curves[i].second))},
                            {"width", num(r.widths[i])}});
            t << "cusp " << k << "  curve (" << curves[i].first << "," << curves[i].second << ")  scale "
              << fmt12(r.scales[static_cast<std::size_t>(k)]) << "  width " << fmt12(r.widths[i]) << "\n";
        }
        j["cusps"] = rows;
        j["width"] = num(r.width);
        j["closed_form"] = num(r.closed_form);
        t << "width " << fmt12(r.width) << (cusps.size() > 1 ? " (balanced)" : "") << "\n";
    } else {
        for (std::size_t i = 0; i < cusps.size(); ++i) {
            int k = cusps[i];
            double sc = maximal_scale(m, k);
            CuspShape s = cusp_shape_of(m, k, sc);
            double w = width_along(s, curves[i].first, curves[i].second);
            rows.push_back({{"cusp", k},
                            {"curve", pair_json(curves[i])},
                            {"scale", num(sc)},
                            {"area", num(s.area())},
                            {"curve_length", num(slope_length(s, curves[i].first, curves[i].second))},
                            {"width", num(w)}});
            t << "cusp " << k << "  curve (" << curves[i].first << "," << curves[i].second << ")  own maximal scale "
              << fmt12(sc) << "  width " << fmt12(w) << "\n";
        }
        j["cusps"] = rows;
    }
    emit(cfg, j, t.str());
    return kOk;
}

int cmd_slope(const Config& cfg, const std::string& path, long p, long q, int cusp_opt) {
    if (p == 0 && q == 0) throw UsageError("slope 0 0 is not a curve");
    Manifold m = load_manifold(path);
    int k = require_cusp(m, cusp_opt);
    double sc = maximal_scale(m, k);
    double len = slope_length(cusp_shape_of(m, k, sc), p, q);
    ordered_json j{{"manifold", m.name}, {"cusp", k}, {"slope", {p, q}}, {"scale", num(sc)}, {"length", num(len)}};
    emit(cfg, j, "slope (" + std::to_string(p) + "," + std::to_string(q) + ") on maximal cusp " + std::to_string(k) +
                     ": length " + fmt12(len) + "\n");
    return kOk;
}

int cmd_horoballs(const Config& cfg, const std::string& path, double cutoff, int cusp_opt, const std::string& svg,
                  int symmetry) {
    if (!(cutoff > 0)) throw UsageError("cutoff must be positive");
    Manifold m = load_manifold(path);
    int k = require_cusp(m, cusp_opt);
    WidthReport r = balance_cusps(m);
    HoroballDiagram d = enumerate(m, k, r.scales, cutoff);
    const double full_tol = 1e-6;
    std::size_t full = d.count_full_sized(full_tol);
    ordered_json j = ordered_json::parse(diagram_json(d));
    j["full_sized"] = full;
    std::ostringstream t;
    t << d.balls.size() << " balls of diameter >= " << fmt12(cutoff) << " per fundamental domain (cusp " << k
      << ", " << (d.verified ? "stable" : "unverified") << ")\n"
      << full << " full-sized\n";
    for (const auto& b : d.balls)
        t << "  " << fmt12(b.center.real()) << " " << fmt12(b.center.imag()) << "  d " << fmt12(b.diameter) << "  cusp "
          << b.cusp << "\n";
    bool sym_ok = true;
    if (symmetry > 0) {
        SymmetryReport s = detect_symmetry(d, 0, 1, symmetry);
        j["symmetry"] = {{"curve", {0, 1}}, {"order", symmetry}, {"verified", s.verified}};
        t << "order-" << symmetry << " symmetry along the longitude: " << (s.verified ? "verified" : "not verified")
          << "\n";
        sym_ok = s.verified;
    }
    if (!svg.empty()) {
        std::ofstream out(svg);
        if (!out) throw UsageError("cannot write " + svg);
        out << diagram_svg(d);
    }
    emit(cfg, j, t.str());
    return sym_ok ? kOk : kVerification;
}

int cmd_surface(const Config& cfg, const std::string& path, const std::string& candidate, int ngons, bool synthetic) {
    if (ngons < 2) throw UsageError("--ngons must be at least 2");
    if (synthetic) {
        auto found = find_ngons(synthetic_trigon_lifts(), synthetic_trigon_diagram(), ngons);
        ordered_json arr = ordered_json::array();
        std::ostringstream t;
        for (const auto& w : found) {
            ordered_json corners = ordered_json::array();
            t << w.n() << "-gon:";
            for (const auto& c : w.corners) {
                corners.push_back({{"point", c.point.is_infinite() ? ordered_json("inf") : cplx_json(c.point.value())},
                                   {"cusp", c.cusp},
                                   {"arc", num(c.arc)}});
                std::string where = "inf";
                if (!c.point.is_infinite())
                    where = fmt12(c.point.value().real()) + (c.point.value().imag() < 0 ? "-" : "+") +
                            fmt12(std::abs(c.point.value().imag())) + "i";
                t << "  " << where << " (arc " << fmt12(c.arc) << ")";
            }
            t << "\n";
            arr.push_back({{"n", w.n()}, {"corners", corners}});
        }
        emit(cfg, ordered_json{{"fixture", "synthetic-trigon"}, {"ngons", arr}}, t.str());
        return kOk;
    }
    if (path.empty() || candidate.empty()) throw UsageError("surface needs a manifold and a candidate file");
    Manifold m = load_manifold(path);
    SurfaceCandidate c = load_candidate(candidate);
    if (c.frame_cusp >= m.cusp_count() || !m.frames[static_cast<std::size_t>(c.frame_cusp)])
        throw UsageError("candidate frame cusp is not a complete cusp of " + m.name);
    WidthTheoremReport r = width_theorem_report(m, c, ngons);
    std::ostringstream t;
    t << "candidate " << (c.name.empty() ? candidate : c.name) << " on " << m.name << ": " << to_string(r.verdict)
      << "\n";
    for (std::size_t i = 0; i < r.slopes.size(); ++i)
        t << "  cusp " << r.widths.cusps[i] << " boundary slope (" << r.slopes[i].first << "," << r.slopes[i].second
          << ")\n";
    t << "  balanced width " << fmt12(r.width) << "\n";
    t << "  essential n-gons (n <= " << ngons << "): " << r.ngons.size() << " (" << r.bigons << " bigons, "
      << r.trigons << " trigons)\n";
    for (const auto& cl : r.clauses)
        t << "  [" << (!cl.applicable ? "skip" : cl.pass ? "pass" : "FAIL") << "] " << cl.name << ": " << cl.detail
          << "\n";
    emit(cfg, ordered_json::parse(width_theorem_json(r)), t.str());
    bool ok = r.verdict != Invariance::not_invariant && r.all_pass();
    return ok ? kOk : kVerification;
}

int cmd_twist(const Config& cfg, const std::string& path, const std::string& range) {
    std::vector<long> ps = parse_range(range);
    IdealTriangulation tri = load_triangulation(path);
    TwistSeries s = twist_series(tri, ps);
    ordered_json rows = ordered_json::array();
    std::ostringstream t;
    t << "filled cusp " << s.filled_cusp << ", knot cusp " << s.knot_cusp << ", framing shift " << s.framing_shift
      << "\n";
    t << "    p  width           |eta_p|         area            width*|eta_p|\n";
    double max_rel = 0.0;
    bool decreasing = true;
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
        const auto& r = s.rows[i];
        double prod = r.width * r.eta_length;
        max_rel = std::max(max_rel, std::abs(prod - r.area) / r.area);
        if (i > 0 && !(r.width < s.rows[i - 1].width)) decreasing = false;
        rows.push_back({{"p", r.p},
                        {"width", num(r.width)},
                        {"eta_length", num(r.eta_length)},
                        {"area", num(r.area)},
                        {"volume", num(r.volume)},
                        {"scale", num(r.scale)}});
        char line[160];
        std::snprintf(line, sizeof line, "%5ld  %-14.10g  %-14.10g  %-14.10g  %.10g\n", r.p, r.width, r.eta_length,
                      r.area, prod);
        t << line;
    }
    ordered_json skipped = ordered_json::array();
    for (const auto& [p, why] : s.skipped) {
        skipped.push_back({{"p", p}, {"reason", why}});
        t << "  skipped p = " << p << ": " << why << "\n";
    }
    ordered_json j{{"manifold", tri.name},
                   {"filled_cusp", s.filled_cusp},
                   {"knot_cusp", s.knot_cusp},
                   {"framing_shift", s.framing_shift},
                   {"rows", rows},
                   {"skipped", skipped},
                   {"strictly_decreasing", decreasing},
                   {"max_area_identity_error", num(max_rel)}};
    if (s.below_one_from) {
        j["below_one_from"] = *s.below_one_from;
        t << "width < 1 for every p >= " << *s.below_one_from
          << ": these knots admit no totally geodesic Seifert surface\n";
    } else {
        j["below_one_from"] = nullptr;
    }
    emit(cfg, j, t.str());
    return s.rows.empty() ? kNumeric : kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cusp geometry of hyperbolic knot and link complements"};
    app.require_subcommand(1);
    app.fallthrough();
    Config cfg;
    std::string tol;
    app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("-o,--output", cfg.output, "write the report to a file");
    app.add_option("--tol", tol, "geometric tolerance (overrides CUSPKIT_TOL)");

    std::string path, candidate, curve = "longitude", svg, range;
    bool balance = false, synthetic = false;
    long p = 0, q = 0;
    double cutoff = 0.5;
    int cusp = -1, symmetry = 0, ngons = 4;

    auto* solve = app.add_subcommand("solve", "solve the gluing equations");
    solve->add_option("path", path, "triangulation file")->required();

    auto* width = app.add_subcommand("width", "width of an l-curve on the maximal cusp");
    width->add_option("path", path, "triangulation or holonomy file")->required();
    width->add_option("--curve", curve, "longitude, minimal, or p,q");
    width->add_flag("--balance", balance, "expand all cusps together until the first tangency");

    auto* slope = app.add_subcommand("slope", "length of a slope on the maximal cusp");
    slope->add_option("path", path)->required();
    slope->add_option("p", p)->required();
    slope->add_option("q", q)->required();
    slope->add_option("--cusp", cusp, "complete cusp (default: the first)");

    auto* horo = app.add_subcommand("horoballs", "horoball pattern seen from a cusp");
    horo->add_option("path", path)->required();
    horo->add_option("--cutoff", cutoff, "smallest diameter listed");
    horo->add_option("--cusp", cusp, "cusp placed at infinity (default: the first complete one)");
    horo->add_option("--svg", svg, "write an SVG plot");
    horo->add_option("--symmetry", symmetry, "check translational symmetry of this order along the longitude");

    auto* surf = app.add_subcommand("surface", "verify a totally geodesic surface candidate");
    surf->add_option("path", path);
    surf->add_option("candidate", candidate);
    surf->add_option("--ngons", ngons, "largest n searched for essential n-gons");
    surf->add_flag("--synthetic", synthetic, "run the n-gon detector on the built-in width-one configuration");

    auto* twist = app.add_subcommand("twist", "widths along a Dehn-filled twist family");
    twist->add_option("path", path)->required();
    twist->add_option("--range", range, "p values a..b")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (!tol.empty()) setenv("CUSPKIT_TOL", tol.c_str(), 1);
        default_tolerance();
        if (*solve) return cmd_solve(cfg, path);
        if (*width) return cmd_width(cfg, path, curve, balance);
        if (*slope) return cmd_slope(cfg, path, p, q, cusp);
        if (*horo) return cmd_horoballs(cfg, path, cutoff, cusp, svg, symmetry);
        if (*surf) return cmd_surface(cfg, path, candidate, ngons, synthetic);
        if (*twist) return cmd_twist(cfg, path, range);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kNumeric;
    }
    return kUsage;
}
