#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cuspkit/format.hpp"
#include "cuspkit/horoballs.hpp"

namespace cuspkit {

std::string diagram_json(const HoroballDiagram& d) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["manifold"] = d.manifold;
    j["cusp"] = d.cusp;
    ordered_json scales = ordered_json::array();
    for (double s : d.scales) scales.push_back(sig12(s));
    j["scales"] = scales;
    j["cutoff"] = sig12(d.cutoff);
    ordered_json balls = ordered_json::array();
    for (const auto& b : d.balls) {
        ordered_json e;
        e["re"] = sig12(b.center.real());
        e["im"] = sig12(b.center.imag());
        e["diameter"] = sig12(b.diameter);
        e["word"] = format_word(b.word);
        e["cusp"] = b.cusp;
        balls.push_back(e);
    }
    j["balls"] = balls;
    j["lattice"] = {{"mu", {sig12(d.mu.real()), sig12(d.mu.imag())}},
                    {"lambda", {sig12(d.lambda.real()), sig12(d.lambda.imag())}}};
    j["verified"] = d.verified;
    return j.dump(2) + "\n";
}

std::string diagram_svg(const HoroballDiagram& d) {
    // overhead view of the fundamental parallelogram and its neighbours
    const cplx corners[4] = {0.0, d.mu, d.mu + d.lambda, d.lambda};
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    for (cplx c : corners) {
        xmin = std::min(xmin, c.real());
        xmax = std::max(xmax, c.real());
        ymin = std::min(ymin, c.imag());
        ymax = std::max(ymax, c.imag());
    }
    const double pad = 1.0;
    xmin -= pad;
    ymin -= pad;
    xmax += pad;
    ymax += pad;
    const double px = 600.0 / std::max(xmax - xmin, ymax - ymin);
    auto X = [&](double x) { return (x - xmin) * px; };
    auto Y = [&](double y) { return (ymax - y) * px; };
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt12(X(xmax)) << "\" height=\"" << fmt12(Y(ymin))
      << "\" viewBox=\"0 0 " << fmt12(X(xmax)) << ' ' << fmt12(Y(ymin)) << "\">\n";
    s << "<title>" << d.manifold << " cusp " << d.cusp << " horoballs (cutoff " << fmt12(d.cutoff) << ")</title>\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<polygon fill=\"none\" stroke=\"black\" stroke-dasharray=\"4 3\" points=\"";
    for (cplx c : corners) s << fmt12(X(c.real())) << ',' << fmt12(Y(c.imag())) << ' ';
    s << "\"/>\n";
    for (int m = -1; m <= 1; ++m) {
        for (int n = -1; n <= 1; ++n) {
            cplx v = static_cast<double>(m) * d.mu + static_cast<double>(n) * d.lambda;
            for (const auto& b : d.balls) {
                cplx c = b.center + v;
                double r = b.diameter / 2.0;
                if (c.real() + r < xmin || c.real() - r > xmax || c.imag() + r < ymin || c.imag() - r > ymax) continue;
                s << "<circle cx=\"" << fmt12(X(c.real())) << "\" cy=\"" << fmt12(Y(c.imag())) << "\" r=\""
                  << fmt12(r * px) << "\" fill=\"none\" stroke=\"" << palette[b.cusp % 6] << "\""
                  << (m == 0 && n == 0 ? "" : " stroke-opacity=\"0.35\"") << "/>\n";
            }
        }
    }
    s << "</svg>\n";
    return s.str();
}

} // namespace cuspkit
