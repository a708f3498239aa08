#include "cuspkit/cusps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cuspkit {

CuspShape::CuspShape(cplx mu, cplx lambda, double t, int k) : t_mu(mu), t_lambda(lambda), scale(t), cusp(k) {
    if (std::abs(std::imag(std::conj(mu) * lambda)) < 1e-14 * std::abs(mu) * std::abs(lambda))
        throw GeometryError("degenerate cusp lattice");
    if (!(t > 0)) throw GeometryError("cusp scale must be positive");
}

double CuspShape::area() const { return std::abs(std::imag(std::conj(t_mu) * t_lambda)) * scale * scale; }

CuspShape CuspShape::rescaled(double t) const { return CuspShape(t_mu, t_lambda, t, cusp); }

CuspShape cusp_shape_of(const Manifold& m, int cusp, double scale) {
    return CuspShape(1.0, m.frame(cusp).tau, scale, cusp);
}

double slope_length(const CuspShape& s, long p, long q) {
    if (p == 0 && q == 0) throw std::invalid_argument("zero slope");
    return std::abs(static_cast<double>(p) * s.t_mu + static_cast<double>(q) * s.t_lambda) * s.scale;
}

double width_along(const CuspShape& s, long p, long q) { return s.area() / slope_length(s, p, q); }

double width(const CuspShape& s, const LCurve& c) { return width_along(s, c.k, 1); }

LCurve minimal_l_curve(const CuspShape& s) {
    long bound = static_cast<long>(std::ceil(std::abs(s.t_lambda) / std::abs(s.t_mu))) + 1;
    LCurve best{0};
    double best_len = std::abs(s.t_lambda);
    for (long k = 1; k <= bound; ++k) {
        for (long kk : {k, -k}) {
            double len = std::abs(s.t_lambda + static_cast<double>(kk) * s.t_mu);
            // strict improvement only: ties keep the smaller |k|, and +k is tried before -k
            if (len < best_len * (1.0 - 1e-12)) {
                best_len = len;
                best.k = kk;
            }
        }
    }
    return best;
}

long intersection_number(std::pair<long, long> c1, std::pair<long, long> c2) {
    return std::labs(c1.first * c2.second - c2.first * c1.second);
}

std::vector<std::vector<double>> cusp_overlap_table(const Manifold& m, const EnumerateOptions& opts) {
    std::vector<std::vector<double>> delta(m.cusp_count(), std::vector<double>(m.cusp_count(), 0.0));
    for (int i : m.complete_cusps()) delta[i] = largest_diameters(m, i, opts);
    return delta;
}

WidthReport balance_cusps(const Manifold& m, const std::vector<std::pair<long, long>>& curves,
                          const BalanceOptions& opts) {
    WidthReport r;
    r.cusps = m.complete_cusps();
    if (r.cusps.empty()) throw GeometryError("no cusp cross-section: every cusp is filled");
    r.curves = curves;
    if (r.curves.empty()) r.curves.assign(r.cusps.size(), {0, 1});
    if (r.curves.size() != r.cusps.size()) throw std::invalid_argument("need one curve per complete cusp");

    // width of cusp j at scale t is t * W[j]
    std::vector<double> W(m.cusp_count(), 0.0);
    for (std::size_t a = 0; a < r.cusps.size(); ++a) {
        int j = r.cusps[a];
        CuspShape s = cusp_shape_of(m, j, 1.0);
        W[j] = width_along(s, r.curves[a].first, r.curves[a].second);
    }
    r.delta = cusp_overlap_table(m, opts.enumeration);

    auto feasible = [&](double w) {
        for (int i : r.cusps)
            for (int j : r.cusps)
                if ((w / W[i]) * (w / W[j]) * r.delta[i][j] > 1.0) return false;
        return true;
    };
    r.closed_form = std::numeric_limits<double>::infinity();
    for (int i : r.cusps)
        for (int j : r.cusps)
            if (r.delta[i][j] > 0) r.closed_form = std::min(r.closed_form, std::sqrt(W[i] * W[j] / r.delta[i][j]));

    double lo = 0.0, hi = 1.0;
    while (feasible(hi)) hi *= 2.0;
    for (int it = 0; it < opts.iterations && hi - lo > opts.window * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
    }
    r.width = lo;
    r.scales.assign(m.cusp_count(), 0.0);
    for (int j : r.cusps) r.scales[j] = lo / W[j];
    for (int j : r.cusps) r.widths.push_back(r.scales[j] * W[j]);

    // certify: embedded at the returned scales, with a tangency
    const double tol = default_tolerance().tangency;
    for (int i : r.cusps) {
        double largest = 0.0;
        for (int j : r.cusps) largest = std::max(largest, r.scales[i] * r.scales[j] * r.delta[i][j]);
        HoroballDiagram d = enumerate(m, i, r.scales, std::min(0.5, 0.9 * largest), opts.enumeration);
        Embeddedness e = embeddedness(d, tol);
        if (!e.embedded) throw GeometryError("balanced cusps are not embedded; increase depth");
        for (const auto& b : d.balls) {
            double dist = std::log(1.0 / b.diameter);
            if (std::abs(dist) < tol && (!r.witness || std::abs(dist) < std::abs(r.witness->distance)))
                r.witness = CuspTangency{i, b.cusp, b.center, b.diameter, b.word, dist};
        }
    }
    bool equal = true;
    for (double w : r.widths) equal = equal && std::abs(w - r.width) < default_tolerance().geometric * std::max(1.0, r.width);
    r.balanced = equal && r.witness.has_value();
    return r;
}

} // namespace cuspkit
