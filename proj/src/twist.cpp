#include <cmath>

#include "cuspkit/surfaces.hpp"

namespace cuspkit {

TwistSeries twist_series(const IdealTriangulation& tri, const std::vector<long>& p_values) {
    if (p_values.empty()) throw std::invalid_argument("empty range of twist parameters");
    TwistSeries out;
    out.filled_cusp = -1;
    for (int k = 0; k < tri.cusp_count(); ++k)
        if (tri.cusps[k].filling && out.filled_cusp < 0) out.filled_cusp = k;
    if (out.filled_cusp < 0) throw std::invalid_argument("twist family needs a cusp with a filling slot");
    out.knot_cusp = -1;
    for (int k = 0; k < tri.cusp_count(); ++k)
        if (k != out.filled_cusp && (out.knot_cusp < 0 || tri.cusps[k].framing_shift != 0)) out.knot_cusp = k;
    if (out.knot_cusp < 0 || tri.cusp_count() != 2)
        throw std::invalid_argument("twist family needs exactly one filled and one open cusp");
    out.framing_shift = tri.cusps[out.knot_cusp].framing_shift;

    std::optional<std::vector<cplx>> guess;
    for (long p : p_values) {
        try {
            IdealTriangulation t = with_filling(tri, out.filled_cusp, 1, static_cast<int>(p));
            SolveOptions so;
            so.initial = guess;
            Manifold m = manifold_from_triangulation(t, so);
            guess = m.shapes->z;
            std::vector<double> delta = largest_diameters(m, out.knot_cusp);
            double scale = 1.0 / std::sqrt(delta[out.knot_cusp]);
            CuspShape s = cusp_shape_of(m, out.knot_cusp, scale);
            TwistRow row;
            row.p = p;
            row.scale = scale;
            row.area = s.area();
            row.eta_length = slope_length(s, static_cast<long>(out.framing_shift) * p, 1);
            row.width = row.area / row.eta_length;
            row.volume = volume(*m.shapes);
            out.rows.push_back(row);
        } catch (const std::exception& e) {
            out.skipped.emplace_back(p, e.what());
        }
    }
    for (auto it = out.rows.rbegin(); it != out.rows.rend() && it->width < 1.0; ++it) out.below_one_from = it->p;
    return out;
}

} // namespace cuspkit
