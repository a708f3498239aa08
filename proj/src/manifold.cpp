#include "cuspkit/manifold.hpp"

namespace cuspkit {

std::vector<int> Manifold::complete_cusps() const {
    std::vector<int> out;
    for (int k = 0; k < cusp_count(); ++k)
        if (frames[k]) out.push_back(k);
    return out;
}

const CuspFrame& Manifold::frame(int cusp) const {
    if (cusp < 0 || cusp >= cusp_count()) throw std::out_of_range("unknown cusp " + std::to_string(cusp));
    if (!frames[cusp]) throw GeometryError("no cusp cross-section: cusp " + std::to_string(cusp) + " is filled");
    return *frames[cusp];
}

Manifold manifold_from_holonomy(HolonomyRep h) {
    check_holonomy(h, 1e-7);
    Manifold m;
    m.name = h.name;
    m.frames.resize(h.cusp_count());
    for (int k : h.complete_cusps()) m.frames[k] = cusp_frame(h, k);
    m.holonomy = std::move(h);
    return m;
}

Manifold manifold_from_triangulation(const IdealTriangulation& tri, const SolveOptions& opts) {
    ShapeVector s = solve_shapes(tri, opts);
    if (!s.geometric) throw SolveError("solution is not geometric", s.residual);
    Manifold m = manifold_from_holonomy(build_holonomy(tri, s));
    m.triangulation = tri;
    m.shapes = std::move(s);
    return m;
}

Manifold load_manifold(const std::filesystem::path& path) {
    if (path.extension() == ".hol") return manifold_from_holonomy(load_holonomy(path.string()));
    return manifold_from_triangulation(load_triangulation(path));
}

} // namespace cuspkit
