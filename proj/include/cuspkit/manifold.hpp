#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cuspkit/holonomy.hpp"
#include "cuspkit/triangulation.hpp"

namespace cuspkit {

// A hyperbolic structure ready for cusp computations: holonomy plus cusp frames.
struct Manifold {
    std::string name;
    HolonomyRep holonomy;
    std::vector<std::optional<CuspFrame>> frames; // empty for filled cusps
    std::optional<IdealTriangulation> triangulation;
    std::optional<ShapeVector> shapes;

    int cusp_count() const { return static_cast<int>(frames.size()); }
    std::vector<int> complete_cusps() const;
    const CuspFrame& frame(int cusp) const;
    bool is_knot_like() const { return complete_cusps().size() == 1; }
};

Manifold manifold_from_holonomy(HolonomyRep h);
Manifold manifold_from_triangulation(const IdealTriangulation& tri, const SolveOptions& opts = {});
// Loads a .tri or .hol file.
Manifold load_manifold(const std::filesystem::path& path);

} // namespace cuspkit
