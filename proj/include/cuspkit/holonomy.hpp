#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cuspkit/hmodel.hpp"
#include "cuspkit/triangulation.hpp"
#include "cuspkit/words.hpp"

namespace cuspkit {

struct PeripheralWords {
    Word meridian;
    Word longitude;
};

struct HolonomyRep {
    std::string name;
    std::vector<MoebiusMap> generators;
    std::vector<Word> relators;
    // One entry per cusp; empty for filled cusps, which have no parabolic peripheral group.
    std::vector<std::optional<PeripheralWords>> cusps;

    MoebiusMap eval(const Word& w) const { return evaluate(generators, w); }
    double relator_residual() const;
    int cusp_count() const { return static_cast<int>(cusps.size()); }
    std::vector<int> complete_cusps() const;
};

class DevelopmentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct HolonomyOptions {
    double tol = 1e-8;
    bool simplify = true;
};

HolonomyRep build_holonomy(const IdealTriangulation& tri, const ShapeVector& s, const HolonomyOptions& opts = {});

// Raises DevelopmentError when a relator, commutator or peripheral parabolicity check fails.
void check_holonomy(const HolonomyRep& h, double tol);

HolonomyRep parse_holonomy(std::string_view text);
HolonomyRep load_holonomy(const std::string& path);
std::string write_holonomy(const HolonomyRep& h);

// Frame of a complete cusp: C maps infinity to the cusp point, with the meridian
// acting as w -> w + 1 and the longitude as w -> w + tau.
struct CuspFrame {
    MoebiusMap C;
    cplx tau;
    BoundaryPoint fixed_point;
};

CuspFrame cusp_frame(const HolonomyRep& h, int cusp);

struct Translations {
    cplx mu;
    cplx lambda;
};

// Meridian and longitude translations on the horosphere of height 1 in the
// frame w -> q - 1/w, rotated so the meridian is real and positive.
Translations cusp_translations(const HolonomyRep& h, int cusp);
Translations cusp_translations(const IdealTriangulation& tri, const ShapeVector& s, int cusp);

} // namespace cuspkit
