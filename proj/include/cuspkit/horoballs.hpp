#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cuspkit/manifold.hpp"

namespace cuspkit {

// Coordinates used for a cusp diagram: the cusp sits at infinity with its
// horoball at height 1, and the meridian translation is real and positive.
struct DisplayFrame {
    int cusp = 0;
    MoebiusMap to_dev;   // display coordinates -> developing coordinates
    MoebiusMap from_dev; // inverse
    cplx mu;             // lattice generators in display coordinates
    cplx lambda;

    // Reduce a point into the parallelogram [0,1)mu + [0,1)lambda; returns the shift applied.
    cplx reduce(cplx z, cplx* shift = nullptr) const;
    // Lattice coordinates (x, y) with z = x*mu + y*lambda.
    std::pair<double, double> coords(cplx z) const;
    double area() const { return std::abs(std::imag(std::conj(mu) * lambda)); }
};

// scales[j] is the meridian length of cusp j (the cusp size); entries for filled cusps are ignored.
DisplayFrame display_frame(const Manifold& m, int cusp, const std::vector<double>& scales);

// Generators (and inverses) conjugated into a display frame.
std::vector<MoebiusMap> frame_generators(const Manifold& m, const DisplayFrame& f);

struct BallEntry {
    cplx center;
    double diameter;
    Word word;
    int cusp;
};

struct HoroballDiagram {
    std::string manifold;
    int cusp = 0;
    std::vector<double> scales;
    double cutoff = 0.0;
    std::vector<BallEntry> balls; // finite balls with diameter >= cutoff, canonical order
    cplx mu;
    cplx lambda;
    bool verified = false;
    int refinements = 0;         // expansion-threshold halvings needed for stability
    std::size_t explored = 0;    // balls generated during the search

    std::size_t count_full_sized(double tol) const;
};

struct EnumerateOptions {
    std::size_t budget = 400000;
    int max_refinements = 16;
    double promote_ratio = 0.2;     // balls this large relative to the largest lend their elements as moves
    std::size_t max_promoted = 48;
    double tol = 1e-7; // center and diameter agreement
    bool throw_on_budget = true;
};

class EnumerationError : public std::runtime_error {
public:
    EnumerationError(const std::string& what, HoroballDiagram partial)
        : std::runtime_error(what), partial(std::move(partial)) {}
    HoroballDiagram partial;
};

HoroballDiagram enumerate(const Manifold& m, int cusp, const std::vector<double>& scales, double cutoff,
                          const EnumerateOptions& opts = {});

struct OverlapWitness {
    int a;          // ball index, -1 for the ball at infinity
    int b;
    cplx shift;     // lattice translation applied to ball b
    double distance;
};

struct Embeddedness {
    bool embedded = true;
    double min_distance = std::numeric_limits<double>::infinity();
    std::optional<OverlapWitness> overlap;
};

Embeddedness embeddedness(const HoroballDiagram& d, double tangency_tol = default_tolerance().tangency);

struct TangencyEdge {
    int a; // -1 for the ball at infinity
    int b;
    cplx shift; // deck translation applied to ball b
    Point3 point;
    double distance;
};

struct TangencyGraph {
    std::size_t node_count = 0; // finite balls; the ball at infinity is node -1
    std::vector<TangencyEdge> edges;
};

TangencyGraph tangencies(const HoroballDiagram& d, double tangency_tol = default_tolerance().tangency);

struct SymmetryReport {
    long p = 0;
    long q = 1;
    int order = 1;
    cplx translation;
    bool verified = false;
};

SymmetryReport detect_symmetry(const HoroballDiagram& d, long p, long q, int order,
                               double tol = default_tolerance().tangency);

// Largest finite diameter of each cusp's balls seen from `cusp` when every cusp has meridian length 1.
std::vector<double> largest_diameters(const Manifold& m, int cusp, const EnumerateOptions& opts = {});

std::string diagram_json(const HoroballDiagram& d);
std::string diagram_svg(const HoroballDiagram& d);

} // namespace cuspkit
