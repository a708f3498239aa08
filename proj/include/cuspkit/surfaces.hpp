#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cuspkit/cusps.hpp"
#include "cuspkit/horoballs.hpp"
#include "cuspkit/manifold.hpp"

namespace cuspkit {

enum class Freeness { free, semifree, totally_knotted, unknown };

std::string to_string(Freeness f);
Freeness parse_freeness(const std::string& s);

// A seed plane, given in the unit frame of `frame_cusp` (meridian w -> w + 1,
// longitude w -> w + tau), plus metadata that is carried, not computed.
struct SurfaceCandidate {
    std::string name;
    int frame_cusp = 0;
    GeodesicPlane seed;
    std::optional<bool> orientable;
    Freeness freeness = Freeness::unknown;
    std::optional<std::pair<long, long>> claimed_slope;
};

SurfaceCandidate parse_candidate(const std::string& json_text);
SurfaceCandidate load_candidate(const std::filesystem::path& path);
std::string candidate_json(const SurfaceCandidate& c);

struct PlaneLift {
    GeodesicPlane plane;
    Word word; // group element carrying the seed to this plane, modulo peripheral translations
};

// Orbit of a plane modulo the peripheral lattice, drawn in a display frame.
// Vertical planes are kept one per parallel class; hemispheres have centers
// reduced into the fundamental parallelogram.
struct PlaneLiftSet {
    int cusp = 0;
    std::vector<double> scales;
    cplx mu;
    cplx lambda;
    double min_radius = 0.0;
    std::vector<PlaneLift> planes;
    bool verified = false;   // the list stopped changing under refinement
    bool discrete = true;    // false when near-coincident distinct lifts were found
    std::optional<std::pair<Word, Word>> accumulation; // two lifts that nearly coincide
    bool nonlattice_vertical = false; // a vertical lift has a direction no lattice vector shares
    int refinements = 0;
    std::size_t explored = 0;

    std::vector<const PlaneLift*> verticals() const;
};

struct OrbitOptions {
    std::size_t budget = 200000;
    int max_refinements = 12;
    double tol = 1e-7;
};

// Orbit of `seed` (in display coordinates of `cusp` at the given scales).
PlaneLiftSet orbit_planes(const Manifold& m, int cusp, const std::vector<double>& scales, const GeodesicPlane& seed,
                          double min_radius, const OrbitOptions& opts = {});

// The candidate's seed moved into the display frame of `cusp`.
GeodesicPlane seed_in_frame(const Manifold& m, const SurfaceCandidate& c, int cusp, const std::vector<double>& scales);

enum class Invariance { embedded, immersed, not_invariant };
std::string to_string(Invariance v);

struct CrossingWitness {
    std::size_t a, b; // indices into the lift set
    cplx shift;       // translation applied to b
};

struct InvarianceReport {
    Invariance verdict = Invariance::not_invariant;
    PlaneLiftSet lifts;
    std::optional<CrossingWitness> crossing;
    std::optional<Word> witness; // element moving the orbit off any locally finite family
    std::string reason;
};

InvarianceReport verify_invariant(const Manifold& m, const SurfaceCandidate& c, double min_radius = 0.05,
                                  const OrbitOptions& opts = {});

// Boundary slope (p, q) of the surface on the lift set's cusp: the common
// direction of its vertical planes as a primitive class p*mu + q*lambda.
std::pair<long, long> boundary_slope(const PlaneLiftSet& lifts, const CuspShape& cusp);

struct NGonCorner {
    std::size_t plane;   // index into the lift set
    cplx shift;          // translation applied to that plane
    BoundaryPoint point; // tangency point shared with the next plane
    int cusp;            // cusp of the horoball centered there
    double arc;          // horospherical length of the cusp arc at that point
};

struct NGonWitness {
    int frame_cusp = 0;
    std::vector<NGonCorner> corners; // cyclic; corner i joins plane i to plane i+1
    std::size_t n() const { return corners.size(); }
};

std::vector<NGonWitness> find_ngons(const PlaneLiftSet& lifts, const HoroballDiagram& diagram, int max_n,
                                    double tangency_tol = default_tolerance().tangency);

// Corner sequence (cusp, arc length in units of 1e-6) up to rotation and reversal.
std::vector<std::pair<int, long long>> ngon_signature(const NGonWitness& w);

struct Clause {
    std::string name;
    bool applicable = true;
    bool pass = true;
    std::string detail;
};

struct WidthTheoremReport {
    std::string manifold;
    std::string candidate;
    Invariance verdict = Invariance::not_invariant;
    std::vector<std::pair<long, long>> slopes; // per complete cusp
    double width = 0.0;
    WidthReport widths;
    std::vector<NGonWitness> ngons;
    std::size_t bigons = 0;
    std::size_t trigons = 0;
    std::vector<Clause> clauses;
    bool all_pass() const;
};

WidthTheoremReport width_theorem_report(const Manifold& m, const SurfaceCandidate& c, int max_n = 4);
std::string width_theorem_json(const WidthTheoremReport& r);

// Two vertical planes one unit apart with the hemisphere of radius 1/2 between
// them, and full-sized horoballs at the two feet: the configuration of a width-one cusp.
PlaneLiftSet synthetic_trigon_lifts();
HoroballDiagram synthetic_trigon_diagram();

struct TwistRow {
    long p = 0;
    double width = 0.0;      // area / |eta_p|
    double eta_length = 0.0; // |lambda + s p mu| on the maximal cusp
    double area = 0.0;
    double volume = 0.0;
    double scale = 0.0;      // meridian length of the maximal cusp
};

struct TwistSeries {
    int filled_cusp = 0;
    int knot_cusp = 1;
    int framing_shift = 0;
    std::vector<TwistRow> rows;
    std::vector<std::pair<long, std::string>> skipped;
    // First p from which every computed width is below one.
    std::optional<long> below_one_from;
};

TwistSeries twist_series(const IdealTriangulation& tri, const std::vector<long>& p_values);

} // namespace cuspkit
