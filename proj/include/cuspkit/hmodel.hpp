#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace cuspkit {

using cplx = std::complex<double>;

class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Tolerance {
    double geometric = 1e-9;
    double solver = 1e-12;
    double tangency = 1e-7;

    void validate() const;
    // Defaults, with the geometric tolerance overridden by CUSPKIT_TOL when set.
    static Tolerance from_env();
};

const Tolerance& default_tolerance();

class BoundaryPoint {
public:
    BoundaryPoint() = default;
    BoundaryPoint(cplx z) : z_(z) {}
    static BoundaryPoint infinity() {
        BoundaryPoint p;
        p.inf_ = true;
        return p;
    }

    bool is_infinite() const { return inf_; }
    cplx value() const;

private:
    bool inf_ = false;
    cplx z_{0.0, 0.0};
};

bool same_point(const BoundaryPoint& p, const BoundaryPoint& q, double tol);

// Element of PSL(2,C), stored with determinant one.
struct MoebiusMap {
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

    MoebiusMap() = default;
    MoebiusMap(cplx a_, cplx b_, cplx c_, cplx d_);

    static MoebiusMap identity() { return {}; }
    static MoebiusMap translation(cplx v) { return {1.0, v, 0.0, 1.0}; }
    // w -> s*w for complex s != 0
    static MoebiusMap dilation(cplx s);

    MoebiusMap operator*(const MoebiusMap& o) const;
    MoebiusMap inverse() const { return {d, -b, -c, a}; }
    cplx trace() const { return a + d; }
    cplx det() const { return a * d - b * c; }
    // Distance to +-I in the max-entry norm.
    double distance_to_identity() const;
    double norm() const;
};

// Euclidean center and size. size is the diameter for a finite center and the
// height of the bounding horizontal plane for the center at infinity.
struct Horoball {
    BoundaryPoint center;
    double size = 1.0;

    Horoball() = default;
    Horoball(BoundaryPoint c, double s);
};

struct GeodesicPlane {
    enum class Kind { vertical, hemisphere };
    Kind kind = Kind::hemisphere;
    cplx base{0.0};      // vertical: a point on the boundary line
    cplx direction{1.0}; // vertical: unit direction of the line
    cplx center{0.0};    // hemisphere
    double radius = 1.0; // hemisphere

    static GeodesicPlane vertical(cplx base, cplx direction);
    static GeodesicPlane hemisphere(cplx center, double radius);
    bool is_vertical() const { return kind == Kind::vertical; }
    // Signed offset of the line from the origin along i*direction.
    double offset() const;
};

struct Point3 {
    cplx z;
    double t;
};

BoundaryPoint apply_boundary(const MoebiusMap& m, const BoundaryPoint& p);
cplx apply_finite(const MoebiusMap& m, cplx z);
Horoball apply_horoball(const MoebiusMap& m, const Horoball& b);
GeodesicPlane apply_plane(const MoebiusMap& m, const GeodesicPlane& p);
Point3 apply_point(const MoebiusMap& m, const Point3& p);

// Signed hyperbolic distance; negative when the balls overlap.
double horoball_distance(const Horoball& b1, const Horoball& b2);

bool on_horosphere(const Horoball& b, const Point3& x, double tol);
double horosphere_arc_length(const Horoball& b, const Point3& x, const Point3& y,
                             double tol = default_tolerance().geometric);

struct PlaneBallRelation {
    enum class Kind { disjoint, tangent, crossing };
    Kind kind = Kind::disjoint;
    Point3 witness{};   // tangency point, or topmost point of the intersection circle
    double top_height = 0.0;
    bool above_equator = false;
};

PlaneBallRelation plane_ball_relation(const GeodesicPlane& p, const Horoball& b,
                                      double tol = default_tolerance().tangency);

// Relation between the boundary circles/lines of two planes.
enum class PlanePairKind { equal, disjoint, tangent, crossing };
struct PlanePairRelation {
    PlanePairKind kind = PlanePairKind::disjoint;
    std::optional<BoundaryPoint> touch; // tangency point when tangent
};
PlanePairRelation plane_pair_relation(const GeodesicPlane& p, const GeodesicPlane& q,
                                      double tol, double tangency_tol);

// Mobius map sending p0 -> 0, p1 -> infinity, p2 -> 1.
MoebiusMap cross_ratio_map(const BoundaryPoint& p0, const BoundaryPoint& p1,
                           const BoundaryPoint& p2);
// Mobius map sending (p0, p1, p2) to (q0, q1, q2).
MoebiusMap map_triple(const BoundaryPoint& p0, const BoundaryPoint& p1, const BoundaryPoint& p2,
                      const BoundaryPoint& q0, const BoundaryPoint& q1, const BoundaryPoint& q2);

} // namespace cuspkit
