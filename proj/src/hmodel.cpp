#include "cuspkit/hmodel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace cuspkit {

namespace {

constexpr double kDetFloor = 1e-14;

bool passes_through(const GeodesicPlane& p, cplx z, double tol) {
    if (p.is_vertical()) {
        cplx n = cplx(0, 1) * p.direction;
        return std::abs(std::real(std::conj(n) * (z - p.base))) < tol;
    }
    return std::abs(std::abs(z - p.center) - p.radius) < tol * std::max(1.0, p.radius);
}

cplx unit(cplx v) { return v / std::abs(v); }

} // namespace

void Tolerance::validate() const {
    if (!(geometric > 0 && solver > 0 && tangency > 0))
        throw std::invalid_argument("tolerances must be positive");
    if (!(tangency > geometric))
        throw std::invalid_argument("tangency tolerance must exceed geometric tolerance");
}

Tolerance Tolerance::from_env() {
    Tolerance t;
    if (const char* s = std::getenv("CUSPKIT_TOL")) {
        char* end = nullptr;
        double v = std::strtod(s, &end);
        if (end == s || *end != '\0' || !(v > 0))
            throw std::invalid_argument("CUSPKIT_TOL must be a positive number");
        t.geometric = v;
        if (t.tangency <= v) t.tangency = 100.0 * v;
    }
    t.validate();
    return t;
}

const Tolerance& default_tolerance() {
    static const Tolerance t = Tolerance::from_env();
    return t;
}

cplx BoundaryPoint::value() const {
    if (inf_) throw GeometryError("boundary point is infinity");
    return z_;
}

bool same_point(const BoundaryPoint& p, const BoundaryPoint& q, double tol) {
    if (p.is_infinite() || q.is_infinite()) return p.is_infinite() && q.is_infinite();
    return std::abs(p.value() - q.value()) < tol;
}

MoebiusMap::MoebiusMap(cplx a_, cplx b_, cplx c_, cplx d_) : a(a_), b(b_), c(c_), d(d_) {
    cplx det = a * d - b * c;
    if (std::abs(det) <= kDetFloor) throw GeometryError("degenerate Mobius map (determinant ~ 0)");
    cplx s = std::sqrt(det);
    a /= s;
    b /= s;
    c /= s;
    d /= s;
}

MoebiusMap MoebiusMap::dilation(cplx s) {
    cplx r = std::sqrt(s);
    return {r, 0.0, 0.0, 1.0 / r};
}

MoebiusMap MoebiusMap::operator*(const MoebiusMap& o) const {
    MoebiusMap r;
    r.a = a * o.a + b * o.c;
    r.b = a * o.b + b * o.d;
    r.c = c * o.a + d * o.c;
    r.d = c * o.b + d * o.d;
    return r;
}

double MoebiusMap::distance_to_identity() const {
    auto dist = [&](double s) {
        return std::max({std::abs(a - s), std::abs(b), std::abs(c), std::abs(d - s)});
    };
    return std::min(dist(1.0), dist(-1.0));
}

double MoebiusMap::norm() const {
    return std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d));
}

Horoball::Horoball(BoundaryPoint c, double s) : center(c), size(s) {
    if (!(s > 0)) throw GeometryError("horoball size must be positive");
}

GeodesicPlane GeodesicPlane::vertical(cplx base, cplx direction) {
    if (std::abs(direction) == 0) throw GeometryError("vertical plane needs a nonzero direction");
    GeodesicPlane p;
    p.kind = Kind::vertical;
    cplx d = unit(direction);
    // canonical sign: direction in the half-plane Re > 0, or +i
    if (d.real() < -1e-15 || (std::abs(d.real()) <= 1e-15 && d.imag() < 0)) d = -d;
    p.direction = d;
    // canonical base: foot of the perpendicular from the origin
    p.base = base - d * std::real(std::conj(d) * base);
    return p;
}

GeodesicPlane GeodesicPlane::hemisphere(cplx center, double radius) {
    if (!(radius > 0)) throw GeometryError("hemisphere radius must be positive");
    GeodesicPlane p;
    p.kind = Kind::hemisphere;
    p.center = center;
    p.radius = radius;
    return p;
}

double GeodesicPlane::offset() const {
    return std::real(std::conj(cplx(0, 1) * direction) * base);
}

cplx apply_finite(const MoebiusMap& m, cplx z) { return (m.a * z + m.b) / (m.c * z + m.d); }

BoundaryPoint apply_boundary(const MoebiusMap& m, const BoundaryPoint& p) {
    if (p.is_infinite()) {
        if (m.c == cplx(0.0)) return BoundaryPoint::infinity();
        return BoundaryPoint(m.a / m.c);
    }
    cplx z = p.value();
    cplx den = m.c * z + m.d;
    if (den == cplx(0.0)) return BoundaryPoint::infinity();
    return BoundaryPoint((m.a * z + m.b) / den);
}

Horoball apply_horoball(const MoebiusMap& m, const Horoball& b) {
    if (b.center.is_infinite()) {
        double h = b.size;
        if (m.c == cplx(0.0)) return Horoball(BoundaryPoint::infinity(), h * std::norm(m.a));
        return Horoball(BoundaryPoint(m.a / m.c), 1.0 / (h * std::norm(m.c)));
    }
    cplx q = b.center.value();
    cplx den = m.c * q + m.d;
    if (den == cplx(0.0)) return Horoball(BoundaryPoint::infinity(), 1.0 / (b.size * std::norm(m.c)));
    return Horoball(BoundaryPoint((m.a * q + m.b) / den), b.size / std::norm(den));
}

Point3 apply_point(const MoebiusMap& m, const Point3& p) {
    // Quaternion action: (a P + b)(c P + d)^{-1}, with P = z + t j.
    cplx cz = m.c * p.z + m.d;
    double den = std::norm(cz) + std::norm(m.c) * p.t * p.t;
    cplx num = (m.a * p.z + m.b) * std::conj(cz) + m.a * std::conj(m.c) * p.t * p.t;
    return {num / den, p.t / den};
}

GeodesicPlane apply_plane(const MoebiusMap& m, const GeodesicPlane& p) {
    if (m.c == cplx(0.0)) {
        // affine: w = (a z + b) / d = a^2 z + a b
        cplx k = m.a / m.d;
        cplx s = m.b / m.d;
        if (p.is_vertical()) return GeodesicPlane::vertical(k * p.base + s, k * p.direction);
        return GeodesicPlane::hemisphere(k * p.center + s, p.radius * std::abs(k));
    }
    cplx pole = -m.d / m.c;
    double scale = std::max(1.0, std::abs(pole));
    auto image_line = [&] {
        cplx z1, z2;
        if (p.is_vertical()) {
            double L = 1.0 + std::abs(pole - p.base);
            z1 = pole + L * p.direction;
            z2 = pole - L * p.direction;
        } else {
            cplx u = (pole - p.center) / p.radius;
            z1 = p.center - p.radius * u;
            z2 = p.center + p.radius * u * cplx(0, 1);
        }
        cplx w1 = apply_finite(m, z1), w2 = apply_finite(m, z2);
        return GeodesicPlane::vertical(w1, w2 - w1);
    };
    if (passes_through(p, pole, 1e-12 * scale)) {
        // the image is a line through the images of two other points of the circle
        cplx z1, z2;
        if (p.is_vertical()) {
            double L = 1.0 + std::abs(pole - p.base);
            z1 = pole + L * p.direction;
            z2 = pole - L * p.direction;
        } else {
            cplx u = (pole - p.center) / p.radius;
            z1 = p.center - p.radius * u;
            z2 = p.center + p.radius * u * cplx(0, 1);
        }
        cplx w1 = apply_finite(m, z1), w2 = apply_finite(m, z2);
        return GeodesicPlane::vertical(w1, w2 - w1);
    }
    if (p.is_vertical()) {
        // image circle passes through m(inf) = a/c; fit through three images
        cplx w0 = m.a / m.c;
        cplx w1 = apply_finite(m, p.base + p.direction);
        cplx w2 = apply_finite(m, p.base - p.direction);
        // circumcenter of w0, w1, w2
        cplx b1 = w1 - w0, b2 = w2 - w0;
        double D = 2.0 * (b1.real() * b2.imag() - b1.imag() * b2.real());
        double n1 = std::norm(b1), n2 = std::norm(b2);
        cplx cc(b2.imag() * n1 - b1.imag() * n2, b1.real() * n2 - b2.real() * n1);
        if (!(std::abs(D) > 1e-300) || !std::isfinite(std::abs(cc / D))) return image_line();
        cc /= D;
        return GeodesicPlane::hemisphere(w0 + cc, std::abs(cc));
    }
    // hemisphere avoiding the pole: the reflection of the pole in the circle maps
    // to the center of the image circle
    cplx u = pole - p.center;
    cplx center = std::abs(u) == 0.0 ? m.a / m.c : apply_finite(m, p.center + p.radius * p.radius / std::conj(u));
    cplx toward = std::abs(u) == 0.0 ? cplx(1.0) : u / std::abs(u);
    double radius = std::abs(apply_finite(m, p.center + p.radius * toward) - center);
    if (!std::isfinite(radius) || !std::isfinite(std::abs(center))) return image_line();
    if (!(radius > 0)) throw GeometryError("degenerate circle image");
    return GeodesicPlane::hemisphere(center, radius);
}

double horoball_distance(const Horoball& b1, const Horoball& b2) {
    bool i1 = b1.center.is_infinite(), i2 = b2.center.is_infinite();
    if (i1 && i2) throw GeometryError("nested horoballs");
    if (i1) return std::log(b1.size / b2.size);
    if (i2) return std::log(b2.size / b1.size);
    double sep = std::abs(b1.center.value() - b2.center.value());
    if (sep == 0.0) throw GeometryError("nested horoballs");
    return 2.0 * std::log(sep / std::sqrt(b1.size * b2.size));
}

bool on_horosphere(const Horoball& b, const Point3& x, double tol) {
    if (b.center.is_infinite()) return std::abs(x.t - b.size) < tol * std::max(1.0, b.size);
    double r = b.size / 2.0;
    double dist = std::hypot(std::abs(x.z - b.center.value()), x.t - r);
    return std::abs(dist - r) < tol * std::max(1.0, r);
}

double horosphere_arc_length(const Horoball& b, const Point3& x, const Point3& y, double tol) {
    if (!on_horosphere(b, x, tol) || !on_horosphere(b, y, tol))
        throw GeometryError("point is not on the horosphere");
    if (b.center.is_infinite()) return std::abs(x.z - y.z) / b.size;
    // invert about the center; the ball becomes the region above height 1/diameter
    cplx q = b.center.value();
    auto inv = [&](const Point3& p) {
        cplx u = p.z - q;
        return std::conj(u) / (std::norm(u) + p.t * p.t);
    };
    return b.size * std::abs(inv(x) - inv(y));
}

PlaneBallRelation plane_ball_relation(const GeodesicPlane& p, const Horoball& b, double tol) {
    PlaneBallRelation out;
    if (b.center.is_infinite()) {
        // every geodesic plane reaches infinity or rises to its radius
        double h = b.size;
        if (p.is_vertical()) {
            out.kind = PlaneBallRelation::Kind::crossing;
            out.top_height = std::numeric_limits<double>::infinity();
            out.above_equator = true;
            out.witness = {p.base, h};
            return out;
        }
        double r = p.radius;
        out.witness = {p.center, r};
        out.top_height = r;
        if (std::abs(r - h) < tol * std::max(1.0, h)) out.kind = PlaneBallRelation::Kind::tangent;
        else if (r > h) out.kind = PlaneBallRelation::Kind::crossing;
        out.above_equator = r >= h;
        return out;
    }
    cplx q = b.center.value();
    double R = b.size / 2.0;
    if (p.is_vertical()) {
        cplx n = cplx(0, 1) * p.direction;
        double s = std::real(std::conj(n) * (q - p.base));
        double delta = std::abs(s);
        cplx foot = q - n * s;
        if (std::abs(delta - R) < tol * std::max(1.0, R)) {
            out.kind = PlaneBallRelation::Kind::tangent;
            out.witness = {foot, R};
            out.top_height = R;
            out.above_equator = true;
        } else if (delta < R) {
            double rho = std::sqrt(R * R - delta * delta);
            out.kind = PlaneBallRelation::Kind::crossing;
            out.witness = {foot, R + rho};
            out.top_height = R + rho;
            out.above_equator = true;
        }
        return out;
    }
    // sphere (c, 0; r) against sphere (q, R; R)
    double r = p.radius;
    cplx dc = q - p.center;
    double L = std::hypot(std::abs(dc), R);
    double scale = std::max({1.0, r, R});
    if (std::abs(L - (r + R)) < tol * scale || std::abs(L - std::abs(r - R)) < tol * scale) {
        out.kind = PlaneBallRelation::Kind::tangent;
        double s = (std::abs(L - (r + R)) < tol * scale) ? r / L : (r > R ? r / L : -r / L);
        out.witness = {p.center + dc * s, R * s};
        out.top_height = out.witness.t;
        out.above_equator = out.top_height >= R - tol;
        return out;
    }
    if (L >= r + R || L <= std::abs(r - R)) return out;
    double a1 = (L * L + r * r - R * R) / (2.0 * L);
    double rho = std::sqrt(std::max(0.0, r * r - a1 * a1));
    double ez = R / L;
    cplx eh = dc / L;
    cplx Oz = p.center + a1 * eh;
    double Ot = a1 * ez;
    double horiz = std::sqrt(std::max(0.0, 1.0 - ez * ez));
    Point3 top;
    if (horiz < 1e-15) {
        top = {Oz + rho, Ot};
    } else {
        // unit vector perpendicular to e with the largest vertical component
        cplx uh = -ez * eh / horiz;
        double ut = (1.0 - ez * ez) / horiz;
        top = {Oz + rho * uh, Ot + rho * ut};
    }
    out.kind = PlaneBallRelation::Kind::crossing;
    out.witness = top;
    out.top_height = top.t;
    out.above_equator = top.t > R;
    return out;
}

PlanePairRelation plane_pair_relation(const GeodesicPlane& p, const GeodesicPlane& q, double tol,
                                      double tangency_tol) {
    PlanePairRelation out;
    if (p.is_vertical() && q.is_vertical()) {
        double cross = std::imag(std::conj(p.direction) * q.direction);
        if (std::abs(cross) > tol) {
            out.kind = PlanePairKind::crossing;
            return out;
        }
        cplx n = cplx(0, 1) * p.direction;
        double sep = std::abs(std::real(std::conj(n) * (q.base - p.base)));
        out.kind = sep < tol ? PlanePairKind::equal : PlanePairKind::tangent;
        if (out.kind == PlanePairKind::tangent) out.touch = BoundaryPoint::infinity();
        return out;
    }
    if (p.is_vertical() != q.is_vertical()) {
        const GeodesicPlane& v = p.is_vertical() ? p : q;
        const GeodesicPlane& h = p.is_vertical() ? q : p;
        cplx n = cplx(0, 1) * v.direction;
        double s = std::real(std::conj(n) * (h.center - v.base));
        double gap = std::abs(s) - h.radius;
        double band = tangency_tol * std::max(1.0, h.radius);
        if (std::abs(gap) < band) {
            out.kind = PlanePairKind::tangent;
            out.touch = BoundaryPoint(h.center - n * s);
        } else {
            out.kind = gap > 0 ? PlanePairKind::disjoint : PlanePairKind::crossing;
        }
        return out;
    }
    double d = std::abs(p.center - q.center);
    double r1 = p.radius, r2 = q.radius;
    double band = tangency_tol * std::max({1.0, r1, r2});
    if (d < tol * std::max(1.0, r1) && std::abs(r1 - r2) < tol * std::max(1.0, r1)) {
        out.kind = PlanePairKind::equal;
        return out;
    }
    if (std::abs(d - (r1 + r2)) < band) {
        out.kind = PlanePairKind::tangent;
        out.touch = BoundaryPoint(p.center + (q.center - p.center) * (r1 / d));
        return out;
    }
    if (d > 0 && std::abs(d - std::abs(r1 - r2)) < band) {
        out.kind = PlanePairKind::tangent;
        cplx u = (q.center - p.center) / d;
        out.touch = BoundaryPoint(r1 > r2 ? p.center + u * r1 : p.center - u * r1);
        return out;
    }
    out.kind = (d > r1 + r2 || d < std::abs(r1 - r2)) ? PlanePairKind::disjoint : PlanePairKind::crossing;
    return out;
}

MoebiusMap cross_ratio_map(const BoundaryPoint& p0, const BoundaryPoint& p1, const BoundaryPoint& p2) {
    if (p0.is_infinite()) {
        cplx z1 = p1.value(), z2 = p2.value();
        return {0.0, z2 - z1, 1.0, -z1};
    }
    if (p1.is_infinite()) {
        cplx z0 = p0.value(), z2 = p2.value();
        return {1.0, -z0, 0.0, z2 - z0};
    }
    if (p2.is_infinite()) {
        cplx z0 = p0.value(), z1 = p1.value();
        return {1.0, -z0, 1.0, -z1};
    }
    cplx z0 = p0.value(), z1 = p1.value(), z2 = p2.value();
    return {z2 - z1, -z0 * (z2 - z1), z2 - z0, -z1 * (z2 - z0)};
}

MoebiusMap map_triple(const BoundaryPoint& p0, const BoundaryPoint& p1, const BoundaryPoint& p2,
                      const BoundaryPoint& q0, const BoundaryPoint& q1, const BoundaryPoint& q2) {
    return cross_ratio_map(q0, q1, q2).inverse() * cross_ratio_map(p0, p1, p2);
}

} // namespace cuspkit
