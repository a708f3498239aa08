#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cuspkit/hmodel.hpp"

namespace cuspkit {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, int field, const std::string& what);
    int line() const { return line_; }
    int field() const { return field_; }

private:
    int line_;
    int field_;
};

// Sum_i a_i Log z_i + b_i Log(1 - z_i) + m*pi*i
struct EquationRow {
    std::vector<int> a;
    std::vector<int> b;
    int m = 0;
};

// Face gluing data: face f (opposite vertex f) is glued to tet neighbor[f] by
// the vertex map v -> perm[f][v].
struct TetGluing {
    std::array<int, 4> neighbor{};
    std::array<std::array<int, 4>, 4> perm{};
    std::array<int, 4> cusp{};
};

struct Filling {
    int p = 0;
    int q = 0;
};

struct CuspData {
    EquationRow meridian;
    EquationRow longitude;
    int framing_shift = 0;
    std::optional<Filling> filling;
};

struct IdealTriangulation {
    std::string name;
    int n = 0;
    std::vector<EquationRow> edges;
    std::vector<CuspData> cusps;
    std::vector<TetGluing> gluing; // empty when the file carries no tet lines

    int cusp_count() const { return static_cast<int>(cusps.size()); }
    bool has_gluing() const { return !gluing.empty(); }
    bool is_filled(int k) const { return cusps.at(k).filling.has_value(); }
    std::vector<int> complete_cusps() const;
};

IdealTriangulation parse_triangulation(std::string_view text);
IdealTriangulation load_triangulation(const std::filesystem::path& path);
IdealTriangulation with_filling(IdealTriangulation tri, int cusp, int p, int q);
IdealTriangulation without_fillings(IdealTriangulation tri);

enum class RowTarget { edge, completeness, filling };

struct ActiveRow {
    EquationRow row;
    RowTarget target;
};

// Edge rows, then per cusp either (meridian, longitude) or the filling row.
std::vector<ActiveRow> active_rows(const IdealTriangulation& tri);

cplx row_value(const EquationRow& row, const std::vector<cplx>& z);
EquationRow combine(const EquationRow& r1, int c1, const EquationRow& r2, int c2);

struct ShapeVector {
    std::vector<cplx> z;
    double residual = 0.0;
    int iterations = 0;
    int restarts_used = 0;
    bool geometric = false;
};

struct SolveOptions {
    double tol = default_tolerance().solver;
    int max_iterations = 80;
    int restarts = 20;
    unsigned seed = 20240917u;
    std::optional<std::vector<cplx>> initial;
};

class SolveError : public std::runtime_error {
public:
    SolveError(const std::string& what, double best) : std::runtime_error(what), best_residual(best) {}
    double best_residual;
};

double max_residual(const IdealTriangulation& tri, const std::vector<cplx>& z);
ShapeVector solve_shapes(const IdealTriangulation& tri, const SolveOptions& opts = {});

// Lobachevsky function L(theta) = -int_0^theta log|2 sin u| du.
double lobachevsky(double theta);
double tetrahedron_volume(cplx z);
double volume(const ShapeVector& s);

// Cusp shape lambda/mu of a complete cusp, as the ratio of the derivatives of
// the longitude and meridian holonomies along the deformation space,
// oriented so that Im > 0.
cplx cusp_shape(const IdealTriangulation& tri, const ShapeVector& s, int cusp);

} // namespace cuspkit
