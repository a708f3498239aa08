#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>

#include "cuspkit/triangulation.hpp"

namespace cuspkit {

namespace {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

const cplx kPiI(0.0, std::numbers::pi);

cplx target_value(RowTarget t) { return t == RowTarget::completeness ? cplx(0.0) : 2.0 * kPiI; }

cplx row_value_log(const EquationRow& row, const CVec& w) {
    cplx s = static_cast<double>(row.m) * kPiI;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (row.a[i]) s += static_cast<double>(row.a[i]) * w[i];
        if (row.b[i]) s += static_cast<double>(row.b[i]) * std::log(1.0 - std::exp(w[i]));
    }
    return s;
}

CVec residual(const std::vector<ActiveRow>& rows, const CVec& w) {
    CVec F(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        F[static_cast<Eigen::Index>(r)] = row_value_log(rows[r].row, w) - target_value(rows[r].target);
    return F;
}

// d/dw of each row, w = Log z
CMat jacobian(const std::vector<ActiveRow>& rows, const CVec& w) {
    const Eigen::Index n = w.size();
    CMat J(static_cast<Eigen::Index>(rows.size()), n);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (Eigen::Index i = 0; i < n; ++i) {
            cplx z = std::exp(w[i]);
            J(static_cast<Eigen::Index>(r), i) =
                static_cast<double>(rows[r].row.a[i]) + static_cast<double>(rows[r].row.b[i]) * (-z / (1.0 - z));
        }
    }
    return J;
}

double inf_norm(const CVec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

struct NewtonResult {
    CVec w;
    double residual;
    int iterations;
};

NewtonResult newton(const std::vector<ActiveRow>& rows, CVec w, const SolveOptions& opts) {
    CVec F = residual(rows, w);
    double res = inf_norm(F);
    int it = 0;
    while (res >= opts.tol && it < opts.max_iterations) {
        ++it;
        CMat J = jacobian(rows, w);
        CVec step = J.completeOrthogonalDecomposition().solve(-F);
        if (!step.allFinite()) break;
        double lambda = 1.0;
        bool improved = false;
        for (int k = 0; k < 30; ++k) {
            CVec trial = w + lambda * step;
            CVec Ft = residual(rows, trial);
            double rt = inf_norm(Ft);
            if (std::isfinite(rt) && rt < res) {
                w = trial;
                F = Ft;
                res = rt;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) break;
    }
    return {w, res, it};
}

} // namespace

cplx row_value(const EquationRow& row, const std::vector<cplx>& z) {
    CVec w(static_cast<Eigen::Index>(z.size()));
    for (std::size_t i = 0; i < z.size(); ++i) w[static_cast<Eigen::Index>(i)] = std::log(z[i]);
    return row_value_log(row, w);
}

double max_residual(const IdealTriangulation& tri, const std::vector<cplx>& z) {
    auto rows = active_rows(tri);
    CVec w(static_cast<Eigen::Index>(z.size()));
    for (std::size_t i = 0; i < z.size(); ++i) w[static_cast<Eigen::Index>(i)] = std::log(z[i]);
    return inf_norm(residual(rows, w));
}

ShapeVector solve_shapes(const IdealTriangulation& tri, const SolveOptions& opts) {
    const auto rows = active_rows(tri);
    const Eigen::Index n = tri.n;
    std::mt19937 rng(opts.seed);
    std::uniform_real_distribution<double> rad(0.05, 3.0), ang(0.05, std::numbers::pi - 0.05);

    NewtonResult best{CVec(), std::numeric_limits<double>::infinity(), 0};
    const int attempts = 1 + opts.restarts;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        CVec w0(n);
        if (attempt == 0) {
            if (opts.initial) {
                if (static_cast<Eigen::Index>(opts.initial->size()) != n)
                    throw std::invalid_argument("initial shape vector has the wrong length");
                for (Eigen::Index i = 0; i < n; ++i) w0[i] = std::log((*opts.initial)[static_cast<std::size_t>(i)]);
            } else {
                w0.setConstant(cplx(0.0, std::numbers::pi / 3.0));
            }
        } else {
            for (Eigen::Index i = 0; i < n; ++i) w0[i] = std::log(std::polar(rad(rng), ang(rng)));
        }
        NewtonResult r = newton(rows, w0, opts);
        bool geometric = true;
        for (Eigen::Index i = 0; i < n; ++i) geometric = geometric && std::exp(r.w[i]).imag() > 0;
        if (r.residual < best.residual) best = r;
        if (r.residual < opts.tol && geometric) {
            best = r;
            ShapeVector s;
            for (Eigen::Index i = 0; i < n; ++i) s.z.push_back(std::exp(r.w[i]));
            s.residual = r.residual;
            s.iterations = r.iterations;
            s.restarts_used = attempt;
            s.geometric = true;
            return s;
        }
    }
    if (best.residual < opts.tol) {
        ShapeVector s;
        for (Eigen::Index i = 0; i < n; ++i) s.z.push_back(std::exp(best.w[i]));
        s.residual = best.residual;
        s.iterations = best.iterations;
        s.restarts_used = attempts - 1;
        s.geometric = false;
        return s;
    }
    throw SolveError("Newton iteration did not converge (best residual " + std::to_string(best.residual) + ")",
                     best.residual);
}

cplx cusp_shape(const IdealTriangulation& tri, const ShapeVector& s, int cusp) {
    if (cusp < 0 || cusp >= tri.cusp_count()) throw std::out_of_range("unknown cusp");
    if (tri.is_filled(cusp)) throw GeometryError("no cusp cross-section: cusp is filled");
    const Eigen::Index n = tri.n;
    CVec w(n);
    for (Eigen::Index i = 0; i < n; ++i) w[i] = std::log(s.z[static_cast<std::size_t>(i)]);

    std::vector<ActiveRow> rows;
    for (const auto& e : tri.edges) rows.push_back({e, RowTarget::edge});
    for (int k = 0; k < tri.cusp_count(); ++k) {
        const auto& c = tri.cusps[k];
        if (c.filling) rows.push_back({combine(c.meridian, c.filling->p, c.longitude, c.filling->q), RowTarget::filling});
        else rows.push_back({c.meridian, RowTarget::completeness});
    }
    CMat J = jacobian(rows, w);
    CVec rhs = CVec::Zero(J.rows());
    rhs[static_cast<Eigen::Index>(tri.edges.size()) + cusp] = 1.0;
    CVec v = J.completeOrthogonalDecomposition().solve(rhs);
    if ((J * v - rhs).cwiseAbs().maxCoeff() > 1e-8)
        throw GeometryError("deformation tangent is inconsistent; cusp shape undefined");
    std::vector<ActiveRow> lon{{tri.cusps[cusp].longitude, RowTarget::completeness}};
    CMat Jl = jacobian(lon, w);
    // conjugated to the orientation in which the development is built
    return std::conj((Jl * v)(0));
}

} // namespace cuspkit
