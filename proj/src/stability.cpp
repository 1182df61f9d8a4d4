#include "grimlab/stability.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace grimlab {

namespace {

// 4th-order central first and second derivative of a 1-D sample
// phi(-2h), phi(-h), phi(0), phi(h), phi(2h).
double d1_stencil(const double phi[5], double h) {
    return (-phi[4] + 8.0 * phi[3] - 8.0 * phi[1] + phi[0]) / (12.0 * h);
}

double d2_stencil(const double phi[5], double h) {
    return (-phi[4] + 16.0 * phi[3] - 30.0 * phi[2] + 16.0 * phi[1] - phi[0]) /
           (12.0 * h * h);
}

const BowlSurface* as_bowl(const ParamSurface& surface) {
    return dynamic_cast<const BowlSurface*>(&surface);
}

// Radial reduction of Delta_f on the bowl graph chart: for phi = phi(rho),
//   Delta_f phi = [phi'' + phi' ((n-1)/rho + u' - u' u'' / G)] / G,  G = 1 + u'^2.
double bowl_drift_laplacian_radial(const BowlProfile& prof,
                                   const std::function<double(double)>& phi, double rho,
                                   double step) {
    if (!(rho - 2.0 * step > prof.rho0) || !(rho + 2.0 * step <= prof.rho_max))
        throw DomainError("radial stencil leaves the solved bowl profile");
    double samples[5];
    for (int k = -2; k <= 2; ++k)
        samples[k + 2] = phi(rho + k * step);
    const double p1 = d1_stencil(samples, step);
    const double p2 = d2_stencil(samples, step);
    const double v = prof.du_at(rho);
    const double upp = prof.ddu_at(rho);
    const double G = 1.0 + v * v;
    return (p2 + p1 * ((prof.n - 1) / rho + v - v * upp / G)) / G;
}

struct BowlPointCurvature {
    double H;
    double absA;
    double normA2;
};

BowlPointCurvature bowl_curvature(const BowlProfile& prof, double rho) {
    const double v = prof.du_at(rho);
    const double upp = prof.ddu_at(rho);
    const double W = std::sqrt(1.0 + v * v);
    const double k_radial = upp / (W * W * W);
    const double k_sphere = v / (rho * W);
    const double H = k_radial + (prof.n - 1) * k_sphere;
    const double normA2 = k_radial * k_radial + (prof.n - 1) * k_sphere * k_sphere;
    return {H, std::sqrt(normA2), normA2};
}

// Default bowl stencil step: wide enough that interpolation-scale noise in
// u'' stays harmless under the second difference; shrunk near the profile
// boundaries.
double bowl_step(const BowlProfile& prof, double rho) {
    const double step = std::min({0.05, 0.4 * (rho - prof.rho0), 0.4 * (prof.rho_max - rho)});
    if (!(step > 1e-4))
        throw DomainError("radial stencil leaves the solved bowl profile");
    return step;
}

double bowl_jacobi_residual(const BowlSurface& bowl, double rho) {
    const BowlProfile& prof = bowl.profile();
    const BowlPointCurvature c = bowl_curvature(prof, rho);
    const double lap = bowl_drift_laplacian_radial(
        prof, [&](double s) { return bowl_curvature(prof, s).H; }, rho,
        bowl_step(prof, rho));
    return lap + c.normA2 * c.H;
}

double bowl_simons_gap(const BowlSurface& bowl, double rho) {
    const BowlProfile& prof = bowl.profile();
    const BowlPointCurvature c = bowl_curvature(prof, rho);
    const double lap = bowl_drift_laplacian_radial(
        prof, [&](double s) { return bowl_curvature(prof, s).absA; }, rho,
        bowl_step(prof, rho));
    return lap + c.normA2 * c.absA;
}

// Weighted-divergence form over a generic chart:
//   Delta_f phi = e^{f} / sqrt(g) * d_i ( sqrt(g) e^{-f} g^{ij} d_j phi ),
// with every field sampled through curvature_frame and both derivative
// levels taken by 4th-order central stencils.
double chart_drift_laplacian(const ParamSurface& surface, const ParamPoint& p,
                             const AmbientVector& w,
                             const std::function<double(const CurvatureFrame&)>& field,
                             double step) {
    const int n = surface.dim();

    auto grad_at = [&](const ParamPoint& q) {
        Eigen::VectorXd grad(n);
        for (int j = 0; j < n; ++j) {
            double samples[5];
            for (int k = -2; k <= 2; ++k) {
                ParamPoint qq = q;
                qq(j) += k * step;
                samples[k + 2] = field(curvature_frame(surface, qq, w));
            }
            grad(j) = d1_stencil(samples, step);
        }
        return grad;
    };

    auto flux_at = [&](const ParamPoint& q) {
        const CurvatureFrame frame = curvature_frame(surface, q, w);
        const Eigen::VectorXd grad = grad_at(q);
        return Eigen::VectorXd(frame.sqrt_det_g() * std::exp(-frame.f) *
                               (frame.g_inv * grad));
    };

    double divergence = 0.0;
    for (int i = 0; i < n; ++i) {
        double flux[5];
        flux[2] = 0.0; // unused by the first-derivative stencil
        for (int k = -2; k <= 2; ++k) {
            if (k == 0)
                continue;
            ParamPoint q = p;
            q(i) += k * step;
            flux[k + 2] = flux_at(q)(i);
        }
        divergence += d1_stencil(flux, step);
    }

    const CurvatureFrame center = curvature_frame(surface, p, w);
    return std::exp(center.f) / center.sqrt_det_g() * divergence;
}

} // namespace

double grim_drift_laplacian(const std::function<double(double, double)>& phi, double r,
                            double y, double step) {
    if (!(step > 0.0))
        throw InputError("stencil step must be positive");
    double fr[5], fy[5];
    for (int k = -2; k <= 2; ++k) {
        fr[k + 2] = phi(r + k * step, y);
        fy[k + 2] = phi(r, y + k * step);
    }
    const double lap = d2_stencil(fr, step) + d2_stencil(fy, step);
    return lap + std::tanh(r) * d1_stencil(fr, step);
}

double jacobi_residual(const ParamSurface& surface, const ParamPoint& p,
                       const AmbientVector& w, double step) {
    if (const BowlSurface* bowl = as_bowl(surface))
        return bowl_jacobi_residual(*bowl, p.norm());
    const CurvatureFrame center = curvature_frame(surface, p, w);
    const double lap = chart_drift_laplacian(
        surface, p, w, [](const CurvatureFrame& f) { return f.H; }, step);
    return lap + center.normA2 * center.H;
}

double simons_gap(const ParamSurface& surface, const ParamPoint& p, const AmbientVector& w,
                  double step, double tol_zero) {
    if (const BowlSurface* bowl = as_bowl(surface)) {
        const double rho = p.norm();
        const BowlPointCurvature c = bowl_curvature(bowl->profile(), rho);
        if (c.absA <= tol_zero)
            throw VanishingCurvature("|A| vanishes at the requested point");
        return bowl_simons_gap(*bowl, rho);
    }
    const CurvatureFrame center = curvature_frame(surface, p, w);
    const double absA = std::sqrt(center.normA2);
    if (absA <= tol_zero)
        throw VanishingCurvature("|A| vanishes at the requested point");
    const double lap = chart_drift_laplacian(
        surface, p, w, [](const CurvatureFrame& f) { return std::sqrt(f.normA2); }, step);
    return lap + center.normA2 * absA;
}

const char* ratio_verdict_name(RatioVerdict verdict) {
    switch (verdict) {
    case RatioVerdict::grim_like:
        return "GrimLike";
    case RatioVerdict::non_constant_ratio:
        return "NonConstantRatio";
    case RatioVerdict::mean_curvature_vanishes:
        return "MeanCurvatureVanishes";
    }
    return "Unknown";
}

RatioReport ratio_classifier(const ParamSurface& surface,
                             const std::vector<ParamPoint>& grid, const AmbientVector& w,
                             double tol) {
    if (grid.empty())
        throw InputError("ratio classifier needs a nonempty grid");

    std::vector<double> h(grid.size()), a2(grid.size());
    double max_absA = 0.0, h_sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const CurvatureFrame frame = curvature_frame(surface, grid[i], w);
        h[i] = frame.H;
        a2[i] = frame.normA2;
        max_absA = std::max(max_absA, std::sqrt(frame.normA2));
        h_sum += frame.H;
    }
    // Classify on the mean-convex orientation.
    if (h_sum < 0.0)
        for (double& v : h)
            v = -v;

    RatioReport report;
    const double tol_zero = 1e-8 * max_absA;
    report.h_min = *std::min_element(h.begin(), h.end());
    report.h_max = *std::max_element(h.begin(), h.end());
    if (report.h_min <= tol_zero) {
        report.verdict = RatioVerdict::mean_curvature_vanishes;
        return report;
    }

    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double ratio = a2[i] / (h[i] * h[i]);
        rmin = std::min(rmin, ratio);
        rmax = std::max(rmax, ratio);
    }
    report.ratio_min = rmin;
    report.ratio_max = rmax;
    report.spread = rmax - rmin;
    report.verdict =
        report.spread <= tol ? RatioVerdict::grim_like : RatioVerdict::non_constant_ratio;
    return report;
}

FieldSample sample_fields(const ParamSurface& surface, const std::vector<ParamPoint>& grid,
                          const AmbientVector& w, double step) {
    FieldSample sample;
    sample.points = grid;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    double max_absA = 0.0;
    for (const ParamPoint& p : grid) {
        const CurvatureFrame frame = curvature_frame(surface, p, w);
        sample.H.push_back(frame.H);
        sample.absA.push_back(std::sqrt(frame.normA2));
        max_absA = std::max(max_absA, sample.absA.back());
    }
    const double tol_zero = 1e-8 * max_absA;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double H = sample.H[i];
        const double absA = sample.absA[i];
        sample.ratio.push_back(std::abs(H) > tol_zero ? absA * absA / (H * H) : nan);
        sample.jacobi.push_back(jacobi_residual(surface, grid[i], w, step));
        sample.simons.push_back(absA > tol_zero ? simons_gap(surface, grid[i], w, step)
                                                : nan);
    }
    return sample;
}

// ---------------------------------------------------------------------------
// Dirichlet eigenvalue on the grim arc-length chart
// ---------------------------------------------------------------------------

namespace {

// Potential of the e^{-f/2}-conjugated operator, f(r) = -ln cosh r:
//   Delta_f + |A|^2  ~  Delta + (f''/2 - f'^2/4 + sech^2 r)
//                     = Delta + sech^2(r)/2 - tanh^2(r)/4.
double conjugated_potential(double r) {
    const double s = 1.0 / std::cosh(r);
    const double t = std::tanh(r);
    return 0.5 * s * s - 0.25 * t * t;
}

} // namespace

EigenSolve dirichlet_lambda1(double r1, double r2, double y1, double y2, int nr, int ny) {
    if (!(r2 > r1) || !(y2 > y1))
        throw InputError("rectangle is degenerate");
    if (nr < 16 || ny < 16)
        throw InputError("grid must be at least 16x16");

    const double hr = (r2 - r1) / (nr + 1);
    const double hy = (y2 - y1) / (ny + 1);
    const int m = nr * ny;
    auto index = [ny](int i, int j) { return i * ny + j; };

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(5) * m);
    const double dr = 1.0 / (hr * hr);
    const double dy = 1.0 / (hy * hy);
    for (int i = 0; i < nr; ++i) {
        const double r = r1 + (i + 1) * hr;
        for (int j = 0; j < ny; ++j) {
            const int row = index(i, j);
            triplets.emplace_back(row, row, 2.0 * dr + 2.0 * dy - conjugated_potential(r));
            if (i > 0)
                triplets.emplace_back(row, index(i - 1, j), -dr);
            if (i + 1 < nr)
                triplets.emplace_back(row, index(i + 1, j), -dr);
            if (j > 0)
                triplets.emplace_back(row, index(i, j - 1), -dy);
            if (j + 1 < ny)
                triplets.emplace_back(row, index(i, j + 1), -dy);
        }
    }
    Eigen::SparseMatrix<double> M(m, m);
    M.setFromTriplets(triplets.begin(), triplets.end());

    // Shift below the Gershgorin floor (potential is bounded by 1/2), so
    // M - sigma I is positive definite and inverse iteration converges to
    // the bottom of the spectrum.
    const double sigma = -1.0;
    Eigen::SparseMatrix<double> shifted = M;
    for (int k = 0; k < m; ++k)
        shifted.coeffRef(k, k) -= sigma;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    solver.compute(shifted);
    if (solver.info() != Eigen::Success)
        throw SolverError("factorization of the shifted operator failed");

    // First Dirichlet mode of the plain Laplacian as the starting vector.
    Eigen::VectorXd v(m);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < ny; ++j)
            v(index(i, j)) = std::sin(std::numbers::pi * (i + 1) / (nr + 1.0)) *
                             std::sin(std::numbers::pi * (j + 1) / (ny + 1.0));
    v.normalize();

    EigenSolve out;
    out.r1 = r1;
    out.r2 = r2;
    out.y1 = y1;
    out.y2 = y2;
    out.nr = nr;
    out.ny = ny;

    double lambda = v.dot(M * v);
    double residual = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (int iter = 1; iter <= 1000; ++iter) {
        Eigen::VectorXd x = solver.solve(v);
        x.normalize();
        const Eigen::VectorXd Mx = M * x;
        lambda = x.dot(Mx);
        residual = (Mx - lambda * x).norm();
        v = x;
        out.iterations = iter;
        if (residual <= 1e-9 * std::max(1.0, std::abs(lambda))) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw SolverError("inverse iteration did not converge");

    out.lambda1 = lambda;
    out.residual_norm = residual;
    if (v.sum() < 0.0)
        v = -v;
    out.eigvec_positive = v.minCoeff() >= -1e-10 * v.maxCoeff();
    return out;
}

EigenSolve dirichlet_lambda1_levels(double r1, double r2, double y1, double y2,
                                    const std::vector<int>& grids) {
    if (grids.empty())
        throw InputError("no grid levels given");
    EigenSolve finest;
    std::vector<std::pair<int, double>> history;
    for (int g : grids) {
        finest = dirichlet_lambda1(r1, r2, y1, y2, g, g);
        history.emplace_back(g, finest.lambda1);
    }
    finest.refinement = std::move(history);
    return finest;
}

} // namespace grimlab
