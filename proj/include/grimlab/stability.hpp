#pragma once

#include <functional>
#include <vector>

#include "grimlab/catalog.hpp"
#include "grimlab/hypersurface.hpp"

namespace grimlab {

// Drift Laplacian of a scalar field on the grim arc-length chart:
// the metric is Euclidean there and f(r) = ln sech r, so
// Delta_f phi = Delta phi + tanh(r) d_r phi (4th-order central stencils).
double grim_drift_laplacian(const std::function<double(double, double)>& phi, double r,
                            double y, double step = 0.01);

// Delta_f H + |A|^2 H at p, with H sampled through curvature_frame over the
// chart and Delta_f taken in weighted-divergence form. Bowl surfaces use the
// rotationally symmetric radial reduction.
double jacobi_residual(const ParamSurface& surface, const ParamPoint& p,
                       const AmbientVector& w, double step = 0.005);

// Delta_f |A| + |A|^3 at p; nonnegative where |A| > 0 on a translator.
// Throws VanishingCurvature when |A| <= tol_zero at p.
double simons_gap(const ParamSurface& surface, const ParamPoint& p, const AmbientVector& w,
                  double step = 0.005, double tol_zero = 1e-8);

enum class RatioVerdict { grim_like, non_constant_ratio, mean_curvature_vanishes };

const char* ratio_verdict_name(RatioVerdict verdict);

struct RatioReport {
    RatioVerdict verdict = RatioVerdict::mean_curvature_vanishes;
    double h_min = 0.0;      // on the mean-convex orientation
    double h_max = 0.0;
    double ratio_min = 0.0;  // |A|^2 / H^2 extremes (valid unless H vanishes)
    double ratio_max = 0.0;
    double spread = 0.0;
};

// GrimLike iff H > 0 on the grid and the spread of |A|^2 H^{-2} is <= tol.
RatioReport ratio_classifier(const ParamSurface& surface,
                             const std::vector<ParamPoint>& grid, const AmbientVector& w,
                             double tol);

// Per-point scalar fields over a parameter grid.
struct FieldSample {
    std::vector<ParamPoint> points;
    std::vector<double> H;
    std::vector<double> absA;
    std::vector<double> ratio;   // NaN where H is below tol_zero
    std::vector<double> jacobi;
    std::vector<double> simons;  // NaN where |A| is below tol_zero
};

FieldSample sample_fields(const ParamSurface& surface, const std::vector<ParamPoint>& grid,
                          const AmbientVector& w, double step = 0.005);

// Discretized Dirichlet problem for -(Delta_f + |A|^2) on a rectangle of the
// grim arc-length chart: 2nd-order central differences on the e^{-f/2}
// conjugated (symmetric) form, lambda1 by shifted inverse power iteration
// with a sparse direct factorization.
struct EigenSolve {
    double r1 = 0.0, r2 = 0.0, y1 = 0.0, y2 = 0.0;
    int nr = 0, ny = 0;
    double lambda1 = 0.0;
    double residual_norm = 0.0; // ||M v - lambda v|| / ||v||
    int iterations = 0;
    bool eigvec_positive = false; // no interior sign change after normalization
    std::vector<std::pair<int, double>> refinement; // (grid, lambda1) history
};

EigenSolve dirichlet_lambda1(double r1, double r2, double y1, double y2, int nr, int ny);

// Runs dirichlet_lambda1 on square grids of the given sizes (ascending) and
// returns the finest solve carrying the full refinement history.
EigenSolve dirichlet_lambda1_levels(double r1, double r2, double y1, double y2,
                                    const std::vector<int>& grids);

} // namespace grimlab
