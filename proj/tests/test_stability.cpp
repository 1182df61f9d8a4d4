#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "grimlab/catalog.hpp"
#include "grimlab/stability.hpp"

using namespace grimlab;

namespace {

constexpr double kPi = std::numbers::pi;

AmbientVector axis(int n) {
    AmbientVector w = AmbientVector::Zero(n + 1);
    w(n) = 1.0;
    return w;
}

ParamPoint pt2(double a, double b) {
    ParamPoint p(2);
    p << a, b;
    return p;
}

std::vector<ParamPoint> grim_grid(double r_lo, double r_hi, int nr, int ny) {
    std::vector<ParamPoint> grid;
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < ny; ++j)
            grid.push_back(pt2(r_lo + (r_hi - r_lo) * i / (nr - 1.0),
                               -2.0 + 4.0 * j / (ny - 1.0)));
    return grid;
}

} // namespace

TEST_CASE("drift Laplacian on the grim arc-length chart") {
    // constants are f-harmonic
    CHECK(std::abs(grim_drift_laplacian([](double, double) { return 1.0; }, 0.3, 0.1)) <
          1e-12);
    // phi(r) = r: only the drift term survives
    CHECK(grim_drift_laplacian([](double r, double) { return r; }, 0.5, 0.0) ==
          doctest::Approx(std::tanh(0.5)).epsilon(1e-9));
    // H = sech r solves the stability equation: Delta_f H = -sech^3 r
    const double r = 0.7;
    const double lap =
        grim_drift_laplacian([](double s, double) { return 1.0 / std::cosh(s); }, r, 0.0);
    const double sech = 1.0 / std::cosh(r);
    CHECK(std::abs(lap + sech * sech * sech) < 1e-8);
}

TEST_CASE("Jacobi equation on the grim hyperplane, both charts") {
    const GrimSurface arc(2, GrimMode::arclength);
    const GrimSurface graph(2, GrimMode::graph);
    const AmbientVector w = axis(2);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ur(-2.5, 2.5), uy(-2.0, 2.0),
        ut(-1.2, 1.2);
    double worst_arc = 0.0, worst_graph = 0.0;
    for (int k = 0; k < 50; ++k) {
        worst_arc = std::max(worst_arc,
                             std::abs(jacobi_residual(arc, pt2(ur(rng), uy(rng)), w)));
        worst_graph = std::max(
            worst_graph, std::abs(jacobi_residual(graph, pt2(ut(rng), uy(rng)), w)));
    }
    CHECK(worst_arc < 1e-6);
    CHECK(worst_graph < 1e-6);
}

TEST_CASE("Jacobi equation on the bowl profile") {
    for (int n : {2, 3}) {
        const BowlSurface bowl(bowl_solve(n, 6.0));
        const AmbientVector w = axis(n);
        double worst = 0.0;
        for (int k = 0; k <= 48; ++k) {
            const double rho = 0.1 + (5.0 - 0.1) * k / 48.0;
            ParamPoint p = ParamPoint::Zero(n);
            p(0) = rho;
            worst = std::max(worst, std::abs(jacobi_residual(bowl, p, w)));
        }
        CAPTURE(n);
        CHECK(worst < 1e-4);
    }
}

TEST_CASE("vertical hyperplane: H vanishes identically, residual is zero") {
    const HyperplaneSurface plane = HyperplaneSurface::vertical(2);
    const AmbientVector w = axis(2);
    CHECK(std::abs(jacobi_residual(plane, pt2(0.4, -0.8), w)) < 1e-12);
    CHECK_THROWS_AS(simons_gap(plane, pt2(0.4, -0.8), w), VanishingCurvature);
}

TEST_CASE("Simons gap vanishes on the grim plane and matches the Jacobi residual") {
    const GrimSurface arc(2, GrimMode::arclength);
    const AmbientVector w = axis(2);
    for (double r : {-2.0, -0.9, 0.05, 0.8, 1.7}) {
        const ParamPoint p = pt2(r, 0.3);
        const double gap = simons_gap(arc, p, w);
        const double jac = jacobi_residual(arc, p, w);
        CHECK(std::abs(gap) < 1e-8);        // equality case |A| = H
        CHECK(std::abs(gap - jac) < 1e-10); // identical fields
    }
}

TEST_CASE("orientation flip leaves the Simons gap and the ratio unchanged") {
    const GrimSurface down(2, GrimMode::arclength, Orientation::negative);
    const GrimSurface up(2, GrimMode::arclength, Orientation::positive);
    const AmbientVector w = axis(2);
    const ParamPoint p = pt2(0.8, -0.2);
    CHECK(std::abs(simons_gap(down, p, w) - simons_gap(up, p, w)) < 1e-10);
}

TEST_CASE("stencil leaving the chart raises DomainError") {
    const GrimSurface graph(2, GrimMode::graph);
    const AmbientVector w = axis(2);
    CHECK_THROWS_AS(jacobi_residual(graph, pt2(kPi / 2.0 - 1e-3, 0.0), w), DomainError);
}

TEST_CASE("Simons inequality on the bowl") {
    const BowlSurface bowl(bowl_solve(2, 6.0));
    const AmbientVector w = axis(2);
    for (int k = 0; k <= 35; ++k) {
        const double rho = 0.5 + 3.5 * k / 35.0;
        ParamPoint p = ParamPoint::Zero(2);
        p(0) = rho;
        CHECK(simons_gap(bowl, p, w) >= -1e-4);
    }
}

TEST_CASE("ratio classifier") {
    const AmbientVector w = axis(2);

    const GrimSurface grim(2, GrimMode::arclength);
    const RatioReport grim_report = ratio_classifier(grim, grim_grid(-2, 2, 9, 5), w, 1e-9);
    CHECK(grim_report.verdict == RatioVerdict::grim_like);
    CHECK(grim_report.spread < 1e-10);
    CHECK(grim_report.ratio_min == doctest::Approx(1.0).epsilon(1e-10));

    // flipped orientation classifies identically (mean-convex reduction)
    const GrimSurface flipped(2, GrimMode::arclength, Orientation::positive);
    const RatioReport flipped_report =
        ratio_classifier(flipped, grim_grid(-2, 2, 9, 5), w, 1e-9);
    CHECK(flipped_report.verdict == RatioVerdict::grim_like);

    const BowlSurface bowl(bowl_solve(2, 6.0));
    std::vector<ParamPoint> bowl_grid;
    for (int k = 0; k <= 30; ++k) {
        ParamPoint p = ParamPoint::Zero(2);
        p(0) = 0.05 + (5.0 - 0.05) * k / 30.0;
        bowl_grid.push_back(p);
    }
    const RatioReport bowl_report = ratio_classifier(bowl, bowl_grid, w, 1e-3);
    CHECK(bowl_report.verdict == RatioVerdict::non_constant_ratio);
    CHECK(bowl_report.ratio_min == doctest::Approx(0.5).epsilon(1e-2));
    CHECK(bowl_report.ratio_max > 0.9);

    const HyperplaneSurface flat = HyperplaneSurface::horizontal(2, 0.0);
    const RatioReport flat_report =
        ratio_classifier(flat, grim_grid(-2, 2, 4, 4), w, 1e-9);
    CHECK(flat_report.verdict == RatioVerdict::mean_curvature_vanishes);

    CHECK_THROWS_AS(ratio_classifier(grim, {}, w, 1e-9), InputError);
}

TEST_CASE("field sampling invariants") {
    const GrimSurface grim(2, GrimMode::arclength);
    const AmbientVector w = axis(2);
    const FieldSample sample = sample_fields(grim, grim_grid(-1.5, 1.5, 5, 3), w);
    for (std::size_t i = 0; i < sample.points.size(); ++i) {
        CHECK(grim.contains(sample.points[i]));
        CHECK(sample.H[i] > 0.0);
        CHECK(sample.ratio[i] == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::isfinite(sample.jacobi[i]));
        CHECK(std::isfinite(sample.simons[i]));
    }
}

TEST_CASE("Dirichlet lambda1 on grim chart rectangles") {
    const EigenSolve unit = dirichlet_lambda1(-1.0, 1.0, -1.0, 1.0, 64, 64);
    CHECK(unit.lambda1 > 0.0);
    CHECK(unit.lambda1 == doctest::Approx(4.515).epsilon(0.01));
    CHECK(unit.eigvec_positive);
    CHECK(unit.residual_norm <= 1e-9 * std::max(1.0, std::abs(unit.lambda1)));

    // tiny rectangle: dominated by the Dirichlet Laplacian of the square
    const EigenSolve tiny = dirichlet_lambda1(-0.1, 0.1, -0.1, 0.1, 64, 64);
    CHECK(tiny.lambda1 > 480.0);
    CHECK(tiny.lambda1 < 500.0);
    CHECK(std::abs(tiny.lambda1 - (2.0 * kPi * kPi / 0.04 - 0.5)) < 2.0);

    // Dirichlet domain monotonicity on nested rectangles
    const EigenSolve big = dirichlet_lambda1(-2.0, 2.0, -2.0, 2.0, 64, 64);
    CHECK(unit.lambda1 >= big.lambda1);

    CHECK_THROWS_AS(dirichlet_lambda1(-1.0, 1.0, -1.0, 1.0, 8, 64), InputError);
    CHECK_THROWS_AS(dirichlet_lambda1(1.0, -1.0, -1.0, 1.0, 64, 64), InputError);
}

TEST_CASE("refinement history trends toward the continuum value") {
    const EigenSolve solve = dirichlet_lambda1_levels(-1.0, 1.0, -1.0, 1.0, {32, 64, 128});
    REQUIRE(solve.refinement.size() == 3);
    const double l32 = solve.refinement[0].second;
    const double l64 = solve.refinement[1].second;
    const double l128 = solve.refinement[2].second;
    // second-order scheme: consecutive gaps shrink by about 4
    CHECK(std::abs(l32 - l64) > std::abs(l64 - l128));
    CHECK(std::abs(l64 - l128) > 0.0);
    // every level is safely above the stability floor
    for (const auto& [grid, lambda] : solve.refinement) {
        CHECK(lambda > -1e-3);
        CHECK(grid > 0);
    }
}
