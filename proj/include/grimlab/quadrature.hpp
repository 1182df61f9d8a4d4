#pragma once

#include <functional>
#include <iosfwd>
#include <span>

#include "grimlab/errors.hpp"

namespace grimlab {

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    long evaluations = 0;
};

// Globally adaptive Gauss-Kronrod 7-15: bisects the interval with the largest
// error estimate until the summed estimate drops below abs_tol or the
// evaluation budget runs out. Deterministic for identical inputs.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                    double b, double abs_tol = 1e-10,
                                    long max_evals = 1000000);

// |B^m(1)|, volume of the unit ball in R^m (tabulated for m <= 10).
double unit_ball_volume(int m);

// area(S^m) = (m+1) |B^{m+1}(1)|.
double sphere_area(int m);

// Integral of sin(eta(r)) = sech r over [-L, L]; closed form pi - 2 eta(L).
double slab_integral(double L);

// Same quantity by adaptive quadrature of sech (cross-check path).
QuadratureResult slab_integral_quadrature(double L);

// F_{n-1}(R) = integral over [0, pi/2] of eta(R cos th) sin^{n-2} th cos th.
// The bracket pi - 2(n-1) F_{n-1}(R) is the angular deficit of the weighted
// curvature mass inside the geodesic R-ball of the grim hyperplane.
double deficit_integral(int n, double R);
QuadratureResult deficit_integral_result(int n, double R);

// Weighted total extrinsic curvature of the grim hyperplane over B_R via the
// reduced formula R^{n-1} |B^{n-1}(1)| [pi - 2(n-1) F_{n-1}(R)].
double weighted_curvature_reduced(int n, double R);
QuadratureResult weighted_curvature_reduced_result(int n, double R);

// Same integral by direct quadrature of sech r over {r^2 + |y|^2 <= R^2},
// reduced over the sphere factor so the numeric integral is 2-dimensional.
// Cost guard: n in {2,3,4} and R <= 20, else BudgetError.
QuadratureResult weighted_curvature_bruteforce(int n, double R);

// Least-squares slope of log(weighted_curvature_reduced) against log R.
// Requires >= 4 strictly increasing radii with min >= 10.
double growth_fit(int n, std::span<const double> R_grid);

// CSV columns: n, R, value, value/R^{n-1}, F, error_estimate.
void write_weighted_curvature_csv(std::ostream& out, int n, std::span<const double> R_grid);

} // namespace grimlab
