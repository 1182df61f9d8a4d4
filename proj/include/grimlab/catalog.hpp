#pragma once

#include <iosfwd>
#include <vector>

#include "grimlab/hypersurface.hpp"

namespace grimlab {

// eta(r) = 2 atan(e^{-r}): strictly decreasing, range (0, pi),
// sin(eta(r)) = sech r, cos(eta(r)) = tanh r.
double grim_eta(double r);

// Arc length along the grim reaper curve, r(t) = asinh(tan t)
// (equivalently -ln tan((pi/2 - t)/2)). Throws DomainError at |t| >= pi/2.
double grim_arclength(double t);

// Inverse of grim_arclength: t = pi/2 - eta(r) = atan(sinh r).
double grim_t(double r);

enum class GrimMode { graph, arclength };

// Grim hyperplane: the grim reaper curve times R^{n-1}.
//   graph mode:     Phi(t, y) = (t, y, -ln cos t),  t in (-pi/2, pi/2)
//   arclength mode: Phi(r, y) = (atan(sinh r), y, ln cosh r),  induced metric = id
// The default negative orientation selects nu = (sin t, 0, ..., 0, -cos t).
class GrimSurface final : public ParamSurface {
public:
    GrimSurface(int n, GrimMode mode, Orientation orient = Orientation::negative);

    int dim() const override { return n_; }
    bool contains(const ParamPoint& p) const override;
    SurfaceJet jet(const ParamPoint& p) const override;
    Orientation orientation() const override { return orient_; }
    GrimMode mode() const { return mode_; }

private:
    int n_;
    GrimMode mode_;
    Orientation orient_;
};

GrimSurface grim_surface(int n, GrimMode mode);

// Affine hyperplane Phi(y) = base + E y with orthonormal frame E.
class HyperplaneSurface final : public ParamSurface {
public:
    // Phi(y) = (0, y_1, ..., y_n): contains the translation axis e_{n+1}.
    static HyperplaneSurface vertical(int n, Orientation orient = Orientation::negative);
    // Phi(y) = (y_1, ..., y_n, height): perpendicular to e_{n+1}.
    static HyperplaneSurface horizontal(int n, double height,
                                        Orientation orient = Orientation::negative);

    int dim() const override { return n_; }
    bool contains(const ParamPoint& p) const override;
    SurfaceJet jet(const ParamPoint& p) const override;
    Orientation orientation() const override { return orient_; }

private:
    HyperplaneSurface(int n, AmbientVector base, Eigen::MatrixXd frame, Orientation orient);

    int n_;
    AmbientVector base_;
    Eigen::MatrixXd frame_;
    Orientation orient_;
};

// Radial profile u(rho) of the rotationally symmetric bowl translator,
// solving u'' / (1 + u'^2) + (n-1) u' / rho = 1 with u(0) = u'(0) = 0.
// A series start on [0, rho0] avoids the removable singularity at the axis;
// beyond rho0 the profile holds adaptive Runge-Kutta nodes queried through
// cubic Hermite interpolation.
struct BowlProfile {
    int n = 2;
    double rho0 = 1e-3;
    double rho_max = 0.0;
    double tol = 1e-10;

    std::vector<double> rho; // solver nodes, ascending, rho.front() == rho0
    std::vector<double> u;
    std::vector<double> du;
    std::vector<double> ddu; // ODE right-hand side at the nodes

    double interp_error_bound = 0.0; // recorded Hermite error estimate for u

    double u_at(double r) const;
    double du_at(double r) const;
    double ddu_at(double r) const;         // derivative of the du interpolant
    double du_over_rho_at(double r) const; // smooth through the axis

    // Series coefficients: u = a rho^2 + b rho^4 + c rho^6 + O(rho^8).
    double series_a() const;
    double series_b() const;
    double series_c() const;

    // CSV columns: rho, u, du.
    void write_csv(std::ostream& out) const;

private:
    std::size_t interval(double r) const;
};

BowlProfile bowl_solve(int n, double rho_max, double tol = 1e-10);

// Graph chart of the bowl: Phi(x) = (x, u(|x|)) over the disc |x| <= rho_max.
class BowlSurface final : public ParamSurface {
public:
    explicit BowlSurface(BowlProfile profile, Orientation orient = Orientation::negative);

    int dim() const override { return profile_.n; }
    bool contains(const ParamPoint& p) const override;
    SurfaceJet jet(const ParamPoint& p) const override;
    Orientation orientation() const override { return orient_; }

    const BowlProfile& profile() const { return profile_; }

private:
    BowlProfile profile_;
    Orientation orient_;
};

} // namespace grimlab
