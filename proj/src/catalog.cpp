#include "grimlab/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace grimlab {

namespace {

constexpr double kPi = std::numbers::pi;

double sech(double r) { return 1.0 / std::cosh(r); }

// ln cosh r without overflow for large |r|.
double log_cosh(double r) {
    const double a = std::abs(r);
    return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

} // namespace

double grim_eta(double r) { return 2.0 * std::atan(std::exp(-r)); }

double grim_arclength(double t) {
    if (!(std::abs(t) < kPi / 2.0))
        throw DomainError("grim graph coordinate must satisfy |t| < pi/2");
    return std::asinh(std::tan(t));
}

double grim_t(double r) { return std::atan(std::sinh(r)); }

GrimSurface::GrimSurface(int n, GrimMode mode, Orientation orient)
    : n_(n), mode_(mode), orient_(orient) {
    if (n_ < 2)
        throw InputError("grim hyperplane needs n >= 2");
}

GrimSurface grim_surface(int n, GrimMode mode) { return GrimSurface(n, mode); }

bool GrimSurface::contains(const ParamPoint& p) const {
    if (p.size() != n_ || !p.allFinite())
        return false;
    if (mode_ == GrimMode::graph)
        return std::abs(p(0)) < kPi / 2.0;
    return std::abs(p(0)) <= 700.0; // cosh overflow guard
}

SurfaceJet GrimSurface::jet(const ParamPoint& p) const {
    SurfaceJet jet = SurfaceJet::zeros(n_);
    for (int i = 1; i < n_; ++i) {
        jet.value(i) = p(i);
        jet.d1(i, i) = 1.0;
    }

    if (mode_ == GrimMode::graph) {
        const double t = p(0);
        const double c = std::cos(t);
        jet.value(0) = t;
        jet.value(n_) = -std::log(c);
        jet.d1(0, 0) = 1.0;
        jet.d1(n_, 0) = std::tan(t);
        jet.second(0, 0)(n_) = 1.0 / (c * c);
    } else {
        const double r = p(0);
        const double s = sech(r);
        const double th = std::tanh(r);
        jet.value(0) = grim_t(r);
        jet.value(n_) = log_cosh(r);
        jet.d1(0, 0) = s;
        jet.d1(n_, 0) = th;
        jet.second(0, 0)(0) = -s * th;
        jet.second(0, 0)(n_) = s * s;
    }
    return jet;
}

HyperplaneSurface::HyperplaneSurface(int n, AmbientVector base, Eigen::MatrixXd frame,
                                     Orientation orient)
    : n_(n), base_(std::move(base)), frame_(std::move(frame)), orient_(orient) {}

HyperplaneSurface HyperplaneSurface::vertical(int n, Orientation orient) {
    if (n < 2)
        throw InputError("hyperplane needs n >= 2");
    Eigen::MatrixXd frame = Eigen::MatrixXd::Zero(n + 1, n);
    for (int i = 0; i < n; ++i)
        frame(i + 1, i) = 1.0;
    return HyperplaneSurface(n, AmbientVector::Zero(n + 1), std::move(frame), orient);
}

HyperplaneSurface HyperplaneSurface::horizontal(int n, double height, Orientation orient) {
    if (n < 2)
        throw InputError("hyperplane needs n >= 2");
    Eigen::MatrixXd frame = Eigen::MatrixXd::Zero(n + 1, n);
    for (int i = 0; i < n; ++i)
        frame(i, i) = 1.0;
    AmbientVector base = AmbientVector::Zero(n + 1);
    base(n) = height;
    return HyperplaneSurface(n, std::move(base), std::move(frame), orient);
}

bool HyperplaneSurface::contains(const ParamPoint& p) const {
    return p.size() == n_ && p.allFinite();
}

SurfaceJet HyperplaneSurface::jet(const ParamPoint& p) const {
    SurfaceJet jet = SurfaceJet::zeros(n_);
    jet.value = base_ + frame_ * p;
    jet.d1 = frame_;
    return jet;
}

// ---------------------------------------------------------------------------
// Bowl profile
// ---------------------------------------------------------------------------

namespace {

struct BowlState {
    double u;
    double v; // u'
};

BowlState bowl_rhs(int n, double rho, const BowlState& s) {
    const double upp = (1.0 - (n - 1) * s.v / rho) * (1.0 + s.v * s.v);
    return {s.v, upp};
}

// Cubic Hermite value on [x0, x1] from endpoint values and derivatives.
double hermite(double x, double x0, double x1, double f0, double f1, double m0, double m1) {
    const double h = x1 - x0;
    const double s = (x - x0) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2.0 * s3 - 3.0 * s2 + 1.0) * f0 + (s3 - 2.0 * s2 + s) * h * m0 +
           (-2.0 * s3 + 3.0 * s2) * f1 + (s3 - s2) * h * m1;
}

double hermite_deriv(double x, double x0, double x1, double f0, double f1, double m0,
                     double m1) {
    const double h = x1 - x0;
    const double s = (x - x0) / h;
    const double s2 = s * s;
    return ((6.0 * s2 - 6.0 * s) * f0 + (3.0 * s2 - 4.0 * s + 1.0) * h * m0 +
            (-6.0 * s2 + 6.0 * s) * f1 + (3.0 * s2 - 2.0 * s) * h * m1) /
           h;
}

} // namespace

double BowlProfile::series_a() const { return 1.0 / (2.0 * n); }

double BowlProfile::series_b() const {
    const double a = series_a();
    return 2.0 * a * a * a / (n + 2);
}

double BowlProfile::series_c() const {
    const double a = series_a();
    return 16.0 * std::pow(a, 5) * (3.0 - n) / (3.0 * (n + 2) * (n + 4));
}

std::size_t BowlProfile::interval(double r) const {
    auto it = std::upper_bound(rho.begin(), rho.end(), r);
    std::size_t k = static_cast<std::size_t>(it - rho.begin());
    if (k == 0)
        return 0;
    if (k >= rho.size())
        return rho.size() - 2;
    return k - 1;
}

double BowlProfile::u_at(double r) const {
    if (r < rho0) {
        const double r2 = r * r;
        return r2 * (series_a() + r2 * (series_b() + r2 * series_c()));
    }
    const std::size_t k = interval(r);
    return hermite(r, rho[k], rho[k + 1], u[k], u[k + 1], du[k], du[k + 1]);
}

double BowlProfile::du_at(double r) const {
    if (r < rho0) {
        const double r2 = r * r;
        return r * (2.0 * series_a() + r2 * (4.0 * series_b() + 6.0 * series_c() * r2));
    }
    const std::size_t k = interval(r);
    return hermite(r, rho[k], rho[k + 1], du[k], du[k + 1], ddu[k], ddu[k + 1]);
}

double BowlProfile::ddu_at(double r) const {
    if (r < rho0) {
        const double r2 = r * r;
        return 2.0 * series_a() + r2 * (12.0 * series_b() + 30.0 * series_c() * r2);
    }
    const std::size_t k = interval(r);
    return hermite_deriv(r, rho[k], rho[k + 1], du[k], du[k + 1], ddu[k], ddu[k + 1]);
}

double BowlProfile::du_over_rho_at(double r) const {
    if (r < rho0) {
        const double r2 = r * r;
        return 2.0 * series_a() + r2 * (4.0 * series_b() + 6.0 * series_c() * r2);
    }
    return du_at(r) / r;
}

void BowlProfile::write_csv(std::ostream& out) const {
    out << "rho,u,du\n";
    char line[128];
    for (std::size_t k = 0; k < rho.size(); ++k) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", rho[k], u[k], du[k]);
        out << line;
    }
}

BowlProfile bowl_solve(int n, double rho_max, double tol) {
    if (n < 2)
        throw InputError("bowl profile needs n >= 2");
    if (!(rho_max > 0.0))
        throw InputError("rho_max must be positive");
    if (!(tol > 0.0))
        throw InputError("tolerance must be positive");

    BowlProfile prof;
    prof.n = n;
    prof.rho_max = rho_max;
    prof.tol = tol;
    prof.rho0 = std::min(1e-3, 0.5 * rho_max);

    const double a = prof.series_a();
    const double b = prof.series_b();
    const double c = prof.series_c();

    double x = prof.rho0;
    BowlState s;
    {
        const double r2 = x * x;
        s.u = r2 * (a + r2 * (b + r2 * c));
        s.v = x * (2.0 * a + r2 * (4.0 * b + 6.0 * c * r2));
    }

    prof.rho.push_back(x);
    prof.u.push_back(s.u);
    prof.du.push_back(s.v);
    prof.ddu.push_back(bowl_rhs(n, x, s).v);

    // Dormand-Prince 5(4) with a step cap that keeps the Hermite
    // interpolation error far below the residual tolerances downstream.
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                        e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                        e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    const double h_max = 0.01;
    double h = std::min(h_max, rho_max - x);

    auto add = [](const BowlState& p, double w, const BowlState& q) {
        return BowlState{p.u + w * q.u, p.v + w * q.v};
    };

    while (x < rho_max) {
        h = std::min(h, rho_max - x);
        if (h < 1e-14 * std::max(1.0, x))
            throw IntegrationError("bowl ODE step underflow");

        const BowlState k1 = bowl_rhs(n, x, s);
        const BowlState k2 = bowl_rhs(n, x + c2 * h, add(s, h * a21, k1));
        BowlState y = add(add(s, h * a31, k1), h * a32, k2);
        const BowlState k3 = bowl_rhs(n, x + c3 * h, y);
        y = add(add(add(s, h * a41, k1), h * a42, k2), h * a43, k3);
        const BowlState k4 = bowl_rhs(n, x + c4 * h, y);
        y = add(add(add(add(s, h * a51, k1), h * a52, k2), h * a53, k3), h * a54, k4);
        const BowlState k5 = bowl_rhs(n, x + c5 * h, y);
        y = add(add(add(add(add(s, h * a61, k1), h * a62, k2), h * a63, k3), h * a64, k4),
                h * a65, k5);
        const BowlState k6 = bowl_rhs(n, x + h, y);

        BowlState s5{s.u + h * (b1 * k1.u + b3 * k3.u + b4 * k4.u + b5 * k5.u + b6 * k6.u),
                     s.v + h * (b1 * k1.v + b3 * k3.v + b4 * k4.v + b5 * k5.v + b6 * k6.v)};
        const BowlState k7 = bowl_rhs(n, x + h, s5);

        const double err_u =
            h * (e1 * k1.u + e3 * k3.u + e4 * k4.u + e5 * k5.u + e6 * k6.u + e7 * k7.u);
        const double err_v =
            h * (e1 * k1.v + e3 * k3.v + e4 * k4.v + e5 * k5.v + e6 * k6.v + e7 * k7.v);
        const double scale_u = tol + tol * std::abs(s5.u);
        const double scale_v = tol + tol * std::abs(s5.v);
        const double err = std::sqrt(0.5 * ((err_u / scale_u) * (err_u / scale_u) +
                                            (err_v / scale_v) * (err_v / scale_v)));

        if (err <= 1.0) {
            x += h;
            s = s5;
            if (!std::isfinite(s.u) || !std::isfinite(s.v))
                throw IntegrationError("bowl ODE state is not finite");
            prof.rho.push_back(x);
            prof.u.push_back(s.u);
            prof.du.push_back(s.v);
            prof.ddu.push_back(bowl_rhs(n, x, s).v);
        }
        const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(grow, 0.2, 5.0);
        h = std::min(h, h_max);
    }

    if (prof.rho.size() < 2)
        throw IntegrationError("bowl ODE produced too few nodes");

    // Hermite error estimate h^4 |u''''| / 384, with u'''' from node differences.
    double bound = 0.0;
    for (std::size_t k = 0; k + 2 < prof.rho.size(); ++k) {
        const double hk = prof.rho[k + 1] - prof.rho[k];
        const double d4 = std::abs((prof.ddu[k + 2] - prof.ddu[k]) /
                                   (prof.rho[k + 2] - prof.rho[k]));
        bound = std::max(bound, hk * hk * hk * hk * d4 / 384.0);
    }
    prof.interp_error_bound = bound;
    return prof;
}

BowlSurface::BowlSurface(BowlProfile profile, Orientation orient)
    : profile_(std::move(profile)), orient_(orient) {}

bool BowlSurface::contains(const ParamPoint& p) const {
    return p.size() == profile_.n && p.allFinite() && p.norm() <= profile_.rho_max;
}

SurfaceJet BowlSurface::jet(const ParamPoint& p) const {
    const int n = profile_.n;
    const double r = p.norm();

    SurfaceJet jet = SurfaceJet::zeros(n);
    for (int i = 0; i < n; ++i) {
        jet.value(i) = p(i);
        jet.d1(i, i) = 1.0;
    }
    jet.value(n) = profile_.u_at(r);

    const double slope = profile_.du_over_rho_at(r); // u'/rho, smooth at the axis
    for (int i = 0; i < n; ++i)
        jet.d1(n, i) = slope * p(i);

    if (r < 1e-14) {
        for (int i = 0; i < n; ++i)
            jet.second(i, i)(n) = slope;
        return jet;
    }

    const double upp = profile_.ddu_at(r);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double xi = p(i) / r;
            const double xj = p(j) / r;
            const double val = (i == j ? slope : 0.0) + (upp - slope) * xi * xj;
            jet.second(i, j)(n) = val;
            if (i != j)
                jet.second(j, i)(n) = val;
        }
    return jet;
}

} // namespace grimlab
