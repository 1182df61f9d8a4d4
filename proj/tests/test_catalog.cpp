#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "grimlab/catalog.hpp"

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

} // namespace

TEST_CASE("grim_eta basics") {
    CHECK(grim_eta(0.0) == doctest::Approx(kPi / 2.0).epsilon(1e-15));
    CHECK(grim_eta(40.0) < 1e-15);
    CHECK(grim_eta(40.0) > 0.0);

    // sin(eta(r)) = sech r
    for (double r : {0.3, 1.0, 2.5})
        CHECK(std::abs(std::sin(grim_eta(r)) - 1.0 / std::cosh(r)) < 1e-14);

    // strictly decreasing, range (0, pi)
    double prev = grim_eta(-30.0);
    CHECK(prev < kPi);
    for (double r = -29.0; r <= 30.0; r += 1.0) {
        const double cur = grim_eta(r);
        CHECK(cur < prev);
        CHECK(cur > 0.0);
        prev = cur;
    }
}

TEST_CASE("grim arc length and its inverse") {
    CHECK(grim_arclength(0.0) == 0.0);
    // tan(pi/12) = 2 - sqrt(3)
    CHECK(grim_arclength(kPi / 3.0) ==
          doctest::Approx(-std::log(2.0 - std::sqrt(3.0))).epsilon(1e-14));
    CHECK_THROWS_AS(grim_arclength(kPi / 2.0), DomainError);
    CHECK_THROWS_AS(grim_arclength(-kPi / 2.0), DomainError);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ut(-kPi / 2.0 + 1e-6, kPi / 2.0 - 1e-6);
    for (int k = 0; k < 1000; ++k) {
        const double t = ut(rng);
        CHECK(std::abs(grim_t(grim_arclength(t)) - t) < 1e-12);
    }
    // and the chart relation t = pi/2 - eta(r)
    for (double r : {-2.0, -0.4, 0.0, 0.9, 3.7})
        CHECK(std::abs(grim_t(r) - (kPi / 2.0 - grim_eta(r))) < 1e-14);
}

TEST_CASE("grim graph chart carries the sec^2 metric") {
    const GrimSurface grim(3, GrimMode::graph);
    ParamPoint p(3);
    p << 0.9, 1.2, -0.3;
    const AmbientVector w = axis(3);
    const CurvatureFrame frame = curvature_frame(grim, p, w);
    const double sec2 = 1.0 / std::pow(std::cos(0.9), 2);
    CHECK(frame.g(0, 0) == doctest::Approx(sec2).epsilon(1e-14));
    CHECK(frame.g(1, 1) == doctest::Approx(1.0));
    CHECK(frame.g(2, 2) == doctest::Approx(1.0));
    CHECK(std::abs(frame.g(0, 1)) < 1e-15);

    // height -ln cos t at t = pi/3 is ln 2
    ParamPoint q(3);
    q << kPi / 3.0, 0.0, 0.0;
    CHECK(grim.jet(q).value(3) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("grim arc-length chart is Euclidean with |A| = sech r") {
    const GrimSurface grim(2, GrimMode::arclength);
    const AmbientVector w = axis(2);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ur(-4.0, 4.0);
    for (int k = 0; k < 100; ++k) {
        const ParamPoint p = pt2(ur(rng), ur(rng));
        const CurvatureFrame frame = curvature_frame(grim, p, w);
        CHECK((frame.g - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-14);
        const double sech = 1.0 / std::cosh(p(0));
        CHECK(std::sqrt(frame.normA2) == doctest::Approx(sech).epsilon(1e-12));
        CHECK(frame.H == doctest::Approx(sech).epsilon(1e-12));
        // f(r) = ln sin(eta(r)) = -ln cosh r
        CHECK(frame.f == doctest::Approx(std::log(std::sin(grim_eta(p(0))))).epsilon(1e-12));
    }
    CHECK(std::sqrt(curvature_frame(grim, pt2(1.0, 0.0), w).normA2) ==
          doctest::Approx(1.0 / std::cosh(1.0)).epsilon(1e-14));
}

TEST_CASE("graph and arc-length charts agree after transport") {
    const GrimSurface graph(3, GrimMode::graph);
    const GrimSurface arc(3, GrimMode::arclength);
    const AmbientVector w = axis(3);
    for (double t : {-1.2, -0.7, 0.0, 0.4, 1.3}) {
        ParamPoint pg(3), pa(3);
        pg << t, 0.8, -2.0;
        pa << grim_arclength(t), 0.8, -2.0;
        const CurvatureFrame a = curvature_frame(graph, pg, w);
        const CurvatureFrame b = curvature_frame(arc, pa, w);
        CHECK(std::abs(a.H - b.H) < 1e-10);
        CHECK(std::abs(a.normA2 - b.normA2) < 1e-10);
        CHECK(std::abs(a.S - b.S) < 1e-10);
        CHECK((a.nu - b.nu).norm() < 1e-10);
        CHECK(std::abs(a.f - b.f) < 1e-10);
    }
}

TEST_CASE("|A| = H everywhere on the grim hyperplane") {
    const GrimSurface grim(2, GrimMode::graph);
    const AmbientVector w = axis(2);
    for (double t = -1.4; t <= 1.4; t += 0.1) {
        const CurvatureFrame frame = curvature_frame(grim, pt2(t, 0.0), w);
        CHECK(std::abs(std::sqrt(frame.normA2) - frame.H) < 1e-12);
    }
}

TEST_CASE("bowl profile basics") {
    const BowlProfile prof = bowl_solve(2, 6.0);
    CHECK(prof.u_at(0.0) == 0.0);
    CHECK(prof.du_at(0.0) == 0.0);
    // near-axis coefficient u / rho^2 -> 1/(2n)
    CHECK(std::abs(prof.u_at(1e-3) / 1e-6 - 0.25) < 1e-4);
    // convex: u' strictly increasing across the nodes
    for (std::size_t k = 1; k < prof.du.size(); ++k)
        CHECK(prof.du[k] > prof.du[k - 1]);
    // interpolation error estimate recorded and small
    CHECK(prof.interp_error_bound >= 0.0);
    CHECK(prof.interp_error_bound < 1e-8);
    // far-field slope of the n = 2 bowl approaches rho / (n - 1)
    CHECK(std::abs(prof.du_at(6.0) / 6.0 - 1.0) < 0.1);

    CHECK_THROWS_AS(bowl_solve(1, 5.0), InputError);
    CHECK_THROWS_AS(bowl_solve(2, -1.0), InputError);
    CHECK_THROWS_AS(bowl_solve(2, 5.0, 0.0), InputError);
}

TEST_CASE("bowl surface solves the translator equation (engine cross-check)") {
    for (int n : {2, 3}) {
        const BowlSurface bowl(bowl_solve(n, 6.0));
        const AmbientVector w = axis(n);
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            const double rho = 0.05 + (5.8 - 0.05) * k / 99.0;
            ParamPoint p = ParamPoint::Zero(n);
            p(0) = rho / std::sqrt(2.0);
            p(1) = -rho / std::sqrt(2.0);
            worst = std::max(worst, std::abs(soliton_residual(bowl, p, w)));
        }
        CAPTURE(n);
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("bowl tip is umbilic") {
    const int n = 3;
    const BowlSurface bowl(bowl_solve(n, 3.0));
    const AmbientVector w = axis(n);
    ParamPoint p = ParamPoint::Zero(n);
    p(0) = 1e-3;
    const CurvatureFrame frame = curvature_frame(bowl, p, w);
    for (int i = 1; i < n; ++i)
        CHECK(std::abs(frame.principal(i) - frame.principal(0)) < 1e-5);
    CHECK(frame.normA2 / (frame.H * frame.H) == doctest::Approx(1.0 / n).epsilon(1e-5));
    CHECK(frame.S > 0.0); // positive scalar curvature at the tip
}

TEST_CASE("bowl domain guard and CSV emission") {
    const BowlProfile prof = bowl_solve(2, 2.0);
    const BowlSurface bowl(prof);
    const AmbientVector w = axis(2);
    CHECK_THROWS_AS(curvature_frame(bowl, pt2(3.0, 0.0), w), DomainError);

    std::ostringstream csv;
    prof.write_csv(csv);
    const std::string text = csv.str();
    CHECK(text.rfind("rho,u,du\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') ==
          static_cast<long>(prof.rho.size()) + 1);
}

TEST_CASE("bowl weighted density is e^{u}") {
    const BowlSurface bowl(bowl_solve(2, 3.0));
    const AmbientVector w = axis(2);
    for (double rho : {0.2, 1.0, 2.5}) {
        const ParamPoint p = pt2(rho, 0.0);
        CHECK(weighted_density(bowl, p, w) ==
              doctest::Approx(std::exp(bowl.profile().u_at(rho))).epsilon(1e-13));
    }
}

TEST_CASE("tighter ODE tolerance does not move the profile") {
    const BowlProfile coarse = bowl_solve(2, 4.0, 1e-8);
    const BowlProfile fine = bowl_solve(2, 4.0, 1e-12);
    for (double rho : {0.5, 1.0, 2.0, 3.5}) {
        CHECK(std::abs(coarse.u_at(rho) - fine.u_at(rho)) < 1e-7);
        CHECK(std::abs(coarse.du_at(rho) - fine.du_at(rho)) < 1e-7);
    }
}
