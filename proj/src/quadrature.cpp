#include "grimlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <queue>
#include <vector>

#include "grimlab/catalog.hpp"

namespace grimlab {

namespace {

constexpr double kPi = std::numbers::pi;

// 15-point Kronrod nodes with embedded 7-point Gauss weights.
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Segment {
    double a, b;
    double value;
    double error;
};

Segment eval_segment(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double f0 = f(mid);
    double kronrod = kWgk[7] * f0;
    double gauss = kWg[3] * f0;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        const double fsum = f(mid - dx) + f(mid + dx);
        kronrod += kWgk[i] * fsum;
        if (i % 2 == 1)
            gauss += kWg[i / 2] * fsum;
    }
    kronrod *= half;
    gauss *= half;

    double err = std::abs(kronrod - gauss);
    err = 200.0 * err * std::sqrt(200.0 * err); // (200 |G-K|)^{3/2}
    err = std::min(err, std::abs(kronrod - gauss) * 200.0);
    if (!std::isfinite(kronrod))
        throw IntegrationError("integrand produced a non-finite value");
    return {a, b, kronrod, err};
}

struct SegmentWorse {
    bool operator()(const Segment& lhs, const Segment& rhs) const {
        if (lhs.error != rhs.error)
            return lhs.error < rhs.error;
        return lhs.a > rhs.a; // deterministic tie-break
    }
};

} // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                    double b, double abs_tol, long max_evals) {
    QuadratureResult result;
    if (a == b)
        return result;

    const double span = std::abs(b - a);
    std::priority_queue<Segment, std::vector<Segment>, SegmentWorse> active;
    std::vector<Segment> settled; // too narrow to refine further

    active.push(eval_segment(f, a, b));
    result.evaluations = 15;

    double active_error = active.top().error;
    double settled_error = 0.0;
    while (!active.empty() && active_error + settled_error > abs_tol &&
           result.evaluations + 30 <= max_evals) {
        const Segment worst = active.top();
        active.pop();
        if (std::abs(worst.b - worst.a) < 1e-15 * span) {
            settled.push_back(worst);
            active_error -= worst.error;
            settled_error += worst.error;
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        const Segment left = eval_segment(f, worst.a, mid);
        const Segment right = eval_segment(f, mid, worst.b);
        result.evaluations += 30;
        active_error += left.error + right.error - worst.error;
        active.push(left);
        active.push(right);
    }

    while (!active.empty()) {
        settled.push_back(active.top());
        active.pop();
    }
    std::sort(settled.begin(), settled.end(),
              [](const Segment& lhs, const Segment& rhs) { return lhs.a < rhs.a; });

    double value = 0.0, comp = 0.0, error = 0.0;
    for (const Segment& s : settled) {
        const double y = s.value - comp;
        const double t = value + y;
        comp = (t - value) - y;
        value = t;
        error += s.error;
    }
    result.value = value;
    result.abs_error_estimate = error;
    return result;
}

double unit_ball_volume(int m) {
    if (m < 0)
        throw InputError("ball dimension must be nonnegative");
    static const double table[11] = {
        1.0,
        2.0,
        kPi,
        4.0 * kPi / 3.0,
        kPi * kPi / 2.0,
        8.0 * kPi * kPi / 15.0,
        kPi * kPi * kPi / 6.0,
        16.0 * std::pow(kPi, 3) / 105.0,
        std::pow(kPi, 4) / 24.0,
        32.0 * std::pow(kPi, 4) / 945.0,
        std::pow(kPi, 5) / 120.0};
    if (m <= 10)
        return table[m];
    return std::pow(kPi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
}

double sphere_area(int m) {
    if (m < 0)
        throw InputError("sphere dimension must be nonnegative");
    return (m + 1) * unit_ball_volume(m + 1);
}

double slab_integral(double L) {
    if (!(L >= 0.0))
        throw InputError("slab half-width must be nonnegative");
    return kPi - 2.0 * grim_eta(L);
}

QuadratureResult slab_integral_quadrature(double L) {
    if (!(L >= 0.0))
        throw InputError("slab half-width must be nonnegative");
    return integrate_adaptive([](double r) { return 1.0 / std::cosh(r); }, -L, L, 1e-12);
}

namespace {

void check_deficit_args(int n, double R) {
    if (n < 2)
        throw InputError("deficit integral needs n >= 2");
    if (!(R >= 0.0))
        throw InputError("radius must be nonnegative");
}

} // namespace

QuadratureResult deficit_integral_result(int n, double R) {
    check_deficit_args(n, R);
    auto integrand = [n, R](double th) {
        const double s = std::sin(th);
        const double base = n == 2 ? 1.0 : std::pow(s, n - 2);
        return grim_eta(R * std::cos(th)) * base * std::cos(th);
    };
    return integrate_adaptive(integrand, 0.0, kPi / 2.0, 1e-10);
}

double deficit_integral(int n, double R) { return deficit_integral_result(n, R).value; }

QuadratureResult weighted_curvature_reduced_result(int n, double R) {
    check_deficit_args(n, R);
    QuadratureResult result;
    if (R == 0.0)
        return result;
    const QuadratureResult deficit = deficit_integral_result(n, R);
    const double shell = std::pow(R, n - 1) * unit_ball_volume(n - 1);
    result.value = shell * (kPi - 2.0 * (n - 1) * deficit.value);
    result.abs_error_estimate = shell * 2.0 * (n - 1) * deficit.abs_error_estimate;
    result.evaluations = deficit.evaluations;
    return result;
}

double weighted_curvature_reduced(int n, double R) {
    return weighted_curvature_reduced_result(n, R).value;
}

QuadratureResult weighted_curvature_bruteforce(int n, double R) {
    if (n < 2 || n > 4 || R > 20.0)
        throw BudgetError("brute-force path is guarded to n in {2,3,4} and R <= 20");
    if (!(R >= 0.0))
        throw InputError("radius must be nonnegative");

    QuadratureResult result;
    if (R == 0.0)
        return result;

    const double shell = sphere_area(n - 2);
    long inner_evals = 0;

    auto section = [&](double rho) {
        const double L = std::sqrt(std::max(0.0, R * R - rho * rho));
        const QuadratureResult inner = integrate_adaptive(
            [](double r) { return 1.0 / std::cosh(r); }, -L, L, 1e-12);
        inner_evals += inner.evaluations;
        const double base = n == 2 ? 1.0 : std::pow(rho, n - 2);
        return shell * base * inner.value;
    };

    const QuadratureResult outer =
        integrate_adaptive(section, 0.0, R, 1e-9 * std::max(1.0, std::pow(R, n - 1)));
    result.value = outer.value;
    result.abs_error_estimate =
        outer.abs_error_estimate + 1e-12 * shell * std::pow(R, n - 1);
    result.evaluations = outer.evaluations + inner_evals;
    return result;
}

double growth_fit(int n, std::span<const double> R_grid) {
    if (R_grid.size() < 4)
        throw InputError("growth fit needs at least 4 radii");
    if (R_grid.front() < 10.0)
        throw InputError("growth fit radii must start at 10 or above");
    for (std::size_t i = 1; i < R_grid.size(); ++i)
        if (!(R_grid[i] > R_grid[i - 1]))
            throw InputError("growth fit radii must be strictly increasing");

    const std::size_t m = R_grid.size();
    std::vector<double> x(m), y(m);
    for (std::size_t i = 0; i < m; ++i) {
        x[i] = std::log(R_grid[i]);
        y[i] = std::log(weighted_curvature_reduced(n, R_grid[i]));
    }
    double xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        xbar += x[i];
        ybar += y[i];
    }
    xbar /= static_cast<double>(m);
    ybar /= static_cast<double>(m);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxy += (x[i] - xbar) * (y[i] - ybar);
        sxx += (x[i] - xbar) * (x[i] - xbar);
    }
    return sxy / sxx;
}

void write_weighted_curvature_csv(std::ostream& out, int n,
                                  std::span<const double> R_grid) {
    out << "n,R,value,value_over_R_pow_n_minus_1,F,error_estimate\n";
    char line[256];
    for (double R : R_grid) {
        const QuadratureResult res = weighted_curvature_reduced_result(n, R);
        const double deficit = R > 0.0 ? deficit_integral(n, R) : deficit_integral(n, 0.0);
        const double scaled = R > 0.0 ? res.value / std::pow(R, n - 1) : 0.0;
        std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", n, R,
                      res.value, scaled, deficit, res.abs_error_estimate);
        out << line;
    }
}

} // namespace grimlab
