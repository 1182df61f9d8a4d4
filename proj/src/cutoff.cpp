#include "grimlab/cutoff.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "grimlab/quadrature.hpp"

namespace grimlab {

const char* growth_clause_name(GrowthClause clause) {
    switch (clause) {
    case GrowthClause::positivity:
        return "Positivity";
    case GrowthClause::quadratic_lower_bound:
        return "QuadraticLowerBound";
    case GrowthClause::monotonicity:
        return "Monotonicity";
    case GrowthClause::divergence:
        return "Divergence";
    }
    return "Unknown";
}

GrowthRejection::GrowthRejection(GrowthClause clause_, const std::string& what)
    : std::runtime_error(std::string(growth_clause_name(clause_)) + ": " + what),
      clause(clause_) {}

namespace {

std::vector<double> log_grid(double lo, double hi, int points) {
    std::vector<double> grid(points);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < points; ++i)
        grid[i] = std::exp(llo + (lhi - llo) * i / (points - 1));
    return grid;
}

} // namespace

GrowthFunction GrowthFunction::validate(Fn kappa, double proposed_t0, double table_max) {
    if (!kappa)
        throw InputError("kappa callable is empty");
    if (!(proposed_t0 >= 0.0))
        throw InputError("proposed threshold must be nonnegative");
    if (!(table_max > 10.0))
        throw InputError("table_max must exceed 10");

    Certificates cert;

    // Positivity, including a strictly positive floor near 0: the beta
    // integrand tau / kappa(tau) must stay integrable at the origin.
    {
        const double head = std::max(proposed_t0, 1.0);
        std::vector<double> grid;
        grid.push_back(0.0);
        for (double t : log_grid(1e-8, head, 200))
            grid.push_back(t);
        double kmin = std::numeric_limits<double>::infinity();
        for (double t : grid) {
            const double k = kappa(t);
            if (!std::isfinite(k) || k <= 0.0)
                throw GrowthRejection(GrowthClause::positivity,
                                      "kappa is not strictly positive near t = " +
                                          std::to_string(t));
            kmin = std::min(kmin, k);
        }
        if (!(kmin > 0.0))
            throw GrowthRejection(GrowthClause::positivity, "no positive floor near 0");
        cert.kappa_min = kmin;
    }

    const double cert_max = std::max(table_max, 1e12);

    // Quadratic lower bound kappa >= c (1 + t^2): record the grid constant and
    // reject a tail that decays toward zero.
    {
        const std::vector<double> grid = log_grid(1e-2, cert_max, 600);
        double c = kappa(0.0); // q(0) = kappa(0) / 1
        std::vector<double> q(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double t = grid[i];
            const double k = kappa(t);
            if (!std::isfinite(k) || k <= 0.0)
                throw GrowthRejection(GrowthClause::positivity,
                                      "kappa is not strictly positive at t = " +
                                          std::to_string(t));
            q[i] = k / (1.0 + t * t);
            c = std::min(c, q[i]);
        }
        const double tail_ratio = q.back() / q[q.size() - 100];
        bool tail_decreasing = true;
        for (std::size_t i = q.size() - 100; i + 1 < q.size(); ++i)
            if (q[i + 1] > q[i] * (1.0 + 1e-12))
                tail_decreasing = false;
        if (tail_decreasing && tail_ratio < 0.1)
            throw GrowthRejection(GrowthClause::quadratic_lower_bound,
                                  "kappa / (1 + t^2) decays toward zero on the tail");
        cert.quadratic_coeff = c;
        cert.s2_over_kappa_bound = 1.0 / c; // s^2/kappa <= s^2/(c(1+s^2)) <= 1/c
    }

    // Monotonicity of t / kappa(t) beyond a threshold; detect the smallest
    // grid threshold that certifies to the end of the grid.
    {
        const std::vector<double> grid = log_grid(1e-3, cert_max, 4000);
        std::vector<double> slope(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            slope[i] = grid[i] / kappa(grid[i]);
        // smallest grid index from which the slope is nonincreasing to the end
        std::size_t first_good = grid.size();
        for (std::size_t i = grid.size(); i-- > 1;) {
            if (slope[i] <= slope[i - 1] * (1.0 + 1e-12))
                first_good = i - 1;
            else
                break;
        }
        if (first_good == grid.size() || grid[first_good] > cert_max / 10.0)
            throw GrowthRejection(GrowthClause::monotonicity,
                                  "t / kappa(t) is not eventually nonincreasing");
        cert.t0_detected = first_good == 0 ? 0.0 : grid[first_good];
        cert.t0 = std::max(proposed_t0, cert.t0_detected);
    }

    // Divergence of the tail integral of t / kappa(t). Strong certificate:
    // s^2 / kappa(s) bounded below (comparison against c / t). Fallback:
    // dyadic condensation terms a_k = s_k^2 / kappa(s_k), s_k = 2^k, must not
    // decay faster than k^{-3/2}.
    {
        std::vector<double> a;
        for (int k = 4; k <= 40; ++k) {
            const double s = std::ldexp(1.0, k);
            a.push_back(s * s / kappa(s));
        }
        double tail_min = std::numeric_limits<double>::infinity();
        for (std::size_t i = a.size() - 10; i < a.size(); ++i)
            tail_min = std::min(tail_min, a[i]);
        // strong certificate: bounded below with no decay trend (kappa ~ t^2)
        if (tail_min >= 1e-8 && a.back() >= 0.5 * a.front()) {
            cert.divergence_by_comparison = true;
        } else {
            for (std::size_t i = 8; i + 1 < a.size(); ++i) {
                const double k = static_cast<double>(i + 4);
                const double floor = std::pow(k / (k + 1.0), 1.5);
                if (a[i + 1] < a[i] * floor)
                    throw GrowthRejection(
                        GrowthClause::divergence,
                        "tail integral of t / kappa(t) converges on the dyadic grid");
            }
        }
    }

    GrowthFunction gf(std::move(kappa), cert, table_max);
    gf.build_beta_table();
    return gf;
}

GrowthFunction::GrowthFunction(Fn kappa, Certificates cert, double table_max)
    : kappa_(std::move(kappa)), cert_(cert), table_max_(table_max) {}

void GrowthFunction::build_beta_table() {
    knots_.clear();
    knots_.push_back(0.0);
    knots_.push_back(1e-4);
    for (double t : log_grid(1e-3, table_max_, 400))
        knots_.push_back(t);

    beta_at_knots_.resize(knots_.size());
    beta_at_knots_[0] = 0.0;
    auto integrand = [this](double tau) { return tau / kappa_(tau); };
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        const QuadratureResult seg =
            integrate_adaptive(integrand, knots_[i - 1], knots_[i], 1e-14, 20000);
        beta_at_knots_[i] = beta_at_knots_[i - 1] + seg.value;
    }
}

double GrowthFunction::kappa(double t) const { return kappa_(t); }

double GrowthFunction::beta(double t) const {
    if (!(t >= 0.0))
        throw InputError("beta argument must be nonnegative");
    if (t == 0.0)
        return 0.0;
    if (t > table_max_)
        throw RangeError("beta argument exceeds the memo table ceiling");
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - knots_.begin()) - 1;
    auto integrand = [this](double tau) { return tau / kappa_(tau); };
    const QuadratureResult tail = integrate_adaptive(integrand, knots_[k], t, 1e-14, 20000);
    return beta_at_knots_[k] + tail.value;
}

double GrowthFunction::xi(double R) const {
    if (!(R >= 0.0))
        throw InputError("xi argument must be nonnegative");
    if (R == 0.0)
        return 0.0;
    if (R > beta_at_knots_.back())
        throw RangeError("no bracket for xi below table_max");

    auto hi_it = std::lower_bound(beta_at_knots_.begin(), beta_at_knots_.end(), R);
    std::size_t hi = static_cast<std::size_t>(hi_it - beta_at_knots_.begin());
    double lo_t = hi == 0 ? 0.0 : knots_[hi - 1];
    double hi_t = knots_[hi];
    double lo_b = hi == 0 ? 0.0 : beta_at_knots_[hi - 1];
    double hi_b = beta_at_knots_[hi];

    const double tol = 1e-12 * std::max(1.0, R);
    double t = lo_t + (hi_t - lo_t) * (R - lo_b) / std::max(hi_b - lo_b, 1e-300);
    for (int iter = 0; iter < 200; ++iter) {
        const double bt = beta(t);
        const double diff = bt - R;
        if (std::abs(diff) <= tol)
            return t;
        if (diff > 0.0) {
            hi_t = t;
            hi_b = bt;
        } else {
            lo_t = t;
            lo_b = bt;
        }
        // Newton step with bisection safeguard; beta' = t / kappa(t).
        const double deriv = t > 0.0 ? t / kappa_(t) : 0.0;
        double next = deriv > 0.0 ? t - diff / deriv : 0.0;
        if (!(next > lo_t && next < hi_t))
            next = 0.5 * (lo_t + hi_t);
        t = next;
    }
    throw SolverError("xi inversion did not converge");
}

GrowthFunction::CutoffSample GrowthFunction::cutoff(double R, double r) const {
    if (!(R > 0.0))
        throw InputError("cutoff radius must be positive");
    if (!(r >= 0.0))
        throw InputError("cutoff argument must be nonnegative");
    const double xi_R = xi(R);
    const double xi_2R = xi(2.0 * R);
    if (r <= xi_R)
        return {1.0, 0.0};
    if (r >= xi_2R)
        return {0.0, 0.0};
    return {2.0 - beta(r) / R, r / (R * kappa_(r))};
}

GrowthFunction validate_kappa(GrowthFunction::Fn kappa, double proposed_t0) {
    return GrowthFunction::validate(std::move(kappa), proposed_t0);
}

double beta(const GrowthFunction& gf, double t) { return gf.beta(t); }

double xi(const GrowthFunction& gf, double R) { return gf.xi(R); }

GrowthFunction::CutoffSample cutoff_eval(const GrowthFunction& gf, double R, double r) {
    return gf.cutoff(R, r);
}

GrowthFunction::CutoffSample CutoffProfile::eval(const GrowthFunction& gf, double r) const {
    if (!(r >= 0.0))
        throw InputError("cutoff argument must be nonnegative");
    if (r <= xi_R)
        return {1.0, 0.0};
    if (r >= xi_2R)
        return {0.0, 0.0};
    return {2.0 - gf.beta(r) / R, r / (R * gf.kappa(r))};
}

CutoffProfile make_cutoff_profile(const GrowthFunction& gf, double R) {
    if (!(R > 0.0))
        throw InputError("cutoff radius must be positive");
    return {R, gf.xi(R), gf.xi(2.0 * R)};
}

bool is_builtin_kappa(const std::string& id) {
    return id == "quad" || id == "quadlog" || id == "quadloglog" || id == "t2";
}

GrowthFunction builtin_kappa(const std::string& id) {
    if (id == "quad")
        return GrowthFunction::validate([](double t) { return 1.0 + t * t; }, 1.0);
    if (id == "quadlog")
        return GrowthFunction::validate(
            [](double t) { return (1.0 + t * t) * std::log1p(t) + 1.0; }, 2.0);
    if (id == "quadloglog")
        return GrowthFunction::validate(
            [](double t) {
                return (1.0 + t * t) * std::log1p(t) * std::log(std::log(3.0 + t)) + 1.0;
            },
            2.0);
    if (id == "t2")
        return GrowthFunction::validate([](double t) { return t * t; }, 1.0);
    throw InputError("unknown kappa id: " + id);
}

void write_cutoff_csv(std::ostream& out, const GrowthFunction& gf, double R,
                      std::span<const double> r_grid) {
    out << "r,psi,grad\n";
    const CutoffProfile profile = make_cutoff_profile(gf, R);
    char line[160];
    for (double r : r_grid) {
        const GrowthFunction::CutoffSample s = profile.eval(gf, r);
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", r, s.psi, s.grad_magnitude);
        out << line;
    }
}

} // namespace grimlab
