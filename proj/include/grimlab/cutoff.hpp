#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "grimlab/errors.hpp"

namespace grimlab {

enum class GrowthClause { positivity, quadratic_lower_bound, monotonicity, divergence };

const char* growth_clause_name(GrowthClause clause);

// Validation failure naming the violated hypothesis clause.
struct GrowthRejection : std::runtime_error {
    GrowthRejection(GrowthClause clause, const std::string& what);
    GrowthClause clause;
};

// A validated growth function kappa: R+ -> R+ with
//   * kappa > 0, bounded below by kappa_min near 0,
//   * kappa >= c (1 + t^2) on the certification grid,
//   * t / kappa(t) nonincreasing on [t0, infinity) (grid-certified),
//   * divergent tail integral of t / kappa(t) (grid-certified),
// together with the cumulative integral beta(t) = \int_0^t tau/kappa and its
// inverse xi. The beta table is built at construction and read-only afterward.
class GrowthFunction {
public:
    using Fn = std::function<double(double)>;

    struct Certificates {
        double t0 = 0.0;              // effective monotonicity threshold
        double t0_detected = 0.0;     // smallest grid threshold that works
        double kappa_min = 0.0;       // min kappa on [0, t0]
        double quadratic_coeff = 0.0; // c with kappa >= c (1 + t^2) on the grid
        double s2_over_kappa_bound = 0.0; // certified bound on s^2 / kappa(s)
        bool divergence_by_comparison = false; // strong c/t comparison held
    };

    // validate_kappa: certify the hypotheses on finite grids; throws
    // GrowthRejection (clause named) when one fails. table_max bounds the
    // beta memo table and hence the reachable xi range.
    static GrowthFunction validate(Fn kappa, double proposed_t0, double table_max = 1e6);

    double kappa(double t) const;
    double beta(double t) const;
    double xi(double R) const; // RangeError if beta never reaches R below table_max

    struct CutoffSample {
        double psi = 0.0;
        double grad_magnitude = 0.0;
    };
    // psi_R(r): 1 on [0, xi(R)], 2 - beta(r)/R on the annulus, 0 beyond
    // xi(2R); gradient magnitude r / (R kappa(r)) on the annulus.
    CutoffSample cutoff(double R, double r) const;

    const Certificates& certificates() const { return cert_; }
    double table_max() const { return table_max_; }

private:
    GrowthFunction(Fn kappa, Certificates cert, double table_max);
    void build_beta_table();

    Fn kappa_;
    Certificates cert_;
    double table_max_;
    std::vector<double> knots_;
    std::vector<double> beta_at_knots_;
};

// Spec-op spellings.
GrowthFunction validate_kappa(GrowthFunction::Fn kappa, double proposed_t0);
double beta(const GrowthFunction& gf, double t);
double xi(const GrowthFunction& gf, double R);
GrowthFunction::CutoffSample cutoff_eval(const GrowthFunction& gf, double R, double r);

// Frozen cutoff data for one radius.
struct CutoffProfile {
    double R = 0.0;
    double xi_R = 0.0;
    double xi_2R = 0.0;
    GrowthFunction::CutoffSample eval(const GrowthFunction& gf, double r) const;
};

CutoffProfile make_cutoff_profile(const GrowthFunction& gf, double R);

// Shipped family: "quad" = 1 + t^2, "quadlog" = (1+t^2) ln(1+t) + 1,
// "quadloglog" = (1+t^2) ln(1+t) ln ln(3+t) + 1, "t2" = t^2 (rejected:
// the beta integrand 1/t is not integrable at 0).
GrowthFunction builtin_kappa(const std::string& id);
bool is_builtin_kappa(const std::string& id);

// CSV columns: r, psi, grad.
void write_cutoff_csv(std::ostream& out, const GrowthFunction& gf, double R,
                      std::span<const double> r_grid);

} // namespace grimlab
