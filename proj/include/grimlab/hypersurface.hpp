#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "grimlab/errors.hpp"

namespace grimlab {

using AmbientVector = Eigen::VectorXd; // point or direction in R^{n+1}
using ParamPoint = Eigen::VectorXd;    // chart coordinates in R^n

// Sign of det(d1_1, ..., d1_n, nu): the normal is the unique unit vector
// completing the coordinate frame with the requested determinant sign.
enum class Orientation { positive, negative };

// Value and first/second partials of an embedding at one chart point.
struct SurfaceJet {
    AmbientVector value;           // Phi(p), length n+1
    Eigen::MatrixXd d1;            // (n+1) x n, column i = dPhi/dp_i
    std::vector<AmbientVector> d2; // n*n entries, row-major, symmetric in (i,j)

    int dim() const { return static_cast<int>(d1.cols()); }

    const AmbientVector& second(int i, int j) const { return d2[i * dim() + j]; }
    AmbientVector& second(int i, int j) { return d2[i * dim() + j]; }

    static SurfaceJet zeros(int n);
};

// An n-dimensional parametrized hypersurface in R^{n+1}.
class ParamSurface {
public:
    virtual ~ParamSurface() = default;

    virtual int dim() const = 0; // intrinsic dimension n >= 2
    int ambient_dim() const { return dim() + 1; }

    virtual bool contains(const ParamPoint& p) const = 0;
    virtual SurfaceJet jet(const ParamPoint& p) const = 0;
    virtual Orientation orientation() const { return Orientation::positive; }
};

// Per-point extrinsic package.
//
// Convention: A_ij = <dPhi_i, ambient derivative of nu along dp_j> =
// -<d2Phi_ij, nu>, so the downward-oriented grim chart carries
// H(t) = cos t > 0 and the translator identity reads H = -<nu, w>.
struct CurvatureFrame {
    Eigen::MatrixXd g;      // first fundamental form
    Eigen::MatrixXd g_inv;  // inverse metric
    AmbientVector nu;       // unit normal, orientation-fixed
    Eigen::MatrixXd A;      // second fundamental form (see convention above)
    Eigen::VectorXd principal; // eigenvalues of g^{-1} A, ascending
    double H = 0.0;         // sum of principal curvatures
    double normA2 = 0.0;    // sum of squared principal curvatures
    double S = 0.0;         // scalar curvature, H^2 - normA2
    double f = 0.0;         // -<Phi(p), w>
    Eigen::VectorXd grad_f; // contravariant chart components of the tangential gradient of f

    double sqrt_det_g() const;
};

// Full extrinsic frame at p for translation direction w (unit).
// Throws DomainError if p leaves the chart, ImmersionFailure on a
// degenerate metric, InputError on malformed p or w.
CurvatureFrame curvature_frame(const ParamSurface& surface, const ParamPoint& p,
                               const AmbientVector& w);

// H + <nu, w>; zero iff the translator equation holds at p for the
// orientation chosen by curvature_frame.
double soliton_residual(const ParamSurface& surface, const ParamPoint& p,
                        const AmbientVector& w);

// e^{-f} at Phi(p) with f = -<Phi(p), w>.
double weighted_density(const ParamSurface& surface, const ParamPoint& p,
                        const AmbientVector& w);

// Wraps a value-only parametrization with finite-difference jets:
// 5-point central stencils for d1 and the d2 diagonal, Richardson-extrapolated
// cross stencils for mixed partials. Step is scaled by parameter magnitude.
class NumericJetSurface final : public ParamSurface {
public:
    using ValueFn = std::function<AmbientVector(const ParamPoint&)>;
    using DomainFn = std::function<bool(const ParamPoint&)>;

    NumericJetSurface(int n, ValueFn value, DomainFn domain, double step = 1e-4,
                      Orientation orient = Orientation::positive);

    int dim() const override { return n_; }
    bool contains(const ParamPoint& p) const override;
    SurfaceJet jet(const ParamPoint& p) const override;
    Orientation orientation() const override { return orient_; }

private:
    int n_;
    ValueFn value_;
    DomainFn domain_;
    double step_;
    Orientation orient_;
};

} // namespace grimlab
