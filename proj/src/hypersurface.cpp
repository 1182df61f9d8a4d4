#include "grimlab/hypersurface.hpp"

#include <cmath>

namespace grimlab {

SurfaceJet SurfaceJet::zeros(int n) {
    SurfaceJet jet;
    jet.value = AmbientVector::Zero(n + 1);
    jet.d1 = Eigen::MatrixXd::Zero(n + 1, n);
    jet.d2.assign(static_cast<std::size_t>(n) * n, AmbientVector::Zero(n + 1));
    return jet;
}

double CurvatureFrame::sqrt_det_g() const {
    return std::sqrt(g.determinant());
}

namespace {

void check_point(const ParamSurface& surface, const ParamPoint& p, const AmbientVector& w) {
    const int n = surface.dim();
    if (p.size() != n)
        throw InputError("parameter point has wrong dimension");
    if (!p.allFinite())
        throw InputError("parameter point is not finite");
    if (w.size() != n + 1)
        throw InputError("translation direction has wrong dimension");
    if (std::abs(w.norm() - 1.0) > 1e-12)
        throw InputError("translation direction must be a unit vector");
    if (!surface.contains(p))
        throw DomainError("parameter point outside chart domain");
}

AmbientVector unit_normal(const Eigen::MatrixXd& d1, Orientation orient) {
    const int n = static_cast<int>(d1.cols());
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d1);
    if (qr.rank() < n)
        throw ImmersionFailure("first derivatives are linearly dependent");

    Eigen::MatrixXd q = qr.householderQ();
    AmbientVector nu = q.col(n);
    nu.normalize();

    Eigen::MatrixXd frame(n + 1, n + 1);
    frame.leftCols(n) = d1;
    frame.col(n) = nu;
    const double det = frame.determinant();
    const bool want_positive = orient == Orientation::positive;
    if ((det > 0.0) != want_positive)
        nu = -nu;
    return nu;
}

} // namespace

CurvatureFrame curvature_frame(const ParamSurface& surface, const ParamPoint& p,
                               const AmbientVector& w) {
    check_point(surface, p, w);
    const int n = surface.dim();

    const SurfaceJet jet = surface.jet(p);
    if (!jet.value.allFinite() || !jet.d1.allFinite())
        throw ImmersionFailure("jet is not finite");

    CurvatureFrame frame;
    frame.g = jet.d1.transpose() * jet.d1;

    Eigen::LLT<Eigen::MatrixXd> llt(frame.g);
    if (llt.info() != Eigen::Success)
        throw ImmersionFailure("metric is not positive definite");
    frame.g_inv = llt.solve(Eigen::MatrixXd::Identity(n, n));

    frame.nu = unit_normal(jet.d1, surface.orientation());

    frame.A.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double a = -frame.nu.dot(jet.second(i, j));
            frame.A(i, j) = a;
            frame.A(j, i) = a;
        }
    if (!frame.A.allFinite())
        throw ImmersionFailure("second fundamental form is not finite");

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(frame.A, frame.g);
    if (eig.info() != Eigen::Success)
        throw ImmersionFailure("principal curvature pencil did not converge");
    frame.principal = eig.eigenvalues();

    frame.H = frame.principal.sum();
    frame.normA2 = frame.principal.squaredNorm();
    frame.S = frame.H * frame.H - frame.normA2;

    frame.f = -jet.value.dot(w);
    Eigen::VectorXd df(n);
    for (int i = 0; i < n; ++i)
        df(i) = -jet.d1.col(i).dot(w);
    frame.grad_f = frame.g_inv * df;
    return frame;
}

double soliton_residual(const ParamSurface& surface, const ParamPoint& p,
                        const AmbientVector& w) {
    const CurvatureFrame frame = curvature_frame(surface, p, w);
    return frame.H + frame.nu.dot(w);
}

double weighted_density(const ParamSurface& surface, const ParamPoint& p,
                        const AmbientVector& w) {
    check_point(surface, p, w);
    const SurfaceJet jet = surface.jet(p);
    return std::exp(jet.value.dot(w));
}

NumericJetSurface::NumericJetSurface(int n, ValueFn value, DomainFn domain, double step,
                                     Orientation orient)
    : n_(n), value_(std::move(value)), domain_(std::move(domain)), step_(step),
      orient_(orient) {
    if (n_ < 2)
        throw InputError("surface dimension must be at least 2");
    if (step_ <= 0.0)
        throw InputError("finite-difference step must be positive");
}

bool NumericJetSurface::contains(const ParamPoint& p) const {
    return domain_ ? domain_(p) : true;
}

SurfaceJet NumericJetSurface::jet(const ParamPoint& p) const {
    auto eval = [&](const ParamPoint& q) -> AmbientVector {
        if (!contains(q))
            throw DomainError("finite-difference stencil left the chart domain");
        return value_(q);
    };

    auto shifted = [&](int i, double si, int j, double sj) {
        ParamPoint q = p;
        q(i) += si;
        if (j >= 0)
            q(j) += sj;
        return eval(q);
    };

    SurfaceJet jet = SurfaceJet::zeros(n_);
    jet.value = eval(p);

    std::vector<double> h(n_);
    for (int i = 0; i < n_; ++i)
        h[i] = step_ * std::max(1.0, std::abs(p(i)));

    for (int i = 0; i < n_; ++i) {
        const AmbientVector fp1 = shifted(i, h[i], -1, 0.0);
        const AmbientVector fm1 = shifted(i, -h[i], -1, 0.0);
        const AmbientVector fp2 = shifted(i, 2.0 * h[i], -1, 0.0);
        const AmbientVector fm2 = shifted(i, -2.0 * h[i], -1, 0.0);

        jet.d1.col(i) = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h[i]);
        jet.second(i, i) =
            (-fp2 + 16.0 * fp1 - 30.0 * jet.value + 16.0 * fm1 - fm2) / (12.0 * h[i] * h[i]);
    }

    // Mixed partials: cross stencil at (h, k) Richardson-combined with (h/2, k/2).
    auto cross = [&](int i, int j, double hi, double hj) {
        const AmbientVector fpp = shifted(i, hi, j, hj);
        const AmbientVector fpm = shifted(i, hi, j, -hj);
        const AmbientVector fmp = shifted(i, -hi, j, hj);
        const AmbientVector fmm = shifted(i, -hi, j, -hj);
        return AmbientVector((fpp - fpm - fmp + fmm) / (4.0 * hi * hj));
    };
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) {
            const AmbientVector coarse = cross(i, j, h[i], h[j]);
            const AmbientVector fine = cross(i, j, 0.5 * h[i], 0.5 * h[j]);
            const AmbientVector mixed = (16.0 * fine - coarse) / 15.0;
            jet.second(i, j) = mixed;
            jet.second(j, i) = mixed;
        }
    return jet;
}

} // namespace grimlab
