#include "pomega/parametric.hpp"

#include <cmath>

#include "pomega/filters.hpp"

namespace pomega::parametric {

namespace {

// sinh(z)/z, stable near z = 0.
cd sinch(cd z) {
    if (std::abs(z) < 1e-4) {
        const cd z2 = z * z;
        return 1.0 + z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sinh(z) / z;
}

// Common fold: P = prod_j w * T(w y_j, w^2 c_j) with y = S^T h, where h is
// the Fourier phase vector of exp(2i h.v).
double fold_t_product(const GaussianForm& form, const Eigen::VectorXd& h,
                      double w) {
    const DiagonalizedForm diag = diagonalize_form(form);
    const Eigen::VectorXd y = diag.S.transpose() * h;
    double value = 1.0;
    for (Eigen::Index j = 0; j < y.size(); ++j)
        value *= w * filters::t_function({w * y[j], cd(w * w * diag.c[j])});
    return value;
}

} // namespace

BogoliubovPair solve_bogoliubov(const ParametricParams& p, double tau) {
    const double r = p.r();
    const cd theta = p.theta_r();
    const cd phase = std::exp(cd(0.0, -0.25 * M_PI * r * tau));
    const cd z = theta * tau;
    const cd sinh_over_theta = tau * sinch(z); // sinh(theta*tau)/theta
    BogoliubovPair pair;
    pair.u1 = phase * (std::cosh(z) +
                       cd(0.0, 0.25 * M_PI * r) * sinh_over_theta);
    pair.u2 = cd(0.0, -M_PI) * phase * sinh_over_theta;
    pair.tau = tau;
    return pair;
}

GaussianForm single_time_form(const ParametricParams& p, double tau) {
    const BogoliubovPair b = solve_bogoliubov(p, tau);
    GaussianForm form;
    form.Q.resize(2, 2);
    form.Q(0, 0) = 0.5 * (1.0 - std::norm(std::conj(b.u2) - b.u1));
    form.Q(1, 1) = 0.5 * (1.0 - std::norm(std::conj(b.u2) + b.u1));
    form.Q(0, 1) = (b.u1 * b.u2).imag();
    form.Q(1, 0) = form.Q(0, 1);
    return form;
}

DiagonalizedForm diagonalize_form(const GaussianForm& form) {
    const Eigen::MatrixXd& q = form.Q;
    if (q.rows() == 2 && std::abs(q(0, 1)) >= 1e-12) {
        // Closed-form normal coordinates of the 2x2 form.
        const double a = q(0, 0);
        const double d = q(0, 1);
        const double re = 0.5 * (q(0, 0) - q(1, 1)); // Re of the squeeze term
        const double mag = std::hypot(re, d);
        const double b_plus = (-re + mag) / d;
        const double b_minus = (-re - mag) / d;
        const double c_plus = -a + 2.0 * mag / (1.0 + b_plus * b_plus);
        const double c_minus = -a - 2.0 * mag / (1.0 + b_minus * b_minus);
        DiagonalizedForm out;
        out.S.resize(2, 2);
        out.S.col(0) = Eigen::Vector2d(-b_plus, 1.0).normalized();
        out.S.col(1) = Eigen::Vector2d(-b_minus, 1.0).normalized();
        out.c = Eigen::Vector2d(c_plus, c_minus);
        for (int j = 0; j < 2; ++j) {
            Eigen::Index imax = 0;
            out.S.col(j).cwiseAbs().maxCoeff(&imax);
            if (out.S(imax, j) < 0.0) out.S.col(j) *= -1.0;
        }
        return out;
    }
    const numerics::SymEigResult eig = numerics::eig_sym(q);
    return {eig.eigenvectors, -eig.eigenvalues};
}

double p_omega_single(const ParametricParams& p, double tau, cd alpha,
                      double w) {
    if (!(w > 0.0)) throw std::invalid_argument("p_omega_single: w must be > 0");
    const GaussianForm form = single_time_form(p, tau);
    const Eigen::Vector2d h(alpha.imag(), -alpha.real());
    return fold_t_product(form, h, w);
}

cd commutator_two_time(const ParametricParams& p, double tau, double dtau) {
    if (dtau < 0.0)
        throw std::invalid_argument("commutator_two_time: dtau must be >= 0");
    const BogoliubovPair a = solve_bogoliubov(p, tau);
    const BogoliubovPair b = solve_bogoliubov(p, tau + dtau);
    return a.u1 * b.u2 - a.u2 * b.u1;
}

double time_ordering_ratio(const ParametricParams& p, cd beta1, cd beta2,
                           double tau, double dtau) {
    const cd comm = commutator_two_time(p, tau, dtau);
    return std::exp(-(std::conj(beta1) * std::conj(beta2) * comm).real());
}

GaussianForm two_time_form(const ParametricParams& p, double tau1,
                           double tau2) {
    if (tau1 > tau2)
        throw TimeOrderViolation("two_time_form: requires tau1 <= tau2");
    const BogoliubovPair a = solve_bogoliubov(p, tau1);
    const BogoliubovPair b = solve_bogoliubov(p, tau2);

    GaussianForm form;
    form.Q = Eigen::MatrixXd::Zero(4, 4);
    form.Q.block<2, 2>(0, 0) = single_time_form(p, tau1).Q;
    form.Q.block<2, 2>(2, 2) = single_time_form(p, tau2).Q;

    // Cross terms of the time-ordered vacuum expectation: the pair-creation
    // coupling u2(tau1) u1(tau2) and the excitation overlap u2*(tau1) u2(tau2).
    const cd pair_term = a.u2 * b.u1;
    const cd overlap = std::conj(a.u2) * b.u2;
    Eigen::Matrix2d cross;
    cross << pair_term.real() - overlap.real(),
             pair_term.imag() - overlap.imag(),
             pair_term.imag() + overlap.imag(),
             -(pair_term.real() + overlap.real());
    form.Q.block<2, 2>(0, 2) = cross;
    form.Q.block<2, 2>(2, 0) = cross.transpose();
    return form;
}

double p_omega_two_time(const ParametricParams& p, double tau1, double tau2,
                        cd alpha1, cd alpha2, double w) {
    if (!(w > 0.0))
        throw std::invalid_argument("p_omega_two_time: w must be > 0");
    const GaussianForm form = two_time_form(p, tau1, tau2);
    Eigen::Vector4d h;
    h << alpha1.imag(), -alpha1.real(), alpha2.imag(), -alpha2.real();
    return fold_t_product(form, h, w);
}

} // namespace pomega::parametric
