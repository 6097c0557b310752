#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "pomega/numerics.hpp"

namespace pomega::parametric {

using numerics::cd;

struct TimeOrderViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Degenerate parametric oscillator with pump-signal frequency mismatch.
// All times in the API are the dimensionless tau = 2*kappa*t/pi.
struct ParametricParams {
    double kappa = 1.0; // coupling, rad/time
    double delta = 0.0; // mismatch, rad/time

    double r() const { return delta / kappa; }
    // Eigenfrequency pi*sqrt(16-r^2)/4; imaginary for r > 4, so kept complex.
    cd theta_r() const {
        const double rr = r();
        return 0.25 * M_PI * std::sqrt(cd(16.0 - rr * rr, 0.0));
    }
};

// Coefficients of the linear input-output relation a(tau) = u1 a + u2 a^dag.
struct BogoliubovPair {
    cd u1;
    cd u2;
    double tau = 0.0;
};

// Gaussian characteristic function Phi = exp[v^T Q v] with
// v = (Re b1, Im b1[, Re b2, Im b2]); vacuum input, so no linear term.
struct GaussianForm {
    Eigen::MatrixXd Q; // symmetric, dim 2 or 4

    Eigen::Index dim() const { return Q.rows(); }
};

// Normal coordinates of a GaussianForm: S orthogonal with
// S^T Q S = diag(-c_1, ..., -c_dim).
struct DiagonalizedForm {
    Eigen::MatrixXd S;
    Eigen::VectorXd c;
};

BogoliubovPair solve_bogoliubov(const ParametricParams& p, double tau);

// 2x2 coefficient matrix of the single-time characteristic function.
GaussianForm single_time_form(const ParametricParams& p, double tau);

// Closed-form 2x2 diagonalization (eig_sym fallback when the off-diagonal
// entry degenerates); eig_sym for dim 4.
DiagonalizedForm diagonalize_form(const GaussianForm& form);

// Filtered single-time quasiprobability at alpha, product-triangular filter
// of width w applied in the normal coordinates of the Gaussian form.
double p_omega_single(const ParametricParams& p, double tau, cd alpha,
                      double w);

// [a(tau), a(tau+dtau)] = u1(tau) u2(tau+dtau) - u2(tau) u1(tau+dtau).
cd commutator_two_time(const ParametricParams& p, double tau, double dtau);

// |Phi_TO / Phi_NO| = exp{-Re[conj(b1) conj(b2) [a(tau), a(tau+dtau)]]}.
double time_ordering_ratio(const ParametricParams& p, cd beta1, cd beta2,
                           double tau, double dtau);

// 4x4 coefficient matrix of the two-time characteristic function at
// (tau1, tau2), tau1 <= tau2, vacuum input, time-ordered prescription.
GaussianForm two_time_form(const ParametricParams& p, double tau1,
                           double tau2);

// Filtered two-time quasiprobability: diagonalize the 4x4 form, rotate the
// Fourier phase vector into normal coordinates, factor into four 1D
// T evaluations.
double p_omega_two_time(const ParametricParams& p, double tau1, double tau2,
                        cd alpha1, cd alpha2, double w);

} // namespace pomega::parametric
