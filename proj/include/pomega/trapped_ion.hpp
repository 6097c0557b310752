#pragma once

#include <complex>

#include <Eigen/Dense>

#include "pomega/numerics.hpp"

namespace pomega::ion {

using numerics::cd;

// Laser-driven trapped ion with a third-order vibrational nonlinearity.
// hbar and the effective coupling epsilon are scaled out; all times in the
// API are the dimensionless tau = epsilon * t.
struct IonParams {
    double epsilon = 1.0; // effective coupling, rad/time (absorbed into tau)
    double eta = 1.0;     // Lamb-Dicke parameter
    int cutoff = 200;     // Fock-space dimension
};

// Operator on the truncated Fock space; basis is the number states
// |0>, ..., |cutoff-1> throughout.
struct FockOperator {
    Eigen::MatrixXcd matrix;

    Eigen::Index cutoff() const { return matrix.rows(); }
};

// f3(n; eta) = e^{-eta^2/2} * n!/(n+3)! * L_n^{(3)}(eta^2).
double f3_coefficient(int n, double eta);

// H3 = i eta^3 sum_n g3(n;eta) (|n+3><n| - |n><n+3|), hbar*epsilon = 1,
// with g3(n;eta) = f3(n;eta) * sqrt((n+1)(n+2)(n+3)).
FockOperator build_h3(const IonParams& p);

// U(tau) = expm(-i tau H3).
FockOperator evolve(const IonParams& p, double tau);

// Displacement operator D(beta) from the associated-Laguerre closed form.
FockOperator displacement_matrix(cd beta, int cutoff);

// Two-time characteristic function at times (0, tau) for Fock input |p_in>:
// Phi = sum_{m,n<=p} beta1^n (-beta1*)^m / (m! n!) *
//       p! <p-n| U^dag D(beta2) U |p-m> / sqrt((p-n)!(p-m)!) * e^{|beta2|^2/2}.
cd mtcf_zero_t(const IonParams& p, int input_n, cd beta1, cd beta2,
               double tau);

// DeltaPhi = |Phi|^2 - e^{|beta1|^2 + |beta2|^2}; positive values certify
// growth beyond the two-mode single-time bound.
double delta_phi(const IonParams& p, int input_n, cd beta1, cd beta2,
                 double tau);

// Spectral cache for repeated evolution at many times: U(tau) via one
// Hermitian eigendecomposition of H3.  Immutable after construction.
class IonDynamics {
public:
    explicit IonDynamics(const IonParams& p);

    const IonParams& params() const { return params_; }
    FockOperator evolve(double tau) const;

    // First `block` columns of U(tau).
    Eigen::MatrixXcd evolved_columns(double tau, int block) const;

    // <j| U^dag D(beta2) U |k> for j,k = 0..block-1.
    Eigen::MatrixXcd displaced_block(cd beta2, double tau, int block) const;

private:
    IonParams params_;
    Eigen::VectorXd frequencies_;
    Eigen::MatrixXcd modes_;
};

// DeltaPhi over a (phi, tau) grid at fixed |beta1| = |beta2| = beta_mod and
// phi1 = phi2 = phi, input state |input_n>.  Row-major: rows = phi values,
// columns = tau values.
Eigen::MatrixXd scan_delta_phi(const IonParams& p, int input_n,
                               double beta_mod,
                               const Eigen::VectorXd& phi_values,
                               const Eigen::VectorXd& tau_values);

} // namespace pomega::ion
