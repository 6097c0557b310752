#include "pomega/trapped_ion.hpp"

#include <cmath>
#include <stdexcept>

namespace pomega::ion {

namespace {

double g3_coefficient(int n, double eta) {
    const double nd = n;
    return f3_coefficient(n, eta) *
           std::sqrt((nd + 1.0) * (nd + 2.0) * (nd + 3.0));
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

} // namespace

double f3_coefficient(int n, double eta) {
    if (n < 0) throw std::invalid_argument("f3_coefficient: n must be >= 0");
    const double x = eta * eta;
    const double ratio =
        1.0 / ((n + 1.0) * (n + 2.0) * (n + 3.0)); // n!/(n+3)!
    return std::exp(-0.5 * x) * ratio * std::assoc_laguerre(n, 3, x);
}

FockOperator build_h3(const IonParams& p) {
    if (p.cutoff < 8) throw std::invalid_argument("build_h3: cutoff < 8");
    const double eta3 = p.eta * p.eta * p.eta;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(p.cutoff, p.cutoff);
    for (int n = 0; n + 3 < p.cutoff; ++n) {
        const cd coupling = cd(0.0, eta3 * g3_coefficient(n, p.eta));
        h(n + 3, n) = coupling;
        h(n, n + 3) = -coupling;
    }
    return {h};
}

FockOperator evolve(const IonParams& p, double tau) {
    const FockOperator h = build_h3(p);
    return {numerics::expm(cd(0.0, -tau) * h.matrix)};
}

FockOperator displacement_matrix(cd beta, int cutoff) {
    if (cutoff < 8)
        throw std::invalid_argument("displacement_matrix: cutoff < 8");
    if (std::abs(beta) > 6.0)
        throw std::invalid_argument("displacement_matrix: |beta| > 6");
    if (beta == cd(0.0, 0.0))
        return {Eigen::MatrixXcd::Identity(cutoff, cutoff)};

    const double x = std::norm(beta);
    const double log_mod = std::log(std::abs(beta));
    const cd phase = beta / std::abs(beta);
    Eigen::MatrixXcd d(cutoff, cutoff);
    for (int m = 0; m < cutoff; ++m) {
        for (int n = 0; n < cutoff; ++n) {
            const int lo = std::min(m, n);
            const int k = std::abs(m - n);
            const double magnitude =
                std::exp(0.5 * (log_factorial(lo) - log_factorial(lo + k)) +
                         k * log_mod - 0.5 * x) *
                std::assoc_laguerre(lo, k, x);
            // beta^{m-n} for m >= n, (-conj(beta))^{n-m} otherwise
            const cd dir = (m >= n) ? std::pow(phase, k)
                                    : std::pow(-std::conj(phase), k);
            d(m, n) = magnitude * dir;
        }
    }
    return {d};
}

IonDynamics::IonDynamics(const IonParams& p) : params_(p) {
    const FockOperator h = build_h3(p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("IonDynamics: eigensolver failed");
    frequencies_ = solver.eigenvalues();
    modes_ = solver.eigenvectors();
}

FockOperator IonDynamics::evolve(double tau) const {
    const Eigen::VectorXcd phases =
        (cd(0.0, -tau) * frequencies_.cast<cd>()).array().exp();
    return {modes_ * phases.asDiagonal() * modes_.adjoint()};
}

Eigen::MatrixXcd IonDynamics::evolved_columns(double tau, int block) const {
    const Eigen::VectorXcd phases =
        (cd(0.0, -tau) * frequencies_.cast<cd>()).array().exp();
    return modes_ * (phases.asDiagonal() * modes_.adjoint().leftCols(block));
}

Eigen::MatrixXcd IonDynamics::displaced_block(cd beta2, double tau,
                                              int block) const {
    const Eigen::MatrixXcd cols = evolved_columns(tau, block);
    const FockOperator d = displacement_matrix(beta2, params_.cutoff);
    return cols.adjoint() * (d.matrix * cols);
}

namespace {

cd mtcf_from_block(const Eigen::MatrixXcd& block, int p_in, cd beta1,
                   cd beta2) {
    cd sum = 0.0;
    for (int n = 0; n <= p_in; ++n) {
        for (int m = 0; m <= p_in; ++m) {
            const double weight =
                std::exp(log_factorial(p_in) -
                         0.5 * (log_factorial(p_in - n) +
                                log_factorial(p_in - m)) -
                         log_factorial(m) - log_factorial(n));
            sum += std::pow(beta1, n) * std::pow(-std::conj(beta1), m) *
                   weight * block(p_in - n, p_in - m);
        }
    }
    return sum * std::exp(0.5 * std::norm(beta2));
}

} // namespace

cd mtcf_zero_t(const IonParams& p, int input_n, cd beta1, cd beta2,
               double tau) {
    if (input_n < 0 || input_n > p.cutoff / 4)
        throw std::invalid_argument("mtcf_zero_t: need 0 <= input_n <= cutoff/4");
    const IonDynamics dynamics(p);
    const Eigen::MatrixXcd block =
        dynamics.displaced_block(beta2, tau, input_n + 1);
    return mtcf_from_block(block, input_n, beta1, beta2);
}

double delta_phi(const IonParams& p, int input_n, cd beta1, cd beta2,
                 double tau) {
    const cd phi = mtcf_zero_t(p, input_n, beta1, beta2, tau);
    return std::norm(phi) - std::exp(std::norm(beta1) + std::norm(beta2));
}

Eigen::MatrixXd scan_delta_phi(const IonParams& p, int input_n,
                               double beta_mod,
                               const Eigen::VectorXd& phi_values,
                               const Eigen::VectorXd& tau_values) {
    if (input_n < 0 || input_n > p.cutoff / 4)
        throw std::invalid_argument("scan_delta_phi: need 0 <= input_n <= cutoff/4");
    const IonDynamics dynamics(p);
    const int block = input_n + 1;

    // Evolution columns U(tau)|k>, k < block, stacked side by side per tau.
    Eigen::MatrixXcd evolved(p.cutoff, block * tau_values.size());
    for (Eigen::Index it = 0; it < tau_values.size(); ++it)
        evolved.middleCols(it * block, block) =
            dynamics.evolved_columns(tau_values[it], block);

    // <m|D(b e^{i phi})|n> = <m|D(b)|n> e^{i phi (m-n)}, so one Laguerre
    // build at phi=0 covers the whole phase scan.
    const FockOperator d0 = displacement_matrix(cd(beta_mod, 0.0), p.cutoff);
    const double bound = std::exp(2.0 * beta_mod * beta_mod);

    Eigen::MatrixXd out(phi_values.size(), tau_values.size());
    for (Eigen::Index ip = 0; ip < phi_values.size(); ++ip) {
        const double phi = phi_values[ip];
        const cd beta = std::polar(beta_mod, phi);
        Eigen::VectorXcd twist(p.cutoff);
        for (int n = 0; n < p.cutoff; ++n)
            twist(n) = std::polar(1.0, -phi * n);
        const Eigen::MatrixXcd cols = twist.asDiagonal() * evolved;
        const Eigen::MatrixXcd displaced = d0.matrix * cols;
        for (Eigen::Index it = 0; it < tau_values.size(); ++it) {
            const Eigen::MatrixXcd g =
                cols.middleCols(it * block, block).adjoint() *
                displaced.middleCols(it * block, block);
            const cd phi_val = mtcf_from_block(g, input_n, beta, beta);
            out(ip, it) = std::norm(phi_val) - bound;
        }
    }
    return out;
}

} // namespace pomega::ion
