#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>

#include <Eigen/Dense>

namespace pomega::numerics {

using cd = std::complex<double>;

struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotSymmetric : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NotPSD : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 0.0;
    int max_subdivisions = 2000;
};

// Adaptive Gauss-Kronrod (G7/K15) quadrature of a complex-valued integrand
// on [a, b].  Throws NonConvergence when the subdivision budget is exhausted
// before the error estimate meets max(abs_tol, rel_tol*|result|).
cd integrate_1d(const std::function<cd(double)>& f, double a, double b,
                const QuadratureSpec& spec = {});

struct SymEigResult {
    Eigen::VectorXd eigenvalues;  // ascending
    Eigen::MatrixXd eigenvectors; // columns, orthonormal
};

// Real-symmetric eigendecomposition.  Eigenvalues ascending; each
// eigenvector's sign is fixed by making its largest-magnitude entry positive.
SymEigResult eig_sym(const Eigen::MatrixXd& a);

// Dense matrix exponential.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a);

// Deterministic random stream.  Identical seeds give bit-identical streams;
// the uniform doubles are built from raw engine words so the stream does not
// depend on library distribution internals.
class RngState {
public:
    explicit RngState(std::uint64_t seed);

    // Derives an independent substream (master seed + stream index).
    RngState substream(std::uint64_t index) const;

    double uniform();      // [0, 1)
    double normal();       // standard normal, Box-Muller with cached spare

private:
    RngState(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t seed_;
    std::uint64_t next_state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// One draw from N(mean, cov) for a 2x2 PSD covariance.  Degenerate
// covariances are handled (cov = 0 returns the mean).  Throws NotPSD.
Eigen::Vector2d sample_bivariate_normal(const Eigen::Vector2d& mean,
                                        const Eigen::Matrix2d& cov,
                                        RngState& rng);

} // namespace pomega::numerics
