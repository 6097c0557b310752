#include "pomega/numerics.hpp"

#include <cmath>
#include <queue>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

namespace pomega::numerics {

namespace {

// 15-point Kronrod extension of 7-point Gauss, positive abscissae.
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767,
    0.3818300505051189, 0.4179591836734694};

struct Segment {
    double a, b;
    cd value;
    double error;
};

Segment eval_gk15(const std::function<cd(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    cd kronrod = kWgk[7] * f(mid);
    cd gauss = kWg[3] * f(mid);
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        const cd pair = f(mid - dx) + f(mid + dx);
        kronrod += kWgk[i] * pair;
        if (i % 2 == 1) gauss += kWg[i / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

} // namespace

cd integrate_1d(const std::function<cd(double)>& f, double a, double b,
                const QuadratureSpec& spec) {
    if (!(a <= b)) throw std::invalid_argument("integrate_1d: a > b");
    if (spec.abs_tol <= 0 || spec.rel_tol < 0 || spec.max_subdivisions < 1)
        throw std::invalid_argument("integrate_1d: bad QuadratureSpec");
    if (a == b) return cd(0.0, 0.0);

    auto worse = [](const Segment& s, const Segment& t) {
        return s.error < t.error;
    };
    std::priority_queue<Segment, std::vector<Segment>, decltype(worse)>
        queue(worse);

    Segment whole = eval_gk15(f, a, b);
    cd total = whole.value;
    double err = whole.error;
    queue.push(whole);

    auto tolerance = [&](void) {
        return std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
    };

    for (int n = 0; err > tolerance(); ++n) {
        if (n >= spec.max_subdivisions)
            throw NonConvergence("integrate_1d: subdivision limit reached");
        Segment s = queue.top();
        queue.pop();
        const double mid = 0.5 * (s.a + s.b);
        Segment left = eval_gk15(f, s.a, mid);
        Segment right = eval_gk15(f, mid, s.b);
        total += left.value + right.value - s.value;
        err += left.error + right.error - s.error;
        queue.push(left);
        queue.push(right);
    }
    return total;
}

SymEigResult eig_sym(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols())
        throw NotSymmetric("eig_sym: matrix not square");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw NotSymmetric("eig_sym: matrix not symmetric");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eig_sym: eigensolver failed");

    SymEigResult res{solver.eigenvalues(), solver.eigenvectors()};
    for (Eigen::Index j = 0; j < res.eigenvectors.cols(); ++j) {
        Eigen::Index imax = 0;
        res.eigenvectors.col(j).cwiseAbs().maxCoeff(&imax);
        if (res.eigenvectors(imax, j) < 0.0) res.eigenvectors.col(j) *= -1.0;
    }
    return res;
}

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("expm: matrix not square");
    if (!a.allFinite())
        throw std::invalid_argument("expm: non-finite entries");
    Eigen::MatrixXcd result = a.exp();
    if (!result.allFinite())
        throw std::runtime_error("expm: overflow in matrix exponential");
    return result;
}

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace

RngState::RngState(std::uint64_t seed) : RngState(seed, 0) {}

RngState::RngState(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed),
      next_state_(mix64(seed + 0x9E3779B97F4A7C15ull * (stream + 1))) {}

RngState RngState::substream(std::uint64_t index) const {
    return RngState(seed_, index + 1);
}

double RngState::uniform() {
    next_state_ += 0x9E3779B97F4A7C15ull;
    return static_cast<double>(mix64(next_state_) >> 11) * 0x1.0p-53;
}

double RngState::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    next_state_ += 0x9E3779B97F4A7C15ull;
    const double u1 =
        static_cast<double>((mix64(next_state_) >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

Eigen::Vector2d sample_bivariate_normal(const Eigen::Vector2d& mean,
                                        const Eigen::Matrix2d& cov,
                                        RngState& rng) {
    const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    const double tol = 1e-12 * scale;
    const double c00 = cov(0, 0), c11 = cov(1, 1);
    const double c01 = 0.5 * (cov(0, 1) + cov(1, 0));
    if (c00 < -tol || c11 < -tol || c00 * c11 - c01 * c01 < -tol * scale)
        throw NotPSD("sample_bivariate_normal: covariance not PSD");

    double l00 = std::sqrt(std::max(c00, 0.0));
    double l10 = 0.0, l11 = 0.0;
    if (l00 > 0.0) {
        l10 = c01 / l00;
        l11 = std::sqrt(std::max(c11 - l10 * l10, 0.0));
    } else {
        if (std::abs(c01) > tol)
            throw NotPSD("sample_bivariate_normal: degenerate row mismatch");
        l11 = std::sqrt(std::max(c11, 0.0));
    }
    const double z0 = rng.normal();
    const double z1 = rng.normal();
    return mean + Eigen::Vector2d(l00 * z0, l10 * z0 + l11 * z1);
}

} // namespace pomega::numerics
