#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "pomega/numerics.hpp"
#include "pomega/parametric.hpp"

using namespace pomega::parametric;
using pomega::numerics::cd;
using pomega::numerics::eig_sym;

namespace {

ParametricParams with_r(double r) {
    ParametricParams p;
    p.kappa = 1.0;
    p.delta = r;
    return p;
}

const std::vector<double> kRatios = {0.0, 1.0, 10.0 / M_PI, 3.9};

cd commutator_closed(const ParametricParams& p, double tau, double dtau) {
    const cd theta = p.theta_r();
    const cd phase =
        std::exp(cd(0.0, -0.25 * M_PI * p.r() * (2.0 * tau + dtau)));
    if (std::abs(theta) < 1e-12)
        return cd(0.0, -M_PI) * phase * dtau; // sinh(x)/x -> 1
    return cd(0.0, -M_PI) / theta * phase * std::sinh(theta * dtau);
}

} // namespace

TEST_CASE("solve_bogoliubov closed forms at special drives") {
    const BogoliubovPair at_zero = solve_bogoliubov(with_r(10.0 / M_PI), 0.0);
    CHECK(std::abs(at_zero.u1 - cd(1.0)) < 1e-15);
    CHECK(std::abs(at_zero.u2) < 1e-15);

    // Resonant drive: u1 = cosh(pi tau), u2 = -i sinh(pi tau).
    const double tau = 0.37;
    const BogoliubovPair res = solve_bogoliubov(with_r(0.0), tau);
    CHECK(std::abs(res.u1 - cd(std::cosh(M_PI * tau))) < 1e-12);
    CHECK(std::abs(res.u2 - cd(0.0, -std::sinh(M_PI * tau))) < 1e-12);

    // Critical mismatch r = 4: the eigenfrequency vanishes and the solution
    // degenerates to e^{-i pi tau}(1 + i pi tau), -i pi tau e^{-i pi tau}.
    const double tc = 0.9;
    const BogoliubovPair crit = solve_bogoliubov(with_r(4.0), tc);
    const cd ph = std::exp(cd(0.0, -M_PI * tc));
    CHECK(std::abs(crit.u1 - ph * (1.0 + cd(0.0, M_PI * tc))) < 1e-12);
    CHECK(std::abs(crit.u2 - cd(0.0, -M_PI * tc) * ph) < 1e-12);
}

TEST_CASE("solve_bogoliubov preserves the commutator normalization") {
    std::vector<double> ratios = kRatios;
    ratios.push_back(4.0);
    ratios.push_back(5.0); // oscillatory branch
    for (double r : ratios) {
        const ParametricParams p = with_r(r);
        for (int i = 0; i <= 100; ++i) {
            const double tau = 0.02 * i;
            const BogoliubovPair b = solve_bogoliubov(p, tau);
            CHECK(std::abs(std::norm(b.u1) - std::norm(b.u2) - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("solve_bogoliubov satisfies the equation of motion") {
    // d u1/d tau = -i pi e^{-i pi r tau/2} u2*,
    // d u2/d tau = -i pi e^{-i pi r tau/2} u1*.
    const double h = 1e-5;
    for (double r : {0.0, 1.0, 10.0 / M_PI, 3.9, 4.0, 5.0}) {
        const ParametricParams p = with_r(r);
        for (double tau : {0.1, 0.7, 1.3}) {
            const BogoliubovPair mid = solve_bogoliubov(p, tau);
            const BogoliubovPair lo = solve_bogoliubov(p, tau - h);
            const BogoliubovPair hi = solve_bogoliubov(p, tau + h);
            const cd drive =
                cd(0.0, -M_PI) * std::exp(cd(0.0, -0.5 * M_PI * r * tau));
            const cd du1 = (hi.u1 - lo.u1) / (2.0 * h);
            const cd du2 = (hi.u2 - lo.u2) / (2.0 * h);
            CHECK(std::abs(du1 - drive * std::conj(mid.u2)) < 1e-6);
            CHECK(std::abs(du2 - drive * std::conj(mid.u1)) < 1e-6);
        }
    }
}

TEST_CASE("single_time_form entries and spectrum") {
    const GaussianForm vac = single_time_form(with_r(10.0 / M_PI), 0.0);
    CHECK(vac.Q.cwiseAbs().maxCoeff() < 1e-15);

    const ParametricParams p = with_r(10.0 / M_PI);
    for (double tau : {0.2, 0.45, 0.8}) {
        const BogoliubovPair b = solve_bogoliubov(p, tau);
        const GaussianForm form = single_time_form(p, tau);
        CHECK(form.Q(0, 1) == form.Q(1, 0));
        // Algebraically equivalent entry expressions.
        const double re12 = (b.u1 * b.u2).real();
        const double n2 = std::norm(b.u2);
        CHECK(std::abs(form.Q(0, 0) - (re12 - n2)) < 1e-13);
        CHECK(std::abs(form.Q(1, 1) - (-re12 - n2)) < 1e-13);
        CHECK(std::abs(form.Q(0, 1) - (b.u1 * b.u2).imag()) < 1e-13);

        // Eigenvalues |u2|/(|u1|+|u2|) and -|u2|(|u1|+|u2|); the positive one
        // stays below 1/2, which keeps the form integrable under any filter.
        const auto eig = eig_sym(form.Q);
        const double m1 = std::abs(b.u1), m2 = std::abs(b.u2);
        CHECK(eig.eigenvalues(1) ==
              doctest::Approx(m2 / (m1 + m2)).epsilon(1e-12));
        CHECK(eig.eigenvalues(0) ==
              doctest::Approx(-m2 * (m1 + m2)).epsilon(1e-12));
        CHECK(eig.eigenvalues(1) < 0.5);
    }
}

TEST_CASE("diagonalize_form produces orthogonal normal coordinates") {
    GaussianForm zero;
    zero.Q = Eigen::Matrix2d::Zero();
    const DiagonalizedForm dz = diagonalize_form(zero);
    CHECK(dz.c.cwiseAbs().maxCoeff() < 1e-15);
    CHECK((dz.S.transpose() * dz.S - Eigen::Matrix2d::Identity())
              .cwiseAbs()
              .maxCoeff() < 1e-14);

    GaussianForm diag;
    diag.Q.resize(2, 2);
    diag.Q << 2.0, 0.0, 0.0, -3.0;
    const DiagonalizedForm dd = diagonalize_form(diag);
    CHECK(dd.c(0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(dd.c(1) == doctest::Approx(-2.0).epsilon(1e-14));

    // Closed-form branch against the generic eigensolver route.
    const ParametricParams p = with_r(10.0 / M_PI);
    for (double tau : {0.2, 0.5, 0.9}) {
        const GaussianForm form = single_time_form(p, tau);
        REQUIRE(std::abs(form.Q(0, 1)) > 1e-6); // closed form is active
        const DiagonalizedForm d = diagonalize_form(form);
        CHECK((d.S.transpose() * d.S - Eigen::Matrix2d::Identity())
                  .cwiseAbs()
                  .maxCoeff() < 1e-13);
        const Eigen::Matrix2d rotated = d.S.transpose() * form.Q * d.S;
        CHECK(std::abs(rotated(0, 1)) < 1e-13);
        CHECK(rotated(0, 0) == doctest::Approx(-d.c(0)).epsilon(1e-12));
        CHECK(rotated(1, 1) == doctest::Approx(-d.c(1)).epsilon(1e-12));

        const auto eig = eig_sym(form.Q);
        CHECK(d.c(0) == doctest::Approx(-eig.eigenvalues(0)).epsilon(1e-11));
        CHECK(d.c(1) == doctest::Approx(-eig.eigenvalues(1)).epsilon(1e-11));
    }

    // 4x4 forms take the eigensolver route.
    const GaussianForm big = two_time_form(p, 0.1, 0.45);
    const DiagonalizedForm d4 = diagonalize_form(big);
    CHECK((d4.S.transpose() * d4.S - Eigen::Matrix4d::Identity())
              .cwiseAbs()
              .maxCoeff() < 1e-13);
    const Eigen::Matrix4d rot4 = d4.S.transpose() * big.Q * d4.S;
    CHECK((rot4 + Eigen::Matrix4d(d4.c.asDiagonal())).cwiseAbs().maxCoeff() <
          1e-13);
}

TEST_CASE("p_omega_single vacuum value and input validation") {
    const double w = 2.3;
    const double got = p_omega_single(with_r(10.0 / M_PI), 0.0, cd(0.0), w);
    CHECK(got == doctest::Approx(w * w / (M_PI * M_PI)).epsilon(1e-10));

    CHECK_THROWS_AS(p_omega_single(with_r(0.0), 0.1, cd(0.0), 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(p_omega_single(with_r(0.0), 0.1, cd(0.0), -1.0),
                    std::invalid_argument);
}

TEST_CASE("p_omega_single agrees with direct 2D quadrature") {
    struct Point {
        double tau, r;
        cd alpha;
        double w;
    };
    const std::vector<Point> pts = {
        {0.2, 10.0 / M_PI, cd(0.5, 0.3), 2.3},
        {0.4, 10.0 / M_PI, cd(-1.2, 0.8), 2.3},
        {0.6, 10.0 / M_PI, cd(1.5, 0.0), 2.3},
        {0.3, 0.0, cd(0.9, -1.1), 2.9},
        {0.7, 3.9, cd(-0.4, -0.2), 2.0},
        {0.5, 1.0, cd(2.0, 1.0), 2.5},
    };
    for (const Point& pt : pts) {
        const ParametricParams p = with_r(pt.r);
        const double lib = p_omega_single(p, pt.tau, pt.alpha, pt.w);
        const Eigen::Matrix2d q = single_time_form(p, pt.tau).Q;
        const double ref = oracles::p_single_2d_oracle(q, pt.alpha, pt.w);
        CHECK(lib == doctest::Approx(ref).epsilon(1e-8));
    }
}

TEST_CASE("p_omega_single develops genuine negativity under the drive") {
    const ParametricParams p = with_r(10.0 / M_PI);
    const double w = 2.3;
    double min_val = 1.0;
    for (int i = 0; i <= 120; ++i) {
        const double x = -3.0 + 6.0 * i / 120.0;
        min_val = std::min(min_val, p_omega_single(p, 0.6, cd(x, 0.0), w));
    }
    CHECK(min_val < -0.01);
}

TEST_CASE("commutator_two_time matches its closed form") {
    const ParametricParams p = with_r(10.0 / M_PI);
    CHECK(std::abs(commutator_two_time(p, 0.4, 0.0)) < 1e-15);
    CHECK_THROWS_AS(commutator_two_time(p, 0.4, -0.1), std::invalid_argument);

    std::vector<double> ratios = kRatios;
    ratios.push_back(5.0);
    for (double r : ratios) {
        const ParametricParams pr = with_r(r);
        for (double tau : {0.0, 0.3, 0.8}) {
            for (double dtau : {0.1, 0.5, 1.2}) {
                const cd got = commutator_two_time(pr, tau, dtau);
                const cd want = commutator_closed(pr, tau, dtau);
                CHECK(std::abs(got - want) <
                      1e-12 * std::max(1.0, std::abs(want)));
            }
        }
    }

    // |[a(tau), a(tau + dtau)]| grows with the separation below the critical
    // mismatch.
    for (double r : kRatios) {
        const ParametricParams pr = with_r(r);
        double prev = 0.0;
        for (int i = 1; i <= 15; ++i) {
            const double cur = std::abs(commutator_two_time(pr, 0.2, 0.1 * i));
            CHECK(cur > prev);
            prev = cur;
        }
    }
}

TEST_CASE("time_ordering_ratio closed form and fixed points") {
    const ParametricParams p = with_r(10.0 / M_PI);
    CHECK(time_ordering_ratio(p, cd(0.7, 0.2), cd(-0.3, 0.9), 0.4, 0.0) ==
          1.0);
    CHECK(time_ordering_ratio(p, cd(0.0), cd(-0.3, 0.9), 0.4, 0.7) == 1.0);
    CHECK(time_ordering_ratio(p, cd(0.7, 0.2), cd(0.0), 0.4, 0.7) == 1.0);

    // Below the critical mismatch the ratio reduces to the real form
    // exp{ (pi/theta) |b1 b2| sin(pi r (2 tau + dtau)/4 + phi1 + phi2)
    //      sinh(theta dtau) }.
    const cd b1 = std::polar(0.9, 0.7);
    const cd b2 = std::polar(1.1, -1.9);
    for (double r : kRatios) {
        const ParametricParams pr = with_r(r);
        const double theta = 0.25 * M_PI * std::sqrt(16.0 - r * r);
        for (double tau : {0.15, 0.6}) {
            for (double dtau : {0.2, 0.9}) {
                const double got = time_ordering_ratio(pr, b1, b2, tau, dtau);
                const double angle =
                    0.25 * M_PI * r * (2.0 * tau + dtau) + 0.7 - 1.9;
                const double want =
                    std::exp(M_PI / theta * std::abs(b1 * b2) *
                             std::sin(angle) * std::sinh(theta * dtau));
                CHECK(got == doctest::Approx(want).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("two_time_form structure and equal-time reduction") {
    const ParametricParams p = with_r(10.0 / M_PI);

    const GaussianForm vac = two_time_form(p, 0.0, 0.0);
    CHECK(vac.Q.cwiseAbs().maxCoeff() < 1e-15);

    const GaussianForm form = two_time_form(p, 0.1, 0.45);
    CHECK((form.Q - form.Q.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((form.Q.block<2, 2>(0, 0) - single_time_form(p, 0.1).Q)
              .cwiseAbs()
              .maxCoeff() < 1e-15);
    CHECK((form.Q.block<2, 2>(2, 2) - single_time_form(p, 0.45).Q)
              .cwiseAbs()
              .maxCoeff() < 1e-15);

    CHECK_THROWS_AS(two_time_form(p, 0.5, 0.4), TimeOrderViolation);

    // At equal times the ordered pair of displacements merges, so the cross
    // block must reproduce the single-time form exactly.
    for (double tau : {0.3, 0.8}) {
        const GaussianForm eq = two_time_form(p, tau, tau);
        CHECK((eq.Q.block<2, 2>(0, 2) - single_time_form(p, tau).Q)
                  .cwiseAbs()
                  .maxCoeff() < 1e-14);
    }
}

TEST_CASE("two_time_form exponent matches the ordered operator product") {
    std::mt19937_64 gen(5150);
    std::uniform_real_distribution<double> amp(0.2, 1.2);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    struct Times {
        double tau1, tau2, r;
    };
    const std::vector<Times> cases = {
        {0.1, 0.45, 10.0 / M_PI}, {0.25, 0.3, 10.0 / M_PI}, {0.0, 0.6, 2.2}};
    for (const Times& c : cases) {
        const ParametricParams p = with_r(c.r);
        const BogoliubovPair ba = solve_bogoliubov(p, c.tau1);
        const BogoliubovPair bb = solve_bogoliubov(p, c.tau2);
        const Eigen::Matrix4d q = two_time_form(p, c.tau1, c.tau2).Q;
        for (int rep = 0; rep < 4; ++rep) {
            const cd beta1 = std::polar(amp(gen), ang(gen));
            const cd beta2 = std::polar(amp(gen), ang(gen));
            Eigen::Vector4d v;
            v << beta1.real(), beta1.imag(), beta2.real(), beta2.imag();
            const double exponent = v.dot(q * v);
            const cd phi = oracles::fock_two_time_phi(
                ba.u1, ba.u2, bb.u1, bb.u2, beta1, beta2, 60);
            CHECK(std::abs(phi.imag()) < 1e-6 * std::abs(phi));
            CHECK(std::log(phi.real()) ==
                  doctest::Approx(exponent).epsilon(1e-6));
        }
    }

    // Truncation control: the operator-product value is already converged.
    const ParametricParams p = with_r(10.0 / M_PI);
    const BogoliubovPair ba = solve_bogoliubov(p, 0.1);
    const BogoliubovPair bb = solve_bogoliubov(p, 0.45);
    const cd lo = oracles::fock_two_time_phi(ba.u1, ba.u2, bb.u1, bb.u2,
                                             cd(0.8, -0.4), cd(-0.3, 0.9), 40);
    const cd hi = oracles::fock_two_time_phi(ba.u1, ba.u2, bb.u1, bb.u2,
                                             cd(0.8, -0.4), cd(-0.3, 0.9), 80);
    CHECK(std::abs(lo - hi) < 1e-8 * std::abs(hi));
}

TEST_CASE("p_omega_two_time vacuum value, validation, and quadrature") {
    const ParametricParams p = with_r(10.0 / M_PI);
    const double w = 2.9;
    const double vac = p_omega_two_time(p, 0.0, 0.0, cd(0.0), cd(0.0), w);
    const double expected = std::pow(w * w / (M_PI * M_PI), 2);
    CHECK(vac == doctest::Approx(expected).epsilon(1e-10));

    CHECK_THROWS_AS(p_omega_two_time(p, 0.5, 0.4, cd(0.0), cd(0.0), w),
                    TimeOrderViolation);
    CHECK_THROWS_AS(p_omega_two_time(p, 0.1, 0.45, cd(0.0), cd(0.0), 0.0),
                    std::invalid_argument);

    const Eigen::Matrix4d q = two_time_form(p, 0.1, 0.45).Q;
    const cd a1(0.6, 0.2), a2(-0.8, 0.5);
    const double lib = p_omega_two_time(p, 0.1, 0.45, a1, a2, w);
    const double ref = oracles::p_two_4d_oracle(q, a1, a2, w);
    CHECK(lib == doctest::Approx(ref).epsilon(2e-4));

    const cd b1(1.2, 0.0), b2(0.0, 0.9);
    const double lib2 = p_omega_two_time(p, 0.1, 0.45, b1, b2, w);
    const double ref2 = oracles::p_two_4d_oracle(q, b1, b2, w);
    CHECK(std::abs(lib2 - ref2) < 1e-4 * std::max(1.0, std::abs(ref2)));
}

TEST_CASE("p_omega_two_time negativity is stable under filter widening") {
    const ParametricParams p = with_r(10.0 / M_PI);
    const double w = 2.9;
    double best = 1.0;
    double bx = 0.0, by = 0.0;
    for (int i = 0; i <= 30; ++i) {
        for (int j = 0; j <= 30; ++j) {
            const double x = -3.0 + 6.0 * i / 30.0;
            const double y = -3.0 + 6.0 * j / 30.0;
            const double val =
                p_omega_two_time(p, 0.1, 0.45, cd(x, 0.0), cd(y, 0.0), w);
            if (val < best) {
                best = val;
                bx = x;
                by = y;
            }
        }
    }
    CHECK(best < -0.001);
    const double widened =
        p_omega_two_time(p, 0.1, 0.45, cd(bx, 0.0), cd(by, 0.0), w + 0.1);
    CHECK(widened < 0.0);
}
