#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pomega/numerics.hpp"
#include "pomega/parametric.hpp"

namespace pomega::sampling {

using numerics::cd;

// Balanced-homodyne detection of the signal at two times with a common
// local-oscillator amplitude R.  t and dt are lab times; the dimensionless
// pair (tau1, tau2) follows the parametric scaling tau = 2*kappa*t/pi.
struct DetectionConfig {
    double eta = 0.9;       // detector efficiency, first channel
    double eta_prime = 0.9; // detector efficiency, second channel
    double R = 1.0;         // local-oscillator amplitude
    double t = 0.0;
    double dt = 0.0;

    double tau1(const parametric::ParametricParams& p) const {
        return 2.0 * p.kappa * t / M_PI;
    }
    double tau2(const parametric::ParametricParams& p) const {
        return 2.0 * p.kappa * (t + dt) / M_PI;
    }
};

// One correlated difference event: v = n1 - n2 at LO phase phi,
// v' = n3 - n4 at phase phi_prime.  Phases lie in [0, pi).
struct QuadratureSample {
    double v = 0.0;
    double v_prime = 0.0;
    double phi = 0.0;
    double phi_prime = 0.0;
};

struct SampleSet {
    std::vector<QuadratureSample> samples;
    std::uint64_t seed = 0;
    DetectionConfig config;
    parametric::ParametricParams params;
};

// Covariance of (v, v') at fixed LO phases, from inverting the relation
// E[e^{i(yv+y'v')}] e^{y^2 R^2 eta/2 + y'^2 R^2 eta'/2}
//   = Phi(y eta R e^{i phi}, y' eta' R e^{i phi'}).
// Throws numerics::NotPSD for unphysical parameter combinations.
Eigen::Matrix2d difference_covariance(const parametric::ParametricParams& params,
                                      const DetectionConfig& cfg, double phi,
                                      double phi_prime);

// M events: phases uniform on [0, pi), then (v, v') from the bivariate
// normal at those phases.  Bit-exactly reproducible from (seed, cfg, params,
// M); generation is partitioned into fixed blocks with one RNG substream
// each, so any worker layout produces the same stream.
SampleSet generate_samples(const parametric::ParametricParams& params,
                           const DetectionConfig& cfg, std::int64_t m,
                           std::uint64_t seed);

// Half-line pattern value
//   f(z, phi; alpha) = (1/pi) int_0^w db b Omega_w(b) e^{b^2/(2 eta_z)}
//                      e^{i b s},
//   s = z/(eta_z R) + 2|alpha| sin(arg(alpha) - phi).
// The b < 0 half-plane contributes the conjugate, so estimators consume the
// symmetrized value f + conj(f).
cd pattern_function(double z, double phi, cd alpha, double w, double eta_z,
                    double R);

struct Reconstruction {
    double estimate = 0.0;  // real part of the empirical mean
    double std_error = 0.0; // sd of the summand's real part / sqrt(M)
    double im_mean = 0.0;   // imaginary residue of the mean, diagnostic
};

// Empirical estimate of the radially filtered two-time quasiprobability at
// (alpha1, alpha2): mean over events of the product of symmetrized pattern
// values.  Pattern values come from a cubic-interpolated table (the value
// depends on the event only through the scalar s); accuracy ~1e-8.
Reconstruction reconstruct(const SampleSet& set, cd alpha1, cd alpha2,
                           double w);

// Table-free per-event evaluation; slow path used to validate the table.
Reconstruction reconstruct_direct(const SampleSet& set, cd alpha1, cd alpha2,
                                  double w);

// CSV with header v,v_prime,phi,phi_prime plus a key=value sidecar
// (seed, M, eta, eta_prime, R, kappa, delta, tau1, tau2).
void write_samples(const SampleSet& set, const std::string& csv_path,
                   const std::string& meta_path);
SampleSet read_samples(const std::string& csv_path,
                       const std::string& meta_path);

} // namespace pomega::sampling
