#include "pomega/sampling.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pomega/filters.hpp"

namespace pomega::sampling {

namespace {

constexpr std::int64_t kBlockSize = 1 << 16;

void validate_config(const DetectionConfig& cfg) {
    if (!(cfg.eta > 0.0 && cfg.eta <= 1.0))
        throw std::invalid_argument("detection: eta must be in (0,1]");
    if (!(cfg.eta_prime > 0.0 && cfg.eta_prime <= 1.0))
        throw std::invalid_argument("detection: eta_prime must be in (0,1]");
    if (!(cfg.R > 0.0))
        throw std::invalid_argument("detection: R must be > 0");
}

// Sigma from the characteristic-function identity with Phi = exp(v^T Q v),
// v = (b1_r, b1_i, b2_r, b2_i), b1 = y eta R e^{i phi}, b2 likewise.
Eigen::Matrix2d covariance_from_form(const Eigen::MatrixXd& q,
                                     const DetectionConfig& cfg, double phi,
                                     double phi_prime) {
    const Eigen::Vector2d e1(std::cos(phi), std::sin(phi));
    const Eigen::Vector2d e2(std::cos(phi_prime), std::sin(phi_prime));
    const double q1 = e1.dot(q.block<2, 2>(0, 0) * e1);
    const double q2 = e2.dot(q.block<2, 2>(2, 2) * e2);
    const double q12 = e1.dot(q.block<2, 2>(0, 2) * e2);

    const double r2 = cfg.R * cfg.R;
    Eigen::Matrix2d sigma;
    sigma(0, 0) = cfg.eta * r2 * (1.0 - 2.0 * cfg.eta * q1);
    sigma(1, 1) = cfg.eta_prime * r2 * (1.0 - 2.0 * cfg.eta_prime * q2);
    sigma(0, 1) = -2.0 * cfg.eta * cfg.eta_prime * r2 * q12;
    sigma(1, 0) = sigma(0, 1);

    const double scale = std::max({sigma(0, 0), sigma(1, 1), 1.0});
    const double det = sigma(0, 0) * sigma(1, 1) - sigma(0, 1) * sigma(0, 1);
    if (sigma(0, 0) < 0.0 || sigma(1, 1) < 0.0 ||
        det < -1e-12 * scale * scale)
        throw numerics::NotPSD("difference covariance not PSD");
    return sigma;
}

double pattern_phase_shift(cd alpha, double phi) {
    return 2.0 * std::abs(alpha) * std::sin(std::arg(alpha) - phi);
}

// f(s) = (1/pi) int_0^w db b Omega_w(b) e^{b^2/(2 eta_z)} e^{i b s}.
cd pattern_value(double s, double w, double eta_z) {
    const auto integrand = [&](double b) {
        const double mag =
            b / M_PI * filters::radial_filter(b, w) *
            std::exp(b * b / (2.0 * eta_z));
        return std::polar(mag, b * s);
    };
    return numerics::integrate_1d(integrand, 0.0, w, {1e-11, 1e-11, 2000});
}

// Re f(s) sampled on a uniform s-grid; Re f is even in s, so only s >= 0 is
// stored and index -1 mirrors index 1.
class PatternTable {
public:
    PatternTable(double s_max, double w, double eta_z) : h_(2.5e-3) {
        const auto n = static_cast<std::size_t>(std::ceil(s_max / h_)) + 4;
        re_.resize(n + 1);
        for (std::size_t k = 0; k <= n; ++k)
            re_[k] = pattern_value(k * h_, w, eta_z).real();
    }

    // Symmetrized full-line value f(s) + conj(f(s)) via 4-point Lagrange.
    double symmetrized(double s) const {
        const double x = std::abs(s) / h_;
        const auto k = static_cast<std::ptrdiff_t>(x);
        if (k + 2 >= static_cast<std::ptrdiff_t>(re_.size()))
            throw std::out_of_range("pattern table: s beyond tabulated range");
        const double t = x - static_cast<double>(k);
        const double wm1 = -t * (t - 1.0) * (t - 2.0) / 6.0;
        const double w0 = (t * t - 1.0) * (t - 2.0) / 2.0;
        const double w1 = -t * (t + 1.0) * (t - 2.0) / 2.0;
        const double w2 = t * (t * t - 1.0) / 6.0;
        return 2.0 * (wm1 * at(k - 1) + w0 * at(k) + w1 * at(k + 1) +
                      w2 * at(k + 2));
    }

private:
    double at(std::ptrdiff_t k) const { return re_[std::abs(k)]; }

    double h_;
    std::vector<double> re_;
};

Reconstruction reduce_products(const std::vector<double>& products) {
    const auto m = static_cast<double>(products.size());
    double sum = 0.0;
    for (double z : products) sum += z;
    const double mean = sum / m;
    double ss = 0.0;
    for (double z : products) ss += (z - mean) * (z - mean);
    Reconstruction out;
    out.estimate = mean;
    out.std_error = std::sqrt(ss / (m - 1.0)) / std::sqrt(m);
    out.im_mean = 0.0; // symmetrized pattern values are exactly real
    return out;
}

void validate_reconstruct_args(const SampleSet& set, double w) {
    if (set.samples.size() < 2)
        throw std::invalid_argument("reconstruct: need at least 2 samples");
    if (!(w > 0.0)) throw std::invalid_argument("reconstruct: w must be > 0");
    validate_config(set.config);
}

} // namespace

Eigen::Matrix2d difference_covariance(const parametric::ParametricParams& params,
                                      const DetectionConfig& cfg, double phi,
                                      double phi_prime) {
    validate_config(cfg);
    const parametric::GaussianForm form =
        parametric::two_time_form(params, cfg.tau1(params), cfg.tau2(params));
    return covariance_from_form(form.Q, cfg, phi, phi_prime);
}

SampleSet generate_samples(const parametric::ParametricParams& params,
                           const DetectionConfig& cfg, std::int64_t m,
                           std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("generate_samples: M must be >= 1");
    validate_config(cfg);
    const parametric::GaussianForm form =
        parametric::two_time_form(params, cfg.tau1(params), cfg.tau2(params));

    SampleSet set;
    set.seed = seed;
    set.config = cfg;
    set.params = params;
    set.samples.reserve(m);

    const numerics::RngState master(seed);
    const Eigen::Vector2d zero = Eigen::Vector2d::Zero();
    for (std::int64_t block = 0; block * kBlockSize < m; ++block) {
        numerics::RngState rng = master.substream(block);
        const std::int64_t end = std::min(m, (block + 1) * kBlockSize);
        for (std::int64_t j = block * kBlockSize; j < end; ++j) {
            QuadratureSample sample;
            sample.phi = M_PI * rng.uniform();
            sample.phi_prime = M_PI * rng.uniform();
            const Eigen::Matrix2d sigma =
                covariance_from_form(form.Q, cfg, sample.phi,
                                     sample.phi_prime);
            const Eigen::Vector2d v =
                numerics::sample_bivariate_normal(zero, sigma, rng);
            sample.v = v[0];
            sample.v_prime = v[1];
            set.samples.push_back(sample);
        }
    }
    return set;
}

cd pattern_function(double z, double phi, cd alpha, double w, double eta_z,
                    double R) {
    if (!(w > 0.0))
        throw std::invalid_argument("pattern_function: w must be > 0");
    if (!(eta_z > 0.0))
        throw std::invalid_argument("pattern_function: eta_z must be > 0");
    if (!(R > 0.0)) throw std::invalid_argument("pattern_function: R must be > 0");
    const double s = z / (eta_z * R) + pattern_phase_shift(alpha, phi);
    return pattern_value(s, w, eta_z);
}

Reconstruction reconstruct(const SampleSet& set, cd alpha1, cd alpha2,
                           double w) {
    validate_reconstruct_args(set, w);
    const DetectionConfig& cfg = set.config;

    std::vector<double> s1(set.samples.size());
    std::vector<double> s2(set.samples.size());
    double s_max1 = 0.0;
    double s_max2 = 0.0;
    for (std::size_t j = 0; j < set.samples.size(); ++j) {
        const QuadratureSample& ev = set.samples[j];
        s1[j] = ev.v / (cfg.eta * cfg.R) + pattern_phase_shift(alpha1, ev.phi);
        s2[j] = ev.v_prime / (cfg.eta_prime * cfg.R) +
                pattern_phase_shift(alpha2, ev.phi_prime);
        s_max1 = std::max(s_max1, std::abs(s1[j]));
        s_max2 = std::max(s_max2, std::abs(s2[j]));
    }

    const PatternTable table1(s_max1, w, cfg.eta);
    const PatternTable table2 = (cfg.eta_prime == cfg.eta && s_max2 <= s_max1)
                                    ? table1
                                    : PatternTable(s_max2, w, cfg.eta_prime);

    std::vector<double> products(set.samples.size());
    for (std::size_t j = 0; j < set.samples.size(); ++j)
        products[j] = table1.symmetrized(s1[j]) * table2.symmetrized(s2[j]);
    return reduce_products(products);
}

Reconstruction reconstruct_direct(const SampleSet& set, cd alpha1, cd alpha2,
                                  double w) {
    validate_reconstruct_args(set, w);
    const DetectionConfig& cfg = set.config;

    std::vector<double> products(set.samples.size());
    for (std::size_t j = 0; j < set.samples.size(); ++j) {
        const QuadratureSample& ev = set.samples[j];
        const cd f1 =
            pattern_function(ev.v, ev.phi, alpha1, w, cfg.eta, cfg.R);
        const cd f2 = pattern_function(ev.v_prime, ev.phi_prime, alpha2, w,
                                       cfg.eta_prime, cfg.R);
        const cd product = (f1 + std::conj(f1)) * (f2 + std::conj(f2));
        products[j] = product.real();
    }
    return reduce_products(products);
}

void write_samples(const SampleSet& set, const std::string& csv_path,
                   const std::string& meta_path) {
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot open " + csv_path);
    csv << "v,v_prime,phi,phi_prime\n";
    char line[160];
    for (const QuadratureSample& ev : set.samples) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", ev.v,
                      ev.v_prime, ev.phi, ev.phi_prime);
        csv << line;
    }
    if (!csv) throw std::runtime_error("write failed: " + csv_path);

    std::ofstream meta(meta_path);
    if (!meta) throw std::runtime_error("cannot open " + meta_path);
    char buf[64];
    const auto emit = [&](const char* key, double value) {
        std::snprintf(buf, sizeof buf, "%.17g", value);
        meta << key << "=" << buf << "\n";
    };
    meta << "seed=" << set.seed << "\n";
    meta << "M=" << set.samples.size() << "\n";
    emit("eta", set.config.eta);
    emit("eta_prime", set.config.eta_prime);
    emit("R", set.config.R);
    emit("kappa", set.params.kappa);
    emit("delta", set.params.delta);
    emit("tau1", set.config.tau1(set.params));
    emit("tau2", set.config.tau2(set.params));
    if (!meta) throw std::runtime_error("write failed: " + meta_path);
}

SampleSet read_samples(const std::string& csv_path,
                       const std::string& meta_path) {
    std::ifstream meta(meta_path);
    if (!meta) throw std::runtime_error("cannot open " + meta_path);
    SampleSet set;
    std::size_t expected_m = 0;
    double tau1 = 0.0;
    double tau2 = 0.0;
    std::string line;
    while (std::getline(meta, line)) {
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("malformed metadata line: " + line);
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (key == "seed")
            set.seed = std::stoull(value);
        else if (key == "M")
            expected_m = std::stoull(value);
        else if (key == "eta")
            set.config.eta = std::stod(value);
        else if (key == "eta_prime")
            set.config.eta_prime = std::stod(value);
        else if (key == "R")
            set.config.R = std::stod(value);
        else if (key == "kappa")
            set.params.kappa = std::stod(value);
        else if (key == "delta")
            set.params.delta = std::stod(value);
        else if (key == "tau1")
            tau1 = std::stod(value);
        else if (key == "tau2")
            tau2 = std::stod(value);
        else
            throw std::runtime_error("unknown metadata key: " + key);
    }
    set.config.t = M_PI * tau1 / (2.0 * set.params.kappa);
    set.config.dt = M_PI * (tau2 - tau1) / (2.0 * set.params.kappa);

    std::ifstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot open " + csv_path);
    if (!std::getline(csv, line) || line != "v,v_prime,phi,phi_prime")
        throw std::runtime_error("bad sample CSV header in " + csv_path);
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        QuadratureSample ev;
        std::istringstream row(line);
        char c1 = 0;
        char c2 = 0;
        char c3 = 0;
        if (!(row >> ev.v >> c1 >> ev.v_prime >> c2 >> ev.phi >> c3 >>
              ev.phi_prime) ||
            c1 != ',' || c2 != ',' || c3 != ',')
            throw std::runtime_error("bad sample CSV row: " + line);
        set.samples.push_back(ev);
    }
    if (expected_m != set.samples.size())
        throw std::runtime_error("sample count mismatch with metadata");
    return set;
}

} // namespace pomega::sampling
