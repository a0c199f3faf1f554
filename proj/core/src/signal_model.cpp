#include "pqmon/signal_model.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pqmon {

namespace {

// Roots of z^p - a_1 z^{p-1} - ... - a_p via the companion matrix.
double max_characteristic_root(const std::vector<double>& coeffs) {
    const int p = static_cast<int>(coeffs.size());
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
    for (int j = 0; j < p; ++j) companion(0, j) = coeffs[static_cast<std::size_t>(j)];
    for (int i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
    Eigen::VectorXcd roots = companion.eigenvalues();
    double max_mod = 0.0;
    for (int i = 0; i < p; ++i) max_mod = std::max(max_mod, std::abs(roots(i)));
    return max_mod;
}

// Stationary values drawn jointly N(mu_tilde * 1, Sigma) with
// Sigma_ij = R(|i-j|); used as virtual pre-history so the recursion is
// stationary from the first emitted sample.
std::vector<double> stationary_history(const ArParams& ar, Rng& rng) {
    const int p = ar.order();
    std::vector<double> hist(static_cast<std::size_t>(p), ar.mean_tilde);
    if (ar.sigma_w == 0.0) return hist;

    std::vector<double> r = ar_autocovariance(ar, p - 1);
    Eigen::MatrixXd cov(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) cov(i, j) = r[static_cast<std::size_t>(std::abs(i - j))];

    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("stationary covariance is not positive definite");
    Eigen::MatrixXd chol = llt.matrixL();

    std::normal_distribution<double> unit(0.0, 1.0);
    Eigen::VectorXd g(p);
    for (int i = 0; i < p; ++i) g(i) = unit(rng);
    Eigen::VectorXd x = chol * g;
    for (int i = 0; i < p; ++i) hist[static_cast<std::size_t>(i)] += x(i);
    return hist;
}

// AR recursion generator. history[j-1] holds x_{t-j}.
class ArGenerator {
public:
    ArGenerator(const ArParams& ar, Rng& rng)
        : ar_(ar), history_(stationary_history(ar, rng)), noise_(0.0, ar.sigma_w) {}

    double next(Rng& rng) {
        double x = ar_.mean_tilde;
        for (int j = 0; j < ar_.order(); ++j)
            x += ar_.coeffs[static_cast<std::size_t>(j)] *
                 (history_[static_cast<std::size_t>(j)] - ar_.mean_tilde);
        if (ar_.sigma_w > 0.0) x += noise_(rng);
        for (std::size_t j = history_.size(); j-- > 1;) history_[j] = history_[j - 1];
        history_[0] = x;
        return x;
    }

private:
    ArParams ar_;
    std::vector<double> history_;
    std::normal_distribution<double> noise_;
};

}  // namespace

void NominalParams::validate() const {
    if (!(a0 > 0.0)) throw std::invalid_argument("nominal: a0 must be > 0");
    if (!(f0 > 0.0)) throw std::invalid_argument("nominal: f0 must be > 0");
    if (samples_per_cycle < 2) throw std::invalid_argument("nominal: samples_per_cycle must be >= 2");
}

void ArParams::validate() const {
    if (order() < 1) throw std::invalid_argument("ar: order must be >= 1");
    if (!(sigma_w >= 0.0) || !std::isfinite(sigma_w))
        throw std::invalid_argument("ar: sigma_w must be >= 0");
    for (double a : coeffs)
        if (!std::isfinite(a)) throw std::invalid_argument("ar: coefficients must be finite");
    if (max_characteristic_root(coeffs) >= 1.0)
        throw std::invalid_argument("ar: process is not stationary (characteristic root on or outside the unit circle)");
}

void NoiseParams::validate() const {
    if (!(sigma_nu > 0.0) || !std::isfinite(sigma_nu))
        throw std::invalid_argument("noise: sigma_nu must be > 0");
}

void ScenarioConfig::validate() const {
    nominal.validate();
    noise.validate();
    if (num_meters < 1) throw std::invalid_argument("scenario: num_meters must be >= 1");
    if (per_meter.size() != num_meters)
        throw std::invalid_argument("scenario: per_meter length must equal num_meters");
    if (horizon < 1) throw std::invalid_argument("scenario: horizon must be >= 1");
    if (t0 < 0 || t0 > horizon) throw std::invalid_argument("scenario: t0 must be in [0, horizon]");
    if (t1 && *t1 <= t0) throw std::invalid_argument("scenario: t1 must be > t0");
    for (const DisturbanceKind& kind : per_meter) {
        if (const auto* ar = std::get_if<ArProcess>(&kind)) {
            ar->ar.validate();
        } else if (const auto* sag = std::get_if<AmplitudeSag>(&kind)) {
            if (!(sag->scale > 0.0 && sag->scale < 1.0))
                throw std::invalid_argument("scenario: sag scale must be in (0, 1)");
        } else if (const auto* ring = std::get_if<TransientRing>(&kind)) {
            if (!(ring->damping_per_s > 0.0))
                throw std::invalid_argument("scenario: ring damping must be > 0");
            if (!(ring->ring_hz > 0.0))
                throw std::invalid_argument("scenario: ring frequency must be > 0");
        }
    }
}

double nominal_waveform(const NominalParams& params, Tick tick) {
    const double t = static_cast<double>(tick) / params.fs();
    return params.a0 * std::sin(2.0 * std::numbers::pi * params.f0 * t + params.phi0);
}

std::vector<double> ar_autocovariance(const ArParams& ar, int max_lag) {
    ar.validate();
    const int p = ar.order();
    const auto& a = ar.coeffs;
    const double sw2 = ar.sigma_w * ar.sigma_w;

    // Linear system in R(0..p):
    //   R(0) - sum_j a_j R(j)      = sigma_w^2
    //   R(m) - sum_j a_j R(|m-j|)  = 0,   m = 1..p
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p + 1, p + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p + 1);
    rhs(0) = sw2;
    for (int m = 0; m <= p; ++m) {
        A(m, m) += 1.0;
        for (int j = 1; j <= p; ++j)
            A(m, std::abs(m - j)) -= a[static_cast<std::size_t>(j - 1)];
    }
    Eigen::VectorXd r = A.fullPivLu().solve(rhs);

    std::vector<double> out(static_cast<std::size_t>(std::max(max_lag, p) + 1));
    for (int m = 0; m <= p; ++m) out[static_cast<std::size_t>(m)] = r(m);
    for (int m = p + 1; m <= max_lag; ++m) {
        double v = 0.0;
        for (int j = 1; j <= p; ++j)
            v += a[static_cast<std::size_t>(j - 1)] * out[static_cast<std::size_t>(m - j)];
        out[static_cast<std::size_t>(m)] = v;
    }
    out.resize(static_cast<std::size_t>(max_lag + 1));
    return out;
}

MeterStream synthesize_ar(const ArParams& ar, const NoiseParams& noise, std::size_t n, Rng& rng) {
    ar.validate();
    if (!(noise.sigma_nu >= 0.0)) throw std::invalid_argument("noise: sigma_nu must be >= 0");
    if (n < 1) throw std::invalid_argument("synthesize_ar: n must be >= 1");

    MeterStream stream;
    stream.samples.reserve(n);
    ArGenerator gen(ar, rng);
    std::normal_distribution<double> meas(0.0, noise.sigma_nu);
    for (std::size_t i = 0; i < n; ++i) {
        double y = gen.next(rng);
        if (noise.sigma_nu > 0.0) y += meas(rng);
        stream.samples.push_back(y);
    }
    return stream;
}

std::vector<MeterStream> synthesize_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    const Tick end_of_change = cfg.t1.value_or(cfg.horizon);

    std::vector<MeterStream> streams;
    streams.reserve(cfg.num_meters);
    for (std::size_t meter = 0; meter < cfg.num_meters; ++meter) {
        Rng rng = make_rng(derive_seed(cfg.seed, meter));
        std::normal_distribution<double> meas(0.0, cfg.noise.sigma_nu);

        MeterStream stream;
        stream.meter_id = meter;
        stream.samples.resize(static_cast<std::size_t>(cfg.horizon));
        for (Tick t = 0; t < cfg.horizon; ++t)
            stream.samples[static_cast<std::size_t>(t)] = meas(rng);

        const DisturbanceKind& kind = cfg.per_meter[meter];
        if (const auto* arp = std::get_if<ArProcess>(&kind)) {
            ArGenerator gen(arp->ar, rng);
            for (Tick t = cfg.t0; t < std::min(end_of_change, cfg.horizon); ++t)
                stream.samples[static_cast<std::size_t>(t)] += gen.next(rng);
        } else if (const auto* sag = std::get_if<AmplitudeSag>(&kind)) {
            for (Tick t = cfg.t0; t < std::min(end_of_change, cfg.horizon); ++t)
                stream.samples[static_cast<std::size_t>(t)] +=
                    (sag->scale - 1.0) * nominal_waveform(cfg.nominal, t);
        } else if (const auto* ring = std::get_if<TransientRing>(&kind)) {
            const double fs = cfg.nominal.fs();
            for (Tick t = cfg.t0; t < std::min(end_of_change, cfg.horizon); ++t) {
                const double dt = static_cast<double>(t - cfg.t0) / fs;
                stream.samples[static_cast<std::size_t>(t)] +=
                    ring->amplitude * std::exp(-ring->damping_per_s * dt) *
                    std::sin(2.0 * std::numbers::pi * ring->ring_hz * dt);
            }
        }
        streams.push_back(std::move(stream));
    }
    return streams;
}

}  // namespace pqmon
