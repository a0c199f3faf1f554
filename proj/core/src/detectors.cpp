#include "pqmon/detectors.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace pqmon {

namespace {

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// In-place iterative radix-2 FFT; n must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

void Theta::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("theta: sigma must be > 0");
}

Theta nominal_theta(int p, double sigma_nu) {
    Theta t;
    t.coeffs.assign(static_cast<std::size_t>(p), 0.0);
    t.mu = 0.0;
    t.sigma = sigma_nu;
    t.validate();
    return t;
}

Theta disturbance_theta(const ArParams& ar, const NoiseParams& noise) {
    ar.validate();
    noise.validate();
    Theta t;
    t.coeffs = ar.coeffs;
    double sum_a = 0.0, sum_a2 = 0.0;
    for (double a : ar.coeffs) {
        sum_a += a;
        sum_a2 += a * a;
    }
    t.mu = ar.mean_tilde * (1.0 - sum_a);
    t.sigma = std::sqrt((1.0 + sum_a2) * noise.sigma_nu * noise.sigma_nu + ar.sigma_w * ar.sigma_w);
    return t;
}

Epsilons epsilons(double y, std::span<const double> history, const Theta& theta) {
    double eps1 = y - theta.mu;
    for (int j = 0; j < theta.order(); ++j) {
        const auto idx = static_cast<std::size_t>(j);
        const double past = idx < history.size() ? history[idx] : 0.0;
        eps1 -= theta.coeffs[idx] * past;
    }
    return Epsilons{y, eps1};
}

double llr_term(double y, std::span<const double> history, const Theta& theta0, const Theta& theta1) {
    theta0.validate();
    theta1.validate();
    const double v0 = theta0.sigma * theta0.sigma;
    const double v1 = theta1.sigma * theta1.sigma;
    const double eps0 = y; // theta0 is the zero-mean white model
    const double eps1 = epsilons(y, history, theta1).eps1;
    return 0.5 * std::log(v0 / v1) - eps1 * eps1 / (2.0 * v1) + eps0 * eps0 / (2.0 * v0);
}

void score_vector(double y, std::span<const double> history, double sigma_nu, std::span<double> out) {
    const std::size_t p = out.size() - 2;
    const double s2 = sigma_nu * sigma_nu;
    for (std::size_t j = 0; j < p; ++j) {
        const double past = j < history.size() ? history[j] : 0.0;
        out[j] = y * past / s2;
    }
    out[p] = (y * y / s2 - 1.0) / std::numbers::sqrt2;
    out[p + 1] = y / sigma_nu;
}

std::vector<double> score_vector(double y, std::span<const double> history, double sigma_nu, int p) {
    std::vector<double> out(static_cast<std::size_t>(p) + 2);
    score_vector(y, history, sigma_nu, out);
    return out;
}

void GllrParams::validate() const {
    if (p < 1) throw std::invalid_argument("gllr: p must be >= 1");
    if (!(sigma_nu > 0.0)) throw std::invalid_argument("gllr: sigma_nu must be > 0");
    if (!(b > 0.0)) throw std::invalid_argument("gllr: b must be > 0");
}

GllrWindow::GllrWindow(const GllrParams& params)
    : params_(params),
      sum_z_(static_cast<std::size_t>(params.p) + 2, 0.0),
      z_buf_(static_cast<std::size_t>(params.p) + 2, 0.0),
      history_(params.p) {
    params_.validate();
}

void GllrWindow::restart() {
    n_ = 0;
    statistic_ = 0.0;
    std::fill(sum_z_.begin(), sum_z_.end(), 0.0);
}

double GllrWindow::step(double y) {
    score_vector(y, history_.view(), params_.sigma_nu, z_buf_);
    for (std::size_t i = 0; i < sum_z_.size(); ++i) sum_z_[i] += z_buf_[i];
    ++n_;
    history_.push(y);
    statistic_ = params_.b * norm2(sum_z_) -
                 0.5 * static_cast<double>(n_) * params_.b * params_.b;
    return statistic_;
}

GllrDetector::GllrDetector(const GllrParams& params) : window_(params) {}

GllrDetector::Step GllrDetector::update(double y) {
    if (pending_reset_) window_.restart();
    const double s = window_.step(y);
    statistic_ = std::max(s, 0.0);
    pending_reset_ = (s <= 0.0);
    return Step{statistic_, pending_reset_};
}

std::optional<Tick> gllr_detect(std::span<const double> samples, const GllrParams& params,
                                double h, std::vector<TraceRow>* trace) {
    if (!(h > 0.0)) throw std::invalid_argument("gllr_detect: h must be > 0");
    GllrDetector detector(params);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto step = detector.update(samples[i]);
        if (trace) trace->push_back(TraceRow{static_cast<Tick>(i), step.statistic, step.reset});
        if (step.statistic >= h) return static_cast<Tick>(i);
    }
    return std::nullopt;
}

CusumDetector::CusumDetector(Theta theta0, Theta theta1)
    : theta0_(std::move(theta0)), theta1_(std::move(theta1)), history_(theta1_.order()) {
    theta0_.validate();
    theta1_.validate();
}

double CusumDetector::update(double y) {
    const double s = llr_term(y, history_.view(), theta0_, theta1_);
    g_ = std::max(g_ + s, 0.0);
    history_.push(y);
    return g_;
}

std::optional<Tick> cusum_detect(std::span<const double> samples, const Theta& theta0,
                                 const Theta& theta1, double h, std::vector<TraceRow>* trace) {
    if (!(h > 0.0)) throw std::invalid_argument("cusum_detect: h must be > 0");
    CusumDetector detector(theta0, theta1);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double g = detector.update(samples[i]);
        if (trace) trace->push_back(TraceRow{static_cast<Tick>(i), g, g == 0.0});
        if (g >= h) return static_cast<Tick>(i);
    }
    return std::nullopt;
}

double rms_statistic(std::span<const double> window) {
    if (window.empty()) throw std::invalid_argument("rms: empty window");
    double s = 0.0;
    for (double y : window) s += y * y;
    return std::sqrt(s / static_cast<double>(window.size()));
}

void RmsConfig::validate() const {
    if (window < 2) throw std::invalid_argument("rms: window must be >= 2");
    if (!std::isfinite(lower) || !std::isfinite(upper) || lower > upper)
        throw std::invalid_argument("rms: thresholds must be finite with lower <= upper");
}

RmsDetector::RmsDetector(const RmsConfig& cfg) : cfg_(cfg), ring_(static_cast<std::size_t>(cfg.window), 0.0) {
    cfg_.validate();
}

RmsDetector::Step RmsDetector::update(double y) {
    sum_sq_ += y * y - ring_[next_] * ring_[next_];
    ring_[next_] = y;
    next_ = (next_ + 1) % ring_.size();
    if (filled_ < ring_.size()) ++filled_;
    if (filled_ < ring_.size()) return Step{std::nullopt, false};
    const double q = std::sqrt(std::max(sum_sq_, 0.0) / static_cast<double>(ring_.size()));
    return Step{q, q < cfg_.lower || q > cfg_.upper};
}

double stft_statistic(std::span<const double> window, int fundamental_bin) {
    const int w = static_cast<int>(window.size());
    if (!is_power_of_two(w)) throw std::invalid_argument("stft: window length must be a power of two");
    if (fundamental_bin < 0 || fundamental_bin >= w / 2)
        throw std::invalid_argument("stft: fundamental_bin must be in [0, W/2)");

    std::vector<std::complex<double>> spectrum(window.begin(), window.end());
    fft_radix2(spectrum);

    double best = 0.0;
    for (int k = 1; k <= w / 2; ++k) {
        if (k == fundamental_bin) continue;
        best = std::max(best, std::norm(spectrum[static_cast<std::size_t>(k)]));
    }
    return best;
}

void StftConfig::validate() const {
    if (!is_power_of_two(window)) throw std::invalid_argument("stft: window must be a power of two");
    if (fundamental_bin < 0 || fundamental_bin >= window / 2)
        throw std::invalid_argument("stft: fundamental_bin must be in [0, W/2)");
    if (!std::isfinite(threshold)) throw std::invalid_argument("stft: threshold must be finite");
}

StftDetector::StftDetector(const StftConfig& cfg)
    : cfg_(cfg), ring_(static_cast<std::size_t>(cfg.window), 0.0), scratch_(ring_.size()) {
    cfg_.validate();
}

StftDetector::Step StftDetector::update(double y) {
    ring_[next_] = y;
    next_ = (next_ + 1) % ring_.size();
    if (filled_ < ring_.size()) ++filled_;
    if (filled_ < ring_.size()) return Step{std::nullopt, false};
    // Unroll the ring into time order; the statistic is shift-invariant but
    // traces read better this way.
    for (std::size_t i = 0; i < ring_.size(); ++i)
        scratch_[i] = ring_[(next_ + i) % ring_.size()];
    const double e = stft_statistic(scratch_, cfg_.fundamental_bin);
    return Step{e, e > cfg_.threshold};
}

}  // namespace pqmon
