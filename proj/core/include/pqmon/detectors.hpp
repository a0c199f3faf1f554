#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pqmon/signal_model.hpp"

namespace pqmon {

/// Parameter vector [a_1..a_p, mu, sigma] of the residual model
/// y_t = mu + sum_j a_j y_{t-j} + u_t with u_t ~ N(0, sigma^2).
struct Theta {
    std::vector<double> coeffs; // a_1..a_p
    double mu = 0.0;
    double sigma = 1.0;

    int order() const { return static_cast<int>(coeffs.size()); }
    void validate() const;
};

/// Pre-change (noise-only) parameter vector [0,...,0, 0, sigma_nu].
Theta nominal_theta(int p, double sigma_nu);

/// Post-change parameter vector implied by an AR disturbance observed through
/// measurement noise: mu = mu_tilde * (1 - sum a_j),
/// sigma^2 = (1 + sum a_j^2) * sigma_nu^2 + sigma_w^2.
Theta disturbance_theta(const ArParams& ar, const NoiseParams& noise);

struct Epsilons {
    double eps0; // residual under the nominal model: y_t
    double eps1; // residual under theta: y_t - mu - sum_j a_j y_{t-j}
};

/// history[j-1] = y_{t-j}; entries beyond the available past are zero.
Epsilons epsilons(double y, std::span<const double> history, const Theta& theta);

/// Per-sample log-likelihood ratio term
///   s_i = 1/2 log(sigma0^2/sigma1^2) - eps1^2/(2 sigma1^2) + eps0^2/(2 sigma0^2).
double llr_term(double y, std::span<const double> history, const Theta& theta0, const Theta& theta1);

/// Whitened score vector at the nominal parameter, length p+2:
///   [ y_t*y_{t-1}/s2, ..., y_t*y_{t-p}/s2, (y_t^2/s2 - 1)/sqrt(2), y_t/s ]
/// with s = sigma_nu, s2 = sigma_nu^2. The first block tracks autocorrelation,
/// the middle term variance increase, the last the mean shift.
void score_vector(double y, std::span<const double> history, double sigma_nu, std::span<double> out);
std::vector<double> score_vector(double y, std::span<const double> history, double sigma_nu, int p);

/// Rolling view of the last p observations; missing past reads as zero.
class SampleHistory {
public:
    explicit SampleHistory(int p) : values_(static_cast<std::size_t>(p), 0.0) {}

    void push(double y) {
        for (std::size_t j = values_.size(); j-- > 1;) values_[j] = values_[j - 1];
        if (!values_.empty()) values_[0] = y;
    }
    std::span<const double> view() const { return values_; }

private:
    std::vector<double> values_;
};

/// Shared detector knobs: model order, known noise level and the assumed
/// change magnitude b (ellipse radius in whitened parameter space; the
/// statistic drifts at -b^2/2 before a change).
struct GllrParams {
    int p = 1;
    double sigma_nu = 1.0;
    double b = 0.5;

    void validate() const;
};

/// Score accumulation over one reset window. The window statistic is
///   S = b * ||sum_z|| - (N/2) * b^2
/// where sum_z is the running sum of the last N score vectors. restart()
/// clears the window but keeps the raw sample history.
class GllrWindow {
public:
    explicit GllrWindow(const GllrParams& params);

    void restart();
    double step(double y); // grow the window with y, return S
    double statistic() const { return statistic_; }
    long window_length() const { return n_; }
    std::span<const double> accumulated_score() const { return sum_z_; }
    const SampleHistory& history() const { return history_; }

private:
    GllrParams params_;
    long n_ = 0;
    double statistic_ = 0.0;
    std::vector<double> sum_z_, z_buf_;
    SampleHistory history_;
};

/// Single-meter GLLR detector with the recursive reset window:
///   N_k = N_{k-1} * 1{g_{k-1} > 0} + 1,   g_k = (S over the last N_k samples)+.
/// A non-positive window statistic restarts the window at the next update.
class GllrDetector {
public:
    explicit GllrDetector(const GllrParams& params);

    struct Step {
        double statistic; // g_k >= 0
        bool reset;       // window restarts at the next update
    };
    Step update(double y);

    double statistic() const { return statistic_; }
    long window_length() const { return window_.window_length(); }

private:
    GllrWindow window_;
    bool pending_reset_ = true;
    double statistic_ = 0.0;
};

struct TraceRow {
    Tick tick;
    double statistic;
    bool reset;
};

/// First tick where the GLLR statistic reaches h, or nullopt.
std::optional<Tick> gllr_detect(std::span<const double> samples, const GllrParams& params,
                                double h, std::vector<TraceRow>* trace = nullptr);

/// CUSUM with both parameter vectors known: g_k = (g_{k-1} + s_k)+.
class CusumDetector {
public:
    CusumDetector(Theta theta0, Theta theta1);

    double update(double y); // returns the clamped statistic
    double statistic() const { return g_; }

private:
    Theta theta0_, theta1_;
    double g_ = 0.0;
    SampleHistory history_;
};

std::optional<Tick> cusum_detect(std::span<const double> samples, const Theta& theta0,
                                 const Theta& theta1, double h,
                                 std::vector<TraceRow>* trace = nullptr);

/// Root mean square over a length-W window.
double rms_statistic(std::span<const double> window);

/// Sliding-window RMS detector; flags when Q leaves [lower, upper].
struct RmsConfig {
    int window = 64;
    double lower = 0.0;
    double upper = 1.0;

    void validate() const;
};

class RmsDetector {
public:
    explicit RmsDetector(const RmsConfig& cfg);

    struct Step {
        std::optional<double> statistic; // set once the window is full
        bool alarm;
    };
    Step update(double y);

private:
    RmsConfig cfg_;
    std::vector<double> ring_;
    std::size_t filled_ = 0, next_ = 0;
    double sum_sq_ = 0.0;
};

/// Max squared FFT magnitude over bins 1..W/2, excluding the fundamental bin.
/// W must be a power of two.
double stft_statistic(std::span<const double> window, int fundamental_bin);

struct StftConfig {
    int window = 64;
    int fundamental_bin = 1;
    double threshold = 1.0;

    void validate() const;
};

class StftDetector {
public:
    explicit StftDetector(const StftConfig& cfg);

    struct Step {
        std::optional<double> statistic;
        bool alarm;
    };
    Step update(double y);

private:
    StftConfig cfg_;
    std::vector<double> ring_;
    std::size_t filled_ = 0, next_ = 0;
    std::vector<double> scratch_;
};

}  // namespace pqmon
