#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "pqmon/rng.hpp"

namespace pqmon {

using Tick = std::int64_t;

/// Nominal sinusoid a0*sin(2*pi*f0*t + phi0), sampled at fs = f0 * samples_per_cycle.
struct NominalParams {
    double a0 = 1.0;            // amplitude (normalized volts)
    double f0 = 60.0;           // fundamental frequency (Hz)
    double phi0 = 0.0;          // phase (radians)
    int samples_per_cycle = 64; // fs / f0

    double fs() const { return f0 * static_cast<double>(samples_per_cycle); }
    void validate() const;
};

/// AR(p) disturbance: x_t = mu_tilde + sum_j a_j * (x_{t-j} - mu_tilde) + w_t,
/// with w_t ~ N(0, sigma_w^2). Stationarity (all characteristic roots inside
/// the unit circle) is enforced by validate().
struct ArParams {
    std::vector<double> coeffs; // a_1..a_p
    double mean_tilde = 0.0;    // process mean (volts)
    double sigma_w = 1.0;       // driving-noise std (volts)

    int order() const { return static_cast<int>(coeffs.size()); }
    void validate() const;
};

/// Additive white measurement noise N(0, sigma_nu^2).
struct NoiseParams {
    double sigma_nu = 1.0;

    void validate() const;
};

struct ArProcess {
    ArParams ar;
};

/// Residual of a voltage sag: the waveform amplitude drops to scale*a0, so
/// the residual after nominal subtraction is (scale - 1) * nominal(t).
struct AmplitudeSag {
    double scale = 0.5; // in (0, 1)
};

/// Damped oscillatory residual, e.g. a switching transient:
/// amplitude * exp(-damping_per_s * t) * sin(2*pi*ring_hz * t).
struct TransientRing {
    double amplitude = 0.5;
    double ring_hz = 600.0;
    double damping_per_s = 50.0;
};

using DisturbanceKind = std::variant<ArProcess, AmplitudeSag, TransientRing>;

/// Full multi-meter scenario. Every meter sees pure noise for t < t0, its
/// disturbance plus noise for t0 <= t < t1 (or the horizon), and noise again
/// after t1 when t1 is set. Time is an integer sample tick throughout.
struct ScenarioConfig {
    NominalParams nominal;
    NoiseParams noise;
    std::size_t num_meters = 1;
    std::vector<DisturbanceKind> per_meter; // length num_meters
    Tick t0 = 0;
    std::optional<Tick> t1;
    Tick horizon = 0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Residual observation sequence of one meter.
struct MeterStream {
    std::size_t meter_id = 0;
    std::vector<double> samples;
};

double nominal_waveform(const NominalParams& params, Tick tick);

/// Stationary autocovariance R(0..max_lag) of the AR process, from the
/// Yule-Walker relations.
std::vector<double> ar_autocovariance(const ArParams& ar, int max_lag);

/// n post-change residual samples: the AR disturbance (warm-started from its
/// stationary distribution) plus i.i.d. measurement noise.
MeterStream synthesize_ar(const ArParams& ar, const NoiseParams& noise, std::size_t n, Rng& rng);

/// One stream per meter; driving and measurement noise independent across
/// meters, all change at the shared t0. Deterministic given the config.
std::vector<MeterStream> synthesize_scenario(const ScenarioConfig& cfg);

}  // namespace pqmon
