#pragma once

#include <span>
#include <vector>

#include "pqmon/detectors.hpp"

namespace pqmon {

/// Centralized multi-meter GLLR: per-meter window statistics are summed and
/// the reset window is shared, so every meter restarts simultaneously when
/// the global sum goes non-positive.
class CentralizedDetector {
public:
    CentralizedDetector(std::size_t num_meters, const GllrParams& params, double h);

    struct Step {
        double statistic; // global g_k >= 0
        bool reset;
        bool alarm;
        std::vector<double> per_meter; // local window statistics S^(l)
    };
    Step update(std::span<const double> observations);

    std::size_t num_meters() const { return windows_.size(); }
    long window_length() const { return windows_.empty() ? 0 : windows_.front().window_length(); }

private:
    std::vector<GllrWindow> windows_;
    double h_;
    bool pending_reset_ = true;
};

/// Uniform-in-time decentralized baseline: meters run the shared-window GLLR
/// continuously but the central statistic, alarm and reset decisions happen
/// only on refresh ticks (every tau samples), using the exact transmitted
/// local values. With tau = 1 this is the centralized detector.
class UniformDetector {
public:
    UniformDetector(std::size_t num_meters, const GllrParams& params, double h, Tick tau);

    struct Step {
        std::optional<double> statistic; // set on refresh ticks only
        bool reset;
        bool alarm;
    };
    Step update(std::span<const double> observations);

    Tick tau() const { return tau_; }

private:
    std::vector<GllrWindow> windows_;
    double h_;
    Tick tau_;
    Tick tick_ = 0;
    bool pending_reset_ = true;
};

}  // namespace pqmon
