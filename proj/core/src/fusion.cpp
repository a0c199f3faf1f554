#include "pqmon/fusion.hpp"

#include <stdexcept>

namespace pqmon {

CentralizedDetector::CentralizedDetector(std::size_t num_meters, const GllrParams& params, double h)
    : h_(h) {
    if (num_meters < 1) throw std::invalid_argument("fusion: need at least one meter");
    if (!(h > 0.0)) throw std::invalid_argument("fusion: h must be > 0");
    windows_.reserve(num_meters);
    for (std::size_t i = 0; i < num_meters; ++i) windows_.emplace_back(params);
}

CentralizedDetector::Step CentralizedDetector::update(std::span<const double> observations) {
    if (observations.size() != windows_.size())
        throw std::invalid_argument("fusion: observation count does not match meter count");

    if (pending_reset_)
        for (GllrWindow& w : windows_) w.restart();

    Step step;
    step.per_meter.resize(windows_.size());
    double sum = 0.0;
    for (std::size_t l = 0; l < windows_.size(); ++l) {
        step.per_meter[l] = windows_[l].step(observations[l]);
        sum += step.per_meter[l];
    }
    step.statistic = std::max(sum, 0.0);
    pending_reset_ = (sum <= 0.0);
    step.reset = pending_reset_;
    step.alarm = step.statistic >= h_;
    return step;
}

UniformDetector::UniformDetector(std::size_t num_meters, const GllrParams& params, double h, Tick tau)
    : h_(h), tau_(tau) {
    if (num_meters < 1) throw std::invalid_argument("fusion: need at least one meter");
    if (!(h > 0.0)) throw std::invalid_argument("fusion: h must be > 0");
    if (tau < 1) throw std::invalid_argument("fusion: tau must be >= 1");
    windows_.reserve(num_meters);
    for (std::size_t i = 0; i < num_meters; ++i) windows_.emplace_back(params);
}

UniformDetector::Step UniformDetector::update(std::span<const double> observations) {
    if (observations.size() != windows_.size())
        throw std::invalid_argument("fusion: observation count does not match meter count");

    if (pending_reset_) {
        for (GllrWindow& w : windows_) w.restart();
        pending_reset_ = false;
    }

    double sum = 0.0;
    for (std::size_t l = 0; l < windows_.size(); ++l) sum += windows_[l].step(observations[l]);

    Step step{std::nullopt, false, false};
    if (tick_ % tau_ == 0) {
        step.statistic = std::max(sum, 0.0);
        pending_reset_ = (sum <= 0.0);
        step.reset = pending_reset_;
        step.alarm = *step.statistic >= h_;
    }
    ++tick_;
    return step;
}

}  // namespace pqmon
