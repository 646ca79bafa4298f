#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace scale_smooth {

/// One income reading at a past time; the present is time 0.
struct IncomeSample {
    double time;
    double income;
};

/// Sampled income history: times strictly increasing, all <= 0, with the last
/// sample at the present.
struct IncomeSeries {
    std::vector<IncomeSample> samples;
};

inline void validate(const IncomeSeries& series) {
    const auto& s = series.samples;
    if (s.empty()) throw std::invalid_argument("income series: no samples");
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!std::isfinite(s[i].time) || !std::isfinite(s[i].income)) {
            throw std::invalid_argument("income series: non-finite entry");
        }
        if (s[i].time > 0.0) throw std::invalid_argument("income series: times must be <= 0");
        if (i > 0 && !(s[i].time > s[i - 1].time)) {
            throw std::invalid_argument("income series: duplicate or non-increasing times");
        }
    }
    if (s.back().time != 0.0) {
        throw std::invalid_argument("income series: last sample must be at the present (time 0)");
    }
}

/// How income before the first sample is filled in. The kernel has unbounded
/// support, so some convention is required; extending the first sampled value
/// keeps constant data constant.
enum class TailExtension { Constant, Zero };

/// Piecewise-constant income on (-inf, 0]: value v_i on [b_i, b_{i+1}), the
/// final segment closed at 0, and the pre-history (-inf, b_0) filled per the
/// tail extension policy.
class StepFunction {
public:
    StepFunction(std::vector<double> breakpoints, std::vector<double> values,
                 TailExtension extension = TailExtension::Constant)
        : breakpoints_(std::move(breakpoints)),
          values_(std::move(values)),
          extension_(extension) {
        if (values_.empty() || breakpoints_.size() != values_.size() + 1) {
            throw std::invalid_argument("step function: need n+1 breakpoints for n values");
        }
        for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
            if (!std::isfinite(breakpoints_[i])) {
                throw std::invalid_argument("step function: non-finite breakpoint");
            }
            if (i > 0 && !(breakpoints_[i] > breakpoints_[i - 1])) {
                throw std::invalid_argument("step function: breakpoints must be strictly increasing");
            }
        }
        for (double v : values_) {
            if (!std::isfinite(v)) throw std::invalid_argument("step function: non-finite value");
        }
        if (breakpoints_.back() != 0.0) {
            throw std::invalid_argument("step function: domain must end at the present (0)");
        }
    }

    double operator()(double x) const {
        if (x < breakpoints_.front()) return tail_value();
        if (x >= breakpoints_.back()) return values_.back();
        const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
        return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
    }

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& values() const { return values_; }
    TailExtension extension() const { return extension_; }

    double tail_value() const {
        return extension_ == TailExtension::Constant ? values_.front() : 0.0;
    }

    double min_value() const {
        return std::min(tail_value(), *std::min_element(values_.begin(), values_.end()));
    }

    double max_value() const {
        return std::max(tail_value(), *std::max_element(values_.begin(), values_.end()));
    }

private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
    TailExtension extension_;
};

/// Discretize a sampled series: the reading at time t_i holds on [t_i, t_{i+1}).
/// A single present-time sample becomes a constant function.
inline StepFunction step_from_samples(const IncomeSeries& series,
                                      TailExtension extension = TailExtension::Constant) {
    validate(series);
    const auto& s = series.samples;
    if (s.size() == 1) {
        return StepFunction({-1.0, 0.0}, {s[0].income}, extension);
    }
    std::vector<double> breakpoints;
    std::vector<double> values;
    breakpoints.reserve(s.size());
    values.reserve(s.size() - 1);
    for (const auto& sample : s) breakpoints.push_back(sample.time);
    for (std::size_t i = 0; i + 1 < s.size(); ++i) values.push_back(s[i].income);
    return StepFunction(std::move(breakpoints), std::move(values), extension);
}

}  // namespace scale_smooth
