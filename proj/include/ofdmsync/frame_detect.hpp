// SPDX-License-Identifier: Apache-2.0
//
// ofdmsync: preamble-based OFDM synchronization laboratory
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef OFDMSYNC_FRAME_DETECT_HPP
#define OFDMSYNC_FRAME_DETECT_HPP

#include "ofdmsync/correlator.hpp"
#include "ofdmsync/csv.hpp"
#include "ofdmsync/types.hpp"

#include <optional>
#include <ostream>
#include <string_view>

namespace ofdmsync {

// Schmidl-Cox style packet detector. The lag-L autocorrelation of the received
// signal is compared against its windowed power; while consecutive short training
// symbols pass through the window the ratio sits on a plateau near one.

enum class MetricMode
{
    /// |R|^2 / P^2 > threshold. Gain invariant.
    exact,
    /// |Re R| + |Im R| > threshold * P^2, evaluated on window-averaged R and P
    /// (the moving-average outputs), which is what makes it usable at unit power.
    /// Not gain invariant: the left side scales as a^2, the right as a^4.
    l1_approx,
};

inline std::string_view to_string(MetricMode m)
{
    return m == MetricMode::exact ? "exact" : "l1_approx";
}

inline MetricMode parse_metric_mode(std::string_view s)
{
    if (s == "exact")
        return MetricMode::exact;
    if (s == "l1_approx" || s == "l1")
        return MetricMode::l1_approx;
    throw ConfigError("unknown metric mode '" + std::string(s) + "' (expected exact or l1_approx)");
}

struct FrameDetectConfig
{
    std::size_t lag = 16;
    std::size_t window = 16;
    double threshold = 0.5;
    std::size_t min_plateau = 32;
    MetricMode mode = MetricMode::exact;

    void validate() const
    {
        if (lag < 1 || window < 1)
            throw ConfigError("frame detector lag and window must be >= 1");
        if (!(threshold > 0.0 && threshold < 1.0))
            throw ConfigError("frame detector threshold must lie in (0, 1)");
        if (min_plateau < 1)
            throw ConfigError("min_plateau must be >= 1");
    }
};

/// A maximal run of above-threshold metric samples. Indices are autocorrelation
/// start indices n (inclusive on both ends).
struct FrameEvent
{
    std::size_t start_index = 0;
    std::size_t end_index = 0;
    double peak_metric = 0.0;

    std::size_t length() const noexcept { return end_index - start_index + 1; }
    friend bool operator==(const FrameEvent&, const FrameEvent&) = default;
};

inline constexpr double kMetricEpsilon = 1e-30;

inline double metric_value(Complex corr, double power, MetricMode mode) noexcept
{
    if (mode == MetricMode::exact)
        return std::norm(corr) / (power * power + kMetricEpsilon);
    return std::abs(corr.real()) + std::abs(corr.imag());
}

inline bool above_threshold(double metric, double power, const FrameDetectConfig& cfg) noexcept
{
    if (cfg.mode == MetricMode::exact)
        return metric > cfg.threshold;
    // metric / W > threshold * (P / W)^2
    return metric * static_cast<double>(cfg.window) > cfg.threshold * power * power;
}

/// Per-sample detection metric. exact: |R|^2 / (P^2 + eps). l1_approx: |Re R| + |Im R|.
inline std::vector<double> detection_metric(std::span<const Complex> corr, std::span<const double> power,
                                            MetricMode mode)
{
    if (corr.size() != power.size())
        throw SizingError("correlation and power series differ in length");
    std::vector<double> out(corr.size());
    for (std::size_t n = 0; n < corr.size(); ++n)
        out[n] = metric_value(corr[n], power[n], mode);
    return out;
}

/// Batch detector over a whole buffer. Too-short input yields no events.
inline std::vector<FrameEvent> detect_frames(const SampleBuffer& r, const FrameDetectConfig& cfg)
{
    cfg.validate();
    std::vector<FrameEvent> events;
    if (r.size() < cfg.lag + cfg.window)
        return events;

    const auto series = autocorrelate(r.view(), cfg.lag, cfg.window);
    const auto metric = detection_metric(series.corr, series.power, cfg.mode);

    std::optional<FrameEvent> run;
    auto close = [&] {
        if (run && run->length() >= cfg.min_plateau)
            events.push_back(*run);
        run.reset();
    };
    for (std::size_t n = 0; n < metric.size(); ++n)
    {
        if (above_threshold(metric[n], series.power[n], cfg))
        {
            if (!run)
                run = FrameEvent{n, n, metric[n]};
            run->end_index = n;
            run->peak_metric = std::max(run->peak_metric, metric[n]);
        }
        else
        {
            close();
        }
    }
    close();
    return events;
}

/// Incremental detector for sample streams. Holds private delay-line state, so one
/// instance serves one stream; it may be moved between threads but not shared.
class StreamingFrameDetector
{
public:
    explicit StreamingFrameDetector(FrameDetectConfig cfg = {})
        : cfg_((cfg.validate(), cfg)), engine_(cfg.lag, cfg.window)
    {
    }

    const FrameDetectConfig& config() const noexcept { return cfg_; }

    /// Feeds one sample; returns an event when a qualifying run has just ended.
    std::optional<FrameEvent> push(Complex x)
    {
        const auto s = engine_.push(x);
        if (!s)
            return std::nullopt;
        const auto n = static_cast<std::size_t>(s->index);
        const double m = metric_value(s->corr, s->power, cfg_.mode);
        if (above_threshold(m, s->power, cfg_))
        {
            if (!run_)
                run_ = FrameEvent{n, n, m};
            run_->end_index = n;
            run_->peak_metric = std::max(run_->peak_metric, m);
            return std::nullopt;
        }
        return close();
    }

    /// Flushes a run still open at end of stream.
    std::optional<FrameEvent> finish() { return close(); }

    void reset()
    {
        engine_.reset();
        run_.reset();
    }

private:
    std::optional<FrameEvent> close()
    {
        std::optional<FrameEvent> out;
        if (run_ && run_->length() >= cfg_.min_plateau)
            out = run_;
        run_.reset();
        return out;
    }

    FrameDetectConfig cfg_;
    SlidingAutocorrelator<double> engine_;
    std::optional<FrameEvent> run_;
};

/// CSV columns: n,abs_r_sq,p_sq,metric,above_threshold
inline void write_frame_trace(std::ostream& os, const SampleBuffer& r, const FrameDetectConfig& cfg)
{
    cfg.validate();
    os << "n,abs_r_sq,p_sq,metric,above_threshold\n";
    if (r.size() < cfg.lag + cfg.window)
        return;
    const auto series = autocorrelate(r.view(), cfg.lag, cfg.window);
    for (std::size_t n = 0; n < series.corr.size(); ++n)
    {
        const double p = series.power[n];
        const double m = metric_value(series.corr[n], p, cfg.mode);
        csv::row(os, n, std::norm(series.corr[n]), p * p, m, above_threshold(m, p, cfg) ? 1 : 0);
    }
}

} // namespace ofdmsync

#endif
