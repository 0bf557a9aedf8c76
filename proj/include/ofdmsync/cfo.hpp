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

#ifndef OFDMSYNC_CFO_HPP
#define OFDMSYNC_CFO_HPP

#include "ofdmsync/correlator.hpp"
#include "ofdmsync/csv.hpp"
#include "ofdmsync/frame_detect.hpp"
#include "ofdmsync/preamble.hpp"

#include <ostream>

namespace ofdmsync {

// Coarse CFO from the phase of the lag-L autocorrelation over the short training
// symbols. A channel rotation of +df turns every lagged product r[n] conj(r[n+L])
// into |s|^2 exp(-j 2 pi df L Ts), so df = -arg(R) / (2 pi L Ts), unambiguous while
// |df| < fs / (2 L) (625 kHz for L = 16 at 20 MHz).

/// Inclusive range of autocorrelation start indices.
struct PlateauSpan
{
    std::size_t start = 0;
    std::size_t end = 0;
};

struct CfoEstimate
{
    double delta_f_hz = 0.0;
    double phase_rad = 0.0; // arg of the mean R, in (-pi, pi]
    PlateauSpan span;
};

inline double cfo_unambiguous_range(std::size_t lag, double sample_rate)
{
    return sample_rate / (2.0 * static_cast<double>(lag));
}

/// Averages R[n] over the span, then reads the CFO from the phase of the mean.
inline CfoEstimate estimate_cfo(const SampleBuffer& r, std::size_t lag, PlateauSpan span, std::size_t window = 0)
{
    require_sample_rate(r.sample_rate);
    if (window == 0)
        window = lag;
    if (lag == 0)
        throw ConfigError("CFO lag must be positive");
    if (span.start > span.end)
        throw SizingError("plateau span start exceeds its end");
    if (span.end + lag + window > r.size())
        throw SizingError("plateau span [" + std::to_string(span.start) + ", " + std::to_string(span.end) +
                          "] needs " + std::to_string(span.end + lag + window) + " samples, buffer has " +
                          std::to_string(r.size()));

    const auto corr = autocorrelation(r.view(span.start, span.end - span.start + lag + window), lag, window);
    Complex sum{};
    for (const auto& c : corr)
        sum += c;
    const Complex mean = sum / static_cast<double>(corr.size());
    if (std::abs(mean) == 0.0 || !std::isfinite(std::abs(mean)))
        throw EstimationError("autocorrelation over the plateau is zero; no coherent short training sequence");

    CfoEstimate est;
    est.phase_rad = std::arg(mean);
    if (est.phase_rad <= -std::numbers::pi)
        est.phase_rad = std::numbers::pi;
    est.delta_f_hz = -est.phase_rad * r.sample_rate / (2.0 * std::numbers::pi * static_cast<double>(lag));
    est.span = span;
    return est;
}

/// Span for CFO averaging taken from a detection event, trimmed so that no lagged
/// product can reach past the short training sequence that opened the plateau.
inline PlateauSpan plateau_span(const FrameEvent& event, const FrameDetectConfig& cfg, const PreambleSpec& spec)
{
    const std::size_t clean = spec.sts_length() > cfg.lag + cfg.window ? spec.sts_length() - cfg.lag - cfg.window : 0;
    return {event.start_index, std::min(event.end_index, event.start_index + clean)};
}

/// s[n] = r[n] exp(-j 2 pi df n Ts)
inline SampleBuffer correct_cfo(const SampleBuffer& r, double delta_f_hz)
{
    require_sample_rate(r.sample_rate);
    SampleBuffer out = r;
    const double step = -2.0 * std::numbers::pi * delta_f_hz / r.sample_rate;
    for (std::size_t n = 0; n < out.size(); ++n)
        out.samples[n] *= std::polar(1.0, step * static_cast<double>(n));
    return out;
}

/// CSV columns: n,abs_r,arg_r
inline void write_cfo_trace(std::ostream& os, const SampleBuffer& r, std::size_t lag, std::size_t window = 0)
{
    if (window == 0)
        window = lag;
    os << "n,abs_r,arg_r\n";
    if (r.size() < lag + window)
        return;
    const auto corr = autocorrelation(r.view(), lag, window);
    for (std::size_t n = 0; n < corr.size(); ++n)
        csv::row(os, n, std::abs(corr[n]), std::arg(corr[n]));
}

} // namespace ofdmsync

#endif
