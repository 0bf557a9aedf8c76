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

#ifndef OFDMSYNC_CORRELATOR_HPP
#define OFDMSYNC_CORRELATOR_HPP

#include "ofdmsync/types.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>

namespace ofdmsync {

/// One output of the delay-and-correlate stage for start index n:
///   corr  = sum_{m<W} r[n+m] conj(r[n+m+L])
///   power = sum_{m<W} |r[n+m+L]|^2
template <std::floating_point T>
struct AutocorrSample
{
    std::uint64_t index = 0;
    BasicComplex<T> corr{};
    T power = 0;
};

/// Streaming lag-L autocorrelator with moving-sum (integrator/comb) updates.
///
/// Each push costs O(1): the newest lagged product enters the window and the oldest
/// leaves. Rounding residue is bounded by re-anchoring to a direct sum every
/// kReanchorInterval outputs, and the sums snap to exact zero whenever the window
/// holds no nonzero term, so silence reads as silence.
template <std::floating_point T>
class SlidingAutocorrelator
{
public:
    static constexpr std::uint64_t kReanchorInterval = 1024;

    SlidingAutocorrelator(std::size_t lag, std::size_t window)
        : lag_(lag), window_(window), span_(lag + window), ring_(lag + window + 1)
    {
        if (lag == 0 || window == 0)
            throw ConfigError("autocorrelator lag and window must be positive");
    }

    std::size_t lag() const noexcept { return lag_; }
    std::size_t window() const noexcept { return window_; }

    /// Samples consumed before the first output appears.
    std::size_t latency() const noexcept { return span_; }

    std::optional<AutocorrSample<T>> push(BasicComplex<T> x)
    {
        ring_[pushed_ % ring_.size()] = x;
        ++pushed_;
        if (pushed_ < span_)
            return std::nullopt;

        const std::uint64_t n = pushed_ - span_;
        if (n == 0 || since_anchor_ >= kReanchorInterval)
            reanchor(n);
        else
            slide(n);

        if (nonzero_corr_ == 0)
            corr_ = {};
        if (nonzero_power_ == 0 || power_ < T(0))
            power_ = T(0);
        return AutocorrSample<T>{n, corr_, power_};
    }

    void reset()
    {
        std::fill(ring_.begin(), ring_.end(), BasicComplex<T>{});
        pushed_ = since_anchor_ = 0;
        corr_ = {};
        power_ = 0;
        nonzero_corr_ = nonzero_power_ = 0;
    }

private:
    const BasicComplex<T>& at(std::uint64_t i) const { return ring_[i % ring_.size()]; }

    void reanchor(std::uint64_t n)
    {
        corr_ = {};
        power_ = 0;
        nonzero_corr_ = nonzero_power_ = 0;
        for (std::size_t m = 0; m < window_; ++m)
        {
            const auto prod = at(n + m) * std::conj(at(n + m + lag_));
            const auto p = std::norm(at(n + m + lag_));
            corr_ += prod;
            power_ += p;
            nonzero_corr_ += prod != BasicComplex<T>{};
            nonzero_power_ += p != T(0);
        }
        since_anchor_ = 0;
    }

    void slide(std::uint64_t n)
    {
        const auto enter = at(n + window_ - 1) * std::conj(at(n + window_ - 1 + lag_));
        const auto leave = at(n - 1) * std::conj(at(n - 1 + lag_));
        const auto p_enter = std::norm(at(n + window_ - 1 + lag_));
        const auto p_leave = std::norm(at(n - 1 + lag_));

        corr_ += enter - leave;
        power_ += p_enter - p_leave;
        nonzero_corr_ += static_cast<int>(enter != BasicComplex<T>{}) - static_cast<int>(leave != BasicComplex<T>{});
        nonzero_power_ += static_cast<int>(p_enter != T(0)) - static_cast<int>(p_leave != T(0));
        ++since_anchor_;
    }

    std::size_t lag_;
    std::size_t window_;
    std::size_t span_;
    std::vector<BasicComplex<T>> ring_;
    std::uint64_t pushed_ = 0;
    std::uint64_t since_anchor_ = 0;
    BasicComplex<T> corr_{};
    T power_ = 0;
    long nonzero_corr_ = 0;
    long nonzero_power_ = 0;
};

template <std::floating_point T>
struct AutocorrSeries
{
    std::vector<BasicComplex<T>> corr; // R[n]
    std::vector<T> power;              // P[n]
};

/// R[n] and P[n] for every n with n + lag + window <= r.size().
template <std::floating_point T>
AutocorrSeries<T> autocorrelate(std::span<const BasicComplex<T>> r, std::size_t lag, std::size_t window)
{
    if (lag == 0 || window == 0)
        throw ConfigError("autocorrelator lag and window must be positive");
    if (r.size() < lag + window)
        throw SizingError("autocorrelation needs at least lag + window = " + std::to_string(lag + window) +
                          " samples, got " + std::to_string(r.size()));

    SlidingAutocorrelator<T> engine(lag, window);
    AutocorrSeries<T> out;
    const std::size_t count = r.size() - lag - window + 1;
    out.corr.reserve(count);
    out.power.reserve(count);
    for (const auto& x : r)
        if (auto s = engine.push(x))
        {
            out.corr.push_back(s->corr);
            out.power.push_back(s->power);
        }
    return out;
}

template <std::floating_point T>
std::vector<BasicComplex<T>> autocorrelation(std::span<const BasicComplex<T>> r, std::size_t lag,
                                             std::size_t window)
{
    return autocorrelate(r, lag, window).corr;
}

template <std::floating_point T>
std::vector<T> signal_power(std::span<const BasicComplex<T>> r, std::size_t lag, std::size_t window)
{
    return autocorrelate(r, lag, window).power;
}

inline std::vector<Complex> autocorrelation(const SampleBuffer& r, std::size_t lag, std::size_t window)
{
    return autocorrelation(r.view(), lag, window);
}

inline std::vector<double> signal_power(const SampleBuffer& r, std::size_t lag, std::size_t window)
{
    return signal_power(r.view(), lag, window);
}

/// |Lambda[n]| with Lambda[n] = sum_m conj(c[m]) r[n+m], for n = 0 .. r.size() - c.size().
template <std::floating_point T>
std::vector<T> cross_correlate(std::span<const BasicComplex<T>> r, std::span<const BasicComplex<T>> templ)
{
    if (templ.empty())
        throw SizingError("correlation template is empty");
    if (templ.size() > r.size())
        throw SizingError("template of " + std::to_string(templ.size()) + " samples is longer than the signal (" +
                          std::to_string(r.size()) + ")");

    std::vector<BasicComplex<T>> conj_templ(templ.size());
    std::transform(templ.begin(), templ.end(), conj_templ.begin(), [](const auto& c) { return std::conj(c); });

    const std::size_t count = r.size() - templ.size() + 1;
    std::vector<T> out(count);
    for (std::size_t n = 0; n < count; ++n)
    {
        BasicComplex<T> acc{};
        const auto* x = r.data() + n;
        for (std::size_t m = 0; m < conj_templ.size(); ++m)
            acc += conj_templ[m] * x[m];
        out[n] = std::abs(acc);
    }
    return out;
}

inline std::vector<double> cross_correlate(const SampleBuffer& r, std::span<const Complex> templ)
{
    return cross_correlate(r.view(), templ);
}

} // namespace ofdmsync

#endif
