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

#ifndef OFDMSYNC_STATS_HPP
#define OFDMSYNC_STATS_HPP

#include "ofdmsync/types.hpp"

#include <algorithm>
#include <map>

namespace ofdmsync {

template <std::floating_point T>
T mean(std::span<const T> values)
{
    if (values.empty())
        throw ConfigError("mean of an empty sample");
    T acc = 0;
    for (const T v : values)
        acc += v;
    return acc / static_cast<T>(values.size());
}

/// Population variance, sum (x - mean)^2 / N.
template <std::floating_point T>
T variance(std::span<const T> values)
{
    const T m = mean(values);
    T acc = 0;
    T drift = 0;
    for (const T v : values)
    {
        acc += (v - m) * (v - m);
        drift += v - m;
    }
    const T n = static_cast<T>(values.size());
    // Corrected two-pass form; the drift term cancels rounding in the mean.
    return std::max(T(0), (acc - drift * drift / n) / n);
}

inline double mean(const std::vector<double>& v) { return mean(std::span<const double>(v)); }
inline double variance(const std::vector<double>& v) { return variance(std::span<const double>(v)); }

struct HistogramBin
{
    double center = 0.0;
    std::size_t count = 0;

    friend bool operator==(const HistogramBin&, const HistogramBin&) = default;
};

/// Bins of the given width centered on integer multiples of it, contiguous from the
/// lowest to the highest occupied bin (empty bins in between are kept unless that
/// would exceed kMaxContiguousBins, in which case only occupied bins are listed).
inline constexpr long long kMaxContiguousBins = 100000;

inline std::vector<HistogramBin> make_histogram(std::span<const double> values, double bin_width)
{
    if (!(bin_width > 0.0))
        throw ConfigError("histogram bin width must be positive");
    std::map<long long, std::size_t> counts;
    for (const double v : values)
        ++counts[std::llround(v / bin_width)];
    std::vector<HistogramBin> bins;
    if (counts.empty())
        return bins;
    const long long lo = counts.begin()->first;
    const long long hi = counts.rbegin()->first;
    if (hi - lo >= kMaxContiguousBins)
    {
        for (const auto& [k, c] : counts)
            bins.push_back({static_cast<double>(k) * bin_width, c});
        return bins;
    }
    bins.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (long long k = lo; k <= hi; ++k)
    {
        const auto it = counts.find(k);
        bins.push_back({static_cast<double>(k) * bin_width, it == counts.end() ? 0 : it->second});
    }
    return bins;
}

} // namespace ofdmsync

#endif
