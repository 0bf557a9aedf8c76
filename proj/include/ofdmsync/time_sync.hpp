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

#ifndef OFDMSYNC_TIME_SYNC_HPP
#define OFDMSYNC_TIME_SYNC_HPP

#include "ofdmsync/correlator.hpp"
#include "ofdmsync/csv.hpp"
#include "ofdmsync/preamble.hpp"

#include <ostream>
#include <string_view>

namespace ofdmsync {

// Matched-filter timing recovery against one training symbol.
//
// Correlation index n is the first sample of the template alignment. A peak at n
// marks the symbol occupying [n, n + L), so the reported position n + L is the
// symbol's end boundary. For a clean frame starting at sample 0 the last short
// symbol ends at 160 and the last long symbol at 320.

enum class TrainingTemplate
{
    sts,
    lts,
};

inline std::string_view to_string(TrainingTemplate t)
{
    return t == TrainingTemplate::sts ? "sts" : "lts";
}

inline TrainingTemplate parse_template(std::string_view s)
{
    if (s == "sts" || s == "STS")
        return TrainingTemplate::sts;
    if (s == "lts" || s == "LTS")
        return TrainingTemplate::lts;
    throw ConfigError("unknown template '" + std::string(s) + "' (expected sts or lts)");
}

/// Range of correlation start indices searched for the peak.
struct SearchWindow
{
    long long start = 0;
    std::size_t length = 0;
};

struct TimeSyncConfig
{
    TrainingTemplate templ = TrainingTemplate::lts;
    SearchWindow window;
    std::size_t expected_peak = 0; // reporting only

    void validate() const
    {
        if (window.length == 0)
            throw ConfigError("timing search window must have positive length");
    }
};

struct TimingEstimate
{
    std::size_t n_xc_max = 0;     // argmax of |Lambda[n]| inside the window
    double peak_magnitude = 0.0;
    std::size_t position = 0;     // n_xc_max + template length (symbol end)
    long long offset_error = 0;   // position - expected_peak - true offset; set by the caller
};

inline std::vector<Complex> timing_template(TrainingTemplate t, const PreambleSpec& spec)
{
    return t == TrainingTemplate::sts ? short_symbol(spec) : long_symbol(spec);
}

inline std::size_t template_length(TrainingTemplate t, const PreambleSpec& spec)
{
    return t == TrainingTemplate::sts ? spec.short_symbol_len : spec.long_symbol_len;
}

/// Window [start of the last symbol, + 2 symbols), shifted by a known lead-in. This
/// contains the final correlation peak and excludes the earlier repetitions and the
/// partial cyclic-prefix peak.
inline TimeSyncConfig default_time_sync(TrainingTemplate t, const PreambleSpec& spec, std::size_t lead = 0)
{
    TimeSyncConfig cfg;
    cfg.templ = t;
    const std::size_t len = template_length(t, spec);
    cfg.expected_peak = t == TrainingTemplate::sts ? spec.sts_length() : spec.total_length();
    cfg.window.start = static_cast<long long>(cfg.expected_peak - len + lead);
    cfg.window.length = 2 * len;
    return cfg;
}

/// Windowed argmax of |Lambda[n]|. The window end is clipped to the last valid
/// correlation index; a window that starts outside the signal is an error. Ties go
/// to the lowest index.
inline TimingEstimate estimate_timing(const SampleBuffer& r, const TimeSyncConfig& cfg, const PreambleSpec& spec)
{
    cfg.validate();
    const auto templ = timing_template(cfg.templ, spec);
    if (r.size() < templ.size())
        throw SizingError("signal of " + std::to_string(r.size()) + " samples is shorter than the " +
                          std::string(to_string(cfg.templ)) + " template");
    const std::size_t valid = r.size() - templ.size() + 1;
    if (cfg.window.start < 0 || static_cast<std::size_t>(cfg.window.start) >= valid)
        throw SizingError("timing window start " + std::to_string(cfg.window.start) +
                          " lies outside the valid correlation range [0, " + std::to_string(valid) + ")");

    const auto first = static_cast<std::size_t>(cfg.window.start);
    const std::size_t count = std::min(cfg.window.length, valid - first);
    const auto mag = cross_correlate(r.view(first, count + templ.size() - 1), std::span<const Complex>(templ));

    std::size_t best = 0;
    for (std::size_t i = 1; i < mag.size(); ++i)
        if (mag[i] > mag[best])
            best = i;

    TimingEstimate est;
    est.n_xc_max = first + best;
    est.peak_magnitude = mag[best];
    est.position = est.n_xc_max + templ.size();
    return est;
}

/// CSV columns: n,abs_lambda
inline void write_timing_trace(std::ostream& os, const SampleBuffer& r, TrainingTemplate t,
                               const PreambleSpec& spec)
{
    os << "n,abs_lambda\n";
    const auto templ = timing_template(t, spec);
    if (r.size() < templ.size())
        return;
    const auto mag = cross_correlate(r.view(), std::span<const Complex>(templ));
    for (std::size_t n = 0; n < mag.size(); ++n)
        csv::row(os, n, mag[n]);
}

} // namespace ofdmsync

#endif
