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

#ifndef OFDMSYNC_HARNESS_HPP
#define OFDMSYNC_HARNESS_HPP

#include "ofdmsync/cfo.hpp"
#include "ofdmsync/channel.hpp"
#include "ofdmsync/frame_detect.hpp"
#include "ofdmsync/preamble.hpp"
#include "ofdmsync/stats.hpp"
#include "ofdmsync/time_sync.hpp"

#include <array>
#include <map>
#include <optional>
#include <string_view>
#include <thread>

namespace ofdmsync {

// Monte Carlo driver: N independently seeded transmissions of the preamble, each
// pushed through the selected receiver stages. Trial i draws its noise from seed
// base_seed + i, so any trial can be replayed on its own.

enum class Stage
{
    frame,
    time_sts,
    time_lts,
    cfo,
};

inline constexpr std::array<Stage, 4> kAllStages = {Stage::frame, Stage::time_sts, Stage::time_lts, Stage::cfo};

inline std::string_view to_string(Stage s)
{
    switch (s)
    {
    case Stage::frame: return "frame";
    case Stage::time_sts: return "time_sts";
    case Stage::time_lts: return "time_lts";
    case Stage::cfo: return "cfo";
    }
    return "?";
}

inline std::string_view algorithm_name(Stage s)
{
    switch (s)
    {
    case Stage::frame: return "Frame detection";
    case Stage::time_sts: return "Cross-correlation STS";
    case Stage::time_lts: return "Cross-correlation LTS";
    case Stage::cfo: return "CFO detector";
    }
    return "?";
}

inline Stage parse_stage(std::string_view s)
{
    for (const Stage st : kAllStages)
        if (s == to_string(st))
            return st;
    throw ConfigError("unknown stage '" + std::string(s) + "' (expected frame, time_sts, time_lts or cfo)");
}

/// What occupies the samples appended after each frame.
enum class GapFill
{
    noise, // channel noise continues through the gap
    zeros, // the gap stays silent
};

/// Where the CFO estimator averages the autocorrelation.
enum class CfoPlateau
{
    detect, // plateau reported by the frame detector
    known,  // the true short-training span (isolates the estimator from detection misses)
};

struct TrialPlan
{
    std::size_t n_trials = 300;
    ChannelConfig channel;
    std::vector<Stage> stages{Stage::time_sts, Stage::time_lts};
    std::uint64_t base_seed = 1;
    std::size_t gap_length = 160;
    GapFill gap_fill = GapFill::noise;
    FrameDetectConfig frame;
    CfoPlateau cfo_plateau = CfoPlateau::detect;
    double cfo_bin_hz = 1000.0;
    unsigned threads = 1;
    PreambleSpec preamble = ieee80211a_spec();

    void validate() const
    {
        if (n_trials < 1)
            throw ConfigError("n_trials must be >= 1");
        if (stages.empty())
            throw ConfigError("plan selects no stages");
        if (!(cfo_bin_hz > 0.0))
            throw ConfigError("cfo histogram bin width must be positive");
        channel.validate();
        frame.validate();
        preamble.validate();
    }
};

struct TrialStatistics
{
    Stage stage = Stage::frame;
    std::size_t n_trials = 0;
    std::vector<std::optional<double>> per_trial; // index = trial, nullopt = no detection
    std::vector<double> values;                   // successes only, in trial order
    std::optional<double> mean;                   // absent when every trial failed
    std::optional<double> variance;
    std::vector<HistogramBin> histogram;
    std::size_t failures = 0;
    std::optional<double> injected_cfo_hz; // CFO stage only
};

using TrialReport = std::map<Stage, TrialStatistics>;

/// Detected value of each selected stage for one trial; nullopt marks a miss.
/// Timing values are symbol-end positions relative to the frame start (160 / 320 for
/// a clean 802.11a preamble); frame values are plateau starts relative to the frame
/// start; CFO values are in Hz.
inline std::map<Stage, std::optional<double>> run_trial(const TrialPlan& plan, std::size_t trial)
{
    ChannelConfig ch = plan.channel;
    ch.seed = plan.base_seed + trial;

    const auto preamble = generate_preamble(plan.preamble);
    auto rx = transmit(preamble, ch, plan.gap_fill == GapFill::noise ? plan.gap_length : 0);
    if (plan.gap_fill == GapFill::zeros)
        rx.samples.resize(rx.size() + plan.gap_length);

    const auto lead = static_cast<double>(ch.timing_offset);
    std::optional<std::vector<FrameEvent>> events;
    auto frame_events = [&]() -> const std::vector<FrameEvent>& {
        if (!events)
            events = detect_frames(rx, plan.frame);
        return *events;
    };

    std::map<Stage, std::optional<double>> out;
    for (const Stage stage : plan.stages)
    {
        std::optional<double> value;
        try
        {
            switch (stage)
            {
            case Stage::frame:
                if (!frame_events().empty())
                    value = static_cast<double>(frame_events().front().start_index) - lead;
                break;
            case Stage::time_sts:
            case Stage::time_lts: {
                const auto t = stage == Stage::time_sts ? TrainingTemplate::sts : TrainingTemplate::lts;
                const auto est = estimate_timing(rx, default_time_sync(t, plan.preamble, ch.timing_offset), plan.preamble);
                value = static_cast<double>(est.position) - lead;
                break;
            }
            case Stage::cfo: {
                std::optional<PlateauSpan> span;
                if (plan.cfo_plateau == CfoPlateau::known)
                {
                    const auto& spec = plan.preamble;
                    span = PlateauSpan{ch.timing_offset,
                                       ch.timing_offset + spec.sts_length() - plan.frame.lag - plan.frame.window};
                }
                else if (!frame_events().empty())
                {
                    span = plateau_span(frame_events().front(), plan.frame, plan.preamble);
                }
                if (span)
                    value = estimate_cfo(rx, plan.frame.lag, *span, plan.frame.window).delta_f_hz;
                break;
            }
            }
        }
        catch (const EstimationError&)
        {
            value.reset();
        }
        out[stage] = value;
    }
    return out;
}

inline TrialStatistics summarize(Stage stage, std::vector<std::optional<double>> per_trial, double bin_width)
{
    TrialStatistics st;
    st.stage = stage;
    st.n_trials = per_trial.size();
    st.per_trial = std::move(per_trial);
    for (const auto& v : st.per_trial)
    {
        if (v)
            st.values.push_back(*v);
        else
            ++st.failures;
    }
    if (!st.values.empty())
    {
        st.mean = mean(st.values);
        st.variance = variance(st.values);
        st.histogram = make_histogram(st.values, bin_width);
    }
    return st;
}

inline TrialReport run_trials(const TrialPlan& plan)
{
    plan.validate();

    std::vector<std::map<Stage, std::optional<double>>> results(plan.n_trials);
    const unsigned workers = std::max(1u, std::min<unsigned>(plan.threads, static_cast<unsigned>(plan.n_trials)));
    if (workers == 1)
    {
        for (std::size_t i = 0; i < plan.n_trials; ++i)
            results[i] = run_trial(plan, i);
    }
    else
    {
        // Strided split; every trial writes only its own slot, so the merge below is
        // in trial order regardless of scheduling.
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try
                {
                    for (std::size_t i = w; i < plan.n_trials; i += workers)
                        results[i] = run_trial(plan, i);
                }
                catch (...)
                {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& t : pool)
            t.join();
        for (const auto& e : errors)
            if (e)
                std::rethrow_exception(e);
    }

    TrialReport report;
    for (const Stage stage : plan.stages)
    {
        std::vector<std::optional<double>> per_trial(plan.n_trials);
        for (std::size_t i = 0; i < plan.n_trials; ++i)
            per_trial[i] = results[i].at(stage);
        auto st = summarize(stage, std::move(per_trial), stage == Stage::cfo ? plan.cfo_bin_hz : 1.0);
        if (stage == Stage::cfo)
            st.injected_cfo_hz = plan.channel.cfo_hz;
        report[stage] = std::move(st);
    }
    return report;
}

} // namespace ofdmsync

#endif
