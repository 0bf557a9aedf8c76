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

// ofdmsync command-line front end.
//
// Exit codes: 0 success, 1 ran correctly but nothing was detected,
//             2 usage or configuration error, 3 I/O or file-format error.

#include "ofdmsync/ofdmsync.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

using namespace ofdmsync;

constexpr int kExitOk = 0;
constexpr int kExitNotDetected = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

constexpr std::uint64_t kDefaultSeed = 1;

// Either a sample file or a preamble synthesized through the simulated channel.
struct SignalSource
{
    std::string in_path;
    std::string in_format; // empty = by extension
    double sample_rate = 20e6;
    std::uint64_t seed = kDefaultSeed;
    std::string snr_db = "none";
    double cfo_hz = 0.0;
    std::string taps_path;
    std::size_t offset = 0;
    std::size_t trailing = 160;

    void add_options(CLI::App& cmd, bool allow_input)
    {
        if (allow_input)
        {
            cmd.add_option("--in", in_path, "Input sample file (raw cf32 IQ, or CSV when named *.csv)");
            cmd.add_option("--in-format", in_format, "Override input format detection")
                ->check(CLI::IsMember({"iq", "csv"}));
        }
        cmd.add_option("--sample-rate", sample_rate, "Sample rate in Hz")->capture_default_str();
        cmd.add_option("--seed", seed, "Noise seed")->capture_default_str();
        cmd.add_option("--snr-db", snr_db, "Channel SNR in dB, or 'none' for noiseless")->capture_default_str();
        cmd.add_option("--cfo-hz", cfo_hz, "Carrier frequency offset applied by the channel")->capture_default_str();
        cmd.add_option("--taps", taps_path, "Tap profile file (delay_samples gain_re gain_im per line)");
        cmd.add_option("--offset", offset, "Lead-in samples before the frame")->capture_default_str();
        cmd.add_option("--trailing", trailing, "Samples appended after the frame")->capture_default_str();
    }

    bool from_file() const { return !in_path.empty(); }

    ChannelConfig channel() const
    {
        ChannelConfig ch;
        ch.cfo_hz = cfo_hz;
        ch.snr_db = parse_snr(snr_db, "--snr-db");
        if (!taps_path.empty())
            ch.taps = load_taps(taps_path);
        ch.timing_offset = offset;
        ch.seed = seed;
        return ch;
    }

    SampleBuffer read_file() const
    {
        const auto fmt = in_format.empty() ? io::format_for_path(in_path) : io::parse_format(in_format);
        return io::read_samples(in_path, sample_rate, fmt);
    }

    SampleBuffer load(const PreambleSpec& spec) const
    {
        return from_file() ? read_file() : transmit(generate_preamble(spec), channel(), trailing);
    }

    std::size_t lead() const { return from_file() ? 0 : offset; }
};

PreambleSpec spec_at(double sample_rate)
{
    auto spec = ieee80211a_spec();
    spec.sample_rate = sample_rate;
    return spec;
}

template <typename Writer>
void write_text_file(const std::string& path, Writer&& writer)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw IoError("cannot open '" + path + "' for writing");
    writer(os);
    os.flush();
    if (!os)
        throw IoError("write to '" + path + "' failed");
}

// "START:LEN" / "START:END"
std::pair<long long, long long> parse_pair(const std::string& text, const char* flag)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ConfigError(std::string(flag) + " expects A:B, got '" + text + "'");
    try
    {
        std::size_t used = 0;
        const long long a = std::stoll(text.substr(0, colon), &used);
        if (used != colon)
            throw std::invalid_argument(text);
        const std::string rest = text.substr(colon + 1);
        const long long b = std::stoll(rest, &used);
        if (used != rest.size())
            throw std::invalid_argument(text);
        return {a, b};
    }
    catch (const std::logic_error&)
    {
        throw ConfigError(std::string(flag) + " expects two integers A:B, got '" + text + "'");
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Preamble-based OFDM synchronization laboratory (IEEE 802.11a training preamble)"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    int exit_code = kExitOk;

    // ----- preamble ---------------------------------------------------------
    auto* preamble_cmd = app.add_subcommand("preamble", "Write the 320-sample training preamble");
    std::string preamble_out;
    std::string preamble_format = "iq";
    double preamble_rate = 20e6;
    preamble_cmd->add_option("--out", preamble_out, "Output file")->required();
    preamble_cmd->add_option("--format", preamble_format, "Output format")
        ->check(CLI::IsMember({"iq", "csv"}))
        ->capture_default_str();
    preamble_cmd->add_option("--sample-rate", preamble_rate, "Sample rate in Hz")->capture_default_str();
    preamble_cmd->callback([&] {
        const auto p = generate_preamble(spec_at(preamble_rate));
        io::write_samples(preamble_out, p, io::parse_format(preamble_format));
        std::printf("samples=%zu power=%.9f duration_us=%.3f\n", p.size(), mean_power(p), p.duration() * 1e6);
    });

    // ----- channel ----------------------------------------------------------
    auto* channel_cmd = app.add_subcommand("channel", "Pass a signal (default: the preamble) through the channel");
    SignalSource channel_src;
    std::string channel_out;
    std::string channel_format = "iq";
    channel_src.add_options(*channel_cmd, true);
    channel_cmd->add_option("--out", channel_out, "Output file")->required();
    channel_cmd->add_option("--format", channel_format, "Output format")
        ->check(CLI::IsMember({"iq", "csv"}))
        ->capture_default_str();
    channel_cmd->callback([&] {
        const auto spec = spec_at(channel_src.sample_rate);
        const auto tx = channel_src.from_file() ? channel_src.read_file() : generate_preamble(spec);
        const auto rx = transmit(tx, channel_src.channel(), channel_src.trailing);
        io::write_samples(channel_out, rx, io::parse_format(channel_format));
        std::printf("samples=%zu power=%.9f\n", rx.size(), mean_power(rx));
    });

    // ----- detect -----------------------------------------------------------
    auto* detect_cmd = app.add_subcommand("detect", "Frame detection (lag autocorrelation vs. power)");
    SignalSource detect_src;
    FrameDetectConfig detect_cfg;
    std::string detect_mode = "exact";
    std::string detect_trace;
    detect_src.add_options(*detect_cmd, true);
    detect_cmd->add_option("--lag", detect_cfg.lag, "Autocorrelation lag L")->capture_default_str();
    detect_cmd->add_option("--sum-window", detect_cfg.window, "Moving-sum length")->capture_default_str();
    detect_cmd->add_option("--threshold", detect_cfg.threshold, "Metric threshold")->capture_default_str();
    detect_cmd->add_option("--min-plateau", detect_cfg.min_plateau, "Minimum plateau length")->capture_default_str();
    detect_cmd->add_option("--mode", detect_mode, "Metric arithmetic")
        ->check(CLI::IsMember({"exact", "l1_approx"}))
        ->capture_default_str();
    detect_cmd->add_option("--trace", detect_trace, "Write n,abs_r_sq,p_sq,metric,above_threshold CSV");
    detect_cmd->callback([&] {
        detect_cfg.mode = parse_metric_mode(detect_mode);
        detect_cfg.validate();
        const auto r = detect_src.load(spec_at(detect_src.sample_rate));
        if (!detect_trace.empty())
            write_text_file(detect_trace, [&](std::ostream& os) { write_frame_trace(os, r, detect_cfg); });
        const auto events = detect_frames(r, detect_cfg);
        std::printf("frames=%zu\n", events.size());
        for (const auto& e : events)
            std::printf("frame start=%zu end=%zu length=%zu peak_metric=%.6f\n", e.start_index, e.end_index,
                        e.length(), e.peak_metric);
        exit_code = events.empty() ? kExitNotDetected : kExitOk;
    });

    // ----- timesync ---------------------------------------------------------
    auto* timesync_cmd = app.add_subcommand("timesync", "Cross-correlation timing against the STS or LTS");
    SignalSource timesync_src;
    std::string timesync_template = "lts";
    std::string timesync_window;
    std::string timesync_trace;
    timesync_src.add_options(*timesync_cmd, true);
    timesync_cmd->add_option("--template", timesync_template, "Training symbol used as template")
        ->check(CLI::IsMember({"sts", "lts"}))
        ->capture_default_str();
    timesync_cmd->add_option("--window", timesync_window,
                             "Search window START:LEN over correlation start indices "
                             "(default: last symbol start, two symbols long)");
    timesync_cmd->add_option("--trace", timesync_trace, "Write n,abs_lambda CSV");
    timesync_cmd->callback([&] {
        const auto spec = spec_at(timesync_src.sample_rate);
        const auto t = parse_template(timesync_template);
        auto cfg = default_time_sync(t, spec, timesync_src.lead());
        if (!timesync_window.empty())
        {
            const auto [start, len] = parse_pair(timesync_window, "--window");
            if (len <= 0)
                throw ConfigError("--window length must be positive");
            cfg.window = {start, static_cast<std::size_t>(len)};
        }
        const auto r = timesync_src.load(spec);
        if (!timesync_trace.empty())
            write_text_file(timesync_trace, [&](std::ostream& os) { write_timing_trace(os, r, t, spec); });
        auto est = estimate_timing(r, cfg, spec);
        est.offset_error = static_cast<long long>(est.position) - static_cast<long long>(cfg.expected_peak) -
                           static_cast<long long>(timesync_src.lead());
        std::printf("template=%s n_xc_max=%zu position=%zu peak_magnitude=%.6f offset_error=%lld\n",
                    std::string(to_string(t)).c_str(), est.n_xc_max, est.position, est.peak_magnitude,
                    est.offset_error);
    });

    // ----- cfo --------------------------------------------------------------
    auto* cfo_cmd = app.add_subcommand("cfo", "Estimate (and optionally correct) the carrier frequency offset");
    SignalSource cfo_src;
    FrameDetectConfig cfo_detect;
    std::string cfo_span;
    std::string cfo_correct_out;
    std::string cfo_trace;
    cfo_src.add_options(*cfo_cmd, true);
    cfo_cmd->add_option("--lag", cfo_detect.lag, "Autocorrelation lag L")->capture_default_str();
    cfo_cmd->add_option("--threshold", cfo_detect.threshold, "Frame detection threshold")->capture_default_str();
    cfo_cmd->add_option("--span", cfo_span, "Averaging span START:END (default: detected plateau)");
    cfo_cmd->add_option("--correct-out", cfo_correct_out, "Write the CFO-corrected signal here");
    cfo_cmd->add_option("--trace", cfo_trace, "Write n,abs_r,arg_r CSV");
    cfo_cmd->callback([&] {
        cfo_detect.window = cfo_detect.lag;
        cfo_detect.validate();
        const auto spec = spec_at(cfo_src.sample_rate);
        const auto r = cfo_src.load(spec);
        if (!cfo_trace.empty())
            write_text_file(cfo_trace, [&](std::ostream& os) { write_cfo_trace(os, r, cfo_detect.lag); });

        PlateauSpan span;
        if (!cfo_span.empty())
        {
            const auto [a, b] = parse_pair(cfo_span, "--span");
            if (a < 0 || b < a)
                throw ConfigError("--span needs 0 <= START <= END");
            span = {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
        }
        else
        {
            const auto events = detect_frames(r, cfo_detect);
            if (events.empty())
            {
                std::printf("no frame detected; nothing to estimate\n");
                exit_code = kExitNotDetected;
                return;
            }
            span = plateau_span(events.front(), cfo_detect, spec);
        }
        const auto est = estimate_cfo(r, cfo_detect.lag, span);
        std::printf("delta_f_hz=%.6f phase_rad=%.9f span=%zu:%zu unambiguous_hz=%.1f\n", est.delta_f_hz,
                    est.phase_rad, est.span.start, est.span.end,
                    cfo_unambiguous_range(cfo_detect.lag, r.sample_rate));
        if (!cfo_correct_out.empty())
            io::write_samples(cfo_correct_out, correct_cfo(r, est.delta_f_hz), io::format_for_path(cfo_correct_out));
    });

    // ----- trials -----------------------------------------------------------
    auto* trials_cmd = app.add_subcommand("trials", "Monte Carlo variance study driven by a plan file");
    std::string trials_config;
    std::string trials_out;
    int trials_threads = -1;
    trials_cmd->add_option("--config", trials_config, "Plan file (key = value lines)")->required();
    trials_cmd->add_option("--out", trials_out, "Output directory for CSV artifacts")->required();
    trials_cmd->add_option("--threads", trials_threads, "Worker threads (overrides the plan)");
    trials_cmd->callback([&] {
        auto plan = load_plan(trials_config);
        if (trials_threads >= 0)
            plan.threads = static_cast<unsigned>(trials_threads);
        const auto report = run_trials(plan);
        emit_report(report, plan.base_seed, trials_out);
        write_summary_table(std::cout, report);
    });

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        app.exit(e);
        return kExitUsage;
    }
    catch (const EstimationError& e)
    {
        std::cerr << "ofdmsync: " << e.what() << '\n';
        return kExitNotDetected;
    }
    catch (const IoError& e)
    {
        std::cerr << "ofdmsync: " << e.what() << '\n';
        return kExitIo;
    }
    catch (const FormatError& e)
    {
        std::cerr << "ofdmsync: " << e.what() << '\n';
        return kExitIo;
    }
    catch (const Error& e)
    {
        std::cerr << "ofdmsync: " << e.what() << '\n';
        return kExitUsage;
    }
    return exit_code;
}
