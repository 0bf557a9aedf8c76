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

#ifndef OFDMSYNC_REPORT_HPP
#define OFDMSYNC_REPORT_HPP

#include "ofdmsync/csv.hpp"
#include "ofdmsync/harness.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ofdmsync {

// ----- Plan files ---------------------------------------------------------
//
//   # comment
//   n_trials     = 300
//   stages       = time_sts, time_lts
//   snr_db       = 10            # or "none"
//   taps         = ../data/channels/etsi_a.taps   (relative to the plan file)
//
// Unknown keys and malformed values are rejected with file:line context.

namespace detail {

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <typename Int>
Int parse_int(const std::string& v, const std::string& where)
{
    Int out{};
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
        throw ConfigError(where + ": expected an integer, got '" + v + "'");
    return out;
}

inline double parse_real(const std::string& v, const std::string& where)
{
    double out = 0.0;
    if (!csv::parse_double(v, out) || !std::isfinite(out))
        throw ConfigError(where + ": expected a finite number, got '" + v + "'");
    return out;
}

} // namespace detail

inline std::optional<double> parse_snr(const std::string& v, const std::string& where = "snr_db")
{
    if (v == "none" || v == "noiseless" || v == "inf")
        return std::nullopt;
    return detail::parse_real(v, where);
}

inline TrialPlan parse_plan(std::istream& in, const std::string& origin = "<plan>",
                            const std::filesystem::path& base_dir = {})
{
    TrialPlan plan;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        const std::string where = origin + ":" + std::to_string(lineno);
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string text = detail::trim(line);
        if (text.empty())
            continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected 'key = value'");
        const std::string key = detail::trim(std::string_view(text).substr(0, eq));
        const std::string value = detail::trim(std::string_view(text).substr(eq + 1));
        if (value.empty())
            throw ConfigError(where + ": empty value for '" + key + "'");

        if (key == "n_trials")
            plan.n_trials = detail::parse_int<std::size_t>(value, where);
        else if (key == "base_seed")
            plan.base_seed = detail::parse_int<std::uint64_t>(value, where);
        else if (key == "stages")
        {
            plan.stages.clear();
            std::istringstream list(value);
            std::string item;
            while (std::getline(list, item, ','))
            {
                const Stage s = parse_stage(detail::trim(item));
                if (std::find(plan.stages.begin(), plan.stages.end(), s) == plan.stages.end())
                    plan.stages.push_back(s);
            }
        }
        else if (key == "snr_db")
            plan.channel.snr_db = parse_snr(value, where);
        else if (key == "cfo_hz")
            plan.channel.cfo_hz = detail::parse_real(value, where);
        else if (key == "timing_offset")
            plan.channel.timing_offset = detail::parse_int<std::size_t>(value, where);
        else if (key == "taps")
        {
            std::filesystem::path p(value);
            if (p.is_relative())
                p = base_dir / p;
            plan.channel.taps = load_taps(p.string());
        }
        else if (key == "gap_length")
            plan.gap_length = detail::parse_int<std::size_t>(value, where);
        else if (key == "gap_fill")
        {
            if (value == "noise")
                plan.gap_fill = GapFill::noise;
            else if (value == "zeros")
                plan.gap_fill = GapFill::zeros;
            else
                throw ConfigError(where + ": gap_fill must be noise or zeros");
        }
        else if (key == "cfo_plateau")
        {
            if (value == "detect")
                plan.cfo_plateau = CfoPlateau::detect;
            else if (value == "known")
                plan.cfo_plateau = CfoPlateau::known;
            else
                throw ConfigError(where + ": cfo_plateau must be detect or known");
        }
        else if (key == "cfo_bin_hz")
            plan.cfo_bin_hz = detail::parse_real(value, where);
        else if (key == "threads")
            plan.threads = detail::parse_int<unsigned>(value, where);
        else if (key == "lag")
            plan.frame.lag = detail::parse_int<std::size_t>(value, where);
        else if (key == "window")
            plan.frame.window = detail::parse_int<std::size_t>(value, where);
        else if (key == "threshold")
            plan.frame.threshold = detail::parse_real(value, where);
        else if (key == "min_plateau")
            plan.frame.min_plateau = detail::parse_int<std::size_t>(value, where);
        else if (key == "metric_mode")
            plan.frame.mode = parse_metric_mode(value);
        else if (key == "sample_rate")
            plan.preamble.sample_rate = detail::parse_real(value, where);
        else
            throw ConfigError(where + ": unknown key '" + key + "'");
    }
    try
    {
        plan.validate();
    }
    catch (const ConfigError& e)
    {
        throw ConfigError(origin + ": " + e.what());
    }
    return plan;
}

inline TrialPlan load_plan(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open plan file '" + path + "'");
    return parse_plan(in, path, std::filesystem::path(path).parent_path());
}

// ----- Report artifacts ---------------------------------------------------
//
//   summary.csv          Algorithm,Trials (N),σ²,Mean,Failures,Injected Δf (Hz)
//   summary.txt          the same as an aligned table
//   trials_<stage>.csv   trial,seed,detected,value
//   histogram_<stage>.csv bin_center,count

namespace detail {

inline std::string opt_num(const std::optional<double>& v)
{
    return v ? csv::num(*v) : std::string();
}

inline std::ofstream open_out(const std::filesystem::path& p)
{
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    if (!os)
        throw IoError("cannot open '" + p.string() + "' for writing");
    return os;
}

inline void close_out(std::ofstream& os, const std::filesystem::path& p)
{
    os.flush();
    if (!os)
        throw IoError("write to '" + p.string() + "' failed");
}

} // namespace detail

inline void write_summary_csv(std::ostream& os, const TrialReport& report)
{
    os << "Algorithm,Trials (N),σ²,Mean,Failures,Injected Δf (Hz)\n";
    for (const auto& [stage, st] : report)
        csv::row(os, algorithm_name(stage), st.n_trials, detail::opt_num(st.variance), detail::opt_num(st.mean),
                 st.failures, detail::opt_num(st.injected_cfo_hz));
}

inline void write_summary_table(std::ostream& os, const TrialReport& report)
{
    char line[160];
    std::snprintf(line, sizeof line, "%-24s %12s %16s %10s\n", "Algorithm", "Trials (N)", "sigma^2", "Failures");
    os << line;
    for (const auto& [stage, st] : report)
    {
        const std::string var = st.variance ? csv::num(*st.variance) : "-";
        std::snprintf(line, sizeof line, "%-24s %12zu %16s %10zu\n", std::string(algorithm_name(stage)).c_str(),
                      st.n_trials, var.c_str(), st.failures);
        os << line;
    }
}

inline void write_trials_csv(std::ostream& os, const TrialStatistics& st, std::uint64_t base_seed)
{
    os << "trial,seed,detected,value\n";
    for (std::size_t i = 0; i < st.per_trial.size(); ++i)
        csv::row(os, i, base_seed + i, st.per_trial[i] ? 1 : 0, detail::opt_num(st.per_trial[i]));
}

inline void write_histogram_csv(std::ostream& os, const TrialStatistics& st)
{
    os << "bin_center,count\n";
    for (const auto& b : st.histogram)
        csv::row(os, b.center, b.count);
}

/// Writes all report artifacts into out_dir (created if missing). Returns the paths written.
inline std::vector<std::filesystem::path> emit_report(const TrialReport& report, std::uint64_t base_seed,
                                                      const std::filesystem::path& out_dir)
{
    if (report.empty())
        throw ConfigError("nothing to report");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw IoError("cannot create output directory '" + out_dir.string() + "': " + ec.message());

    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::filesystem::path& p, auto&& writer) {
        auto os = detail::open_out(p);
        writer(os);
        detail::close_out(os, p);
        written.push_back(p);
    };

    emit(out_dir / "summary.csv", [&](std::ostream& os) { write_summary_csv(os, report); });
    emit(out_dir / "summary.txt", [&](std::ostream& os) { write_summary_table(os, report); });
    for (const auto& [stage, st] : report)
    {
        const std::string name(to_string(stage));
        emit(out_dir / ("trials_" + name + ".csv"), [&](std::ostream& os) { write_trials_csv(os, st, base_seed); });
        emit(out_dir / ("histogram_" + name + ".csv"), [&](std::ostream& os) { write_histogram_csv(os, st); });
    }
    return written;
}

} // namespace ofdmsync

#endif
