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

#ifndef OFDMSYNC_CHANNEL_HPP
#define OFDMSYNC_CHANNEL_HPP

#include "ofdmsync/types.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

namespace ofdmsync {

struct Tap
{
    std::size_t delay = 0; // samples
    Complex gain{1.0, 0.0};

    friend bool operator==(const Tap&, const Tap&) = default;
};

using TapProfile = std::vector<Tap>;

/// Simulated link: integer lead delay, tapped-delay multipath, CFO rotation and AWGN,
/// applied in that order.
struct ChannelConfig
{
    double cfo_hz = 0.0;
    std::optional<double> snr_db; // nullopt = noiseless
    TapProfile taps{Tap{}};
    std::size_t timing_offset = 0;
    std::uint64_t seed = 0x5eed;

    bool noiseless() const noexcept { return !snr_db.has_value(); }
    void validate() const;
};

inline void validate_taps(const TapProfile& taps)
{
    if (taps.empty())
        throw ConfigError("tap profile needs at least one tap");
    for (std::size_t i = 0; i < taps.size(); ++i)
    {
        if (!std::isfinite(taps[i].gain.real()) || !std::isfinite(taps[i].gain.imag()))
            throw ConfigError("tap " + std::to_string(i) + " has a non-finite gain");
        if (i > 0 && taps[i].delay <= taps[i - 1].delay)
            throw ConfigError("tap delays must be strictly increasing (tap " + std::to_string(i) + ")");
    }
}

inline void ChannelConfig::validate() const
{
    validate_taps(taps);
    if (!std::isfinite(cfo_hz))
        throw ConfigError("cfo_hz must be finite");
    if (snr_db && !std::isfinite(*snr_db))
        throw ConfigError("snr_db must be finite (or noiseless)");
}

/// out[n] = in[n] exp(+j 2 pi f n Ts)
inline SampleBuffer apply_cfo(const SampleBuffer& signal, double cfo_hz)
{
    require_sample_rate(signal.sample_rate);
    SampleBuffer out = signal;
    const double step = 2.0 * std::numbers::pi * cfo_hz / signal.sample_rate;
    for (std::size_t n = 0; n < out.size(); ++n)
        out.samples[n] *= std::polar(1.0, step * static_cast<double>(n));
    return out;
}

/// Sum of delayed, weighted copies. Output is longer than the input by the largest delay.
inline SampleBuffer apply_multipath(const SampleBuffer& signal, const TapProfile& taps)
{
    validate_taps(taps);
    SampleBuffer out;
    out.sample_rate = signal.sample_rate;
    if (signal.empty())
        return out;
    out.samples.assign(signal.size() + taps.back().delay, Complex{});
    for (const auto& tap : taps)
        for (std::size_t n = 0; n < signal.size(); ++n)
            out.samples[n + tap.delay] += tap.gain * signal.samples[n];
    return out;
}

/// Adds circularly-symmetric complex Gaussian noise of the given total variance to
/// samples [first, first + count). Noise state comes from seed alone.
inline void add_noise(SampleBuffer& signal, double noise_power, std::uint64_t seed, std::size_t first = 0,
                      std::size_t count = static_cast<std::size_t>(-1))
{
    if (!(noise_power >= 0.0) || !std::isfinite(noise_power))
        throw ConfigError("noise power must be non-negative and finite");
    first = std::min(first, signal.size());
    const std::size_t last = count > signal.size() - first ? signal.size() : first + count;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(noise_power / 2.0));
    for (std::size_t n = first; n < last; ++n)
    {
        const double re = gauss(rng);
        const double im = gauss(rng);
        signal.samples[n] += Complex(re, im);
    }
}

inline double noise_power_for(double signal_power, double snr_db)
{
    return signal_power / std::pow(10.0, snr_db / 10.0);
}

/// AWGN at snr_db relative to the measured mean power of the whole buffer.
inline SampleBuffer add_awgn(const SampleBuffer& signal, std::optional<double> snr_db, std::uint64_t seed)
{
    if (!snr_db)
        return signal;
    if (!std::isfinite(*snr_db))
        throw ConfigError("snr_db must be finite");
    const double power = mean_power(signal);
    if (!(power > 0.0))
        throw ConfigError("cannot set an SNR on a zero-power signal");
    SampleBuffer out = signal;
    add_noise(out, noise_power_for(power, *snr_db), seed);
    return out;
}

/// Runs a buffer through the configured channel. The SNR refers to the frame itself
/// (samples from timing_offset through the multipath tail), so lead-in and trailing
/// silence do not dilute it; noise then covers the whole output.
inline SampleBuffer transmit(const SampleBuffer& preamble, const ChannelConfig& cfg, std::size_t trailing = 0)
{
    cfg.validate();
    SampleBuffer padded;
    padded.sample_rate = preamble.sample_rate;
    padded.samples.reserve(cfg.timing_offset + preamble.size() + trailing);
    padded.samples.assign(cfg.timing_offset, Complex{});
    padded.samples.insert(padded.samples.end(), preamble.samples.begin(), preamble.samples.end());
    padded.samples.resize(padded.size() + trailing);

    auto out = apply_cfo(apply_multipath(padded, cfg.taps), cfg.cfo_hz);
    if (cfg.snr_db)
    {
        const std::size_t frame_len = preamble.size() + cfg.taps.back().delay;
        const double power = mean_power(out.view(cfg.timing_offset, frame_len));
        if (!(power > 0.0))
            throw ConfigError("cannot set an SNR on a zero-power signal");
        add_noise(out, noise_power_for(power, *cfg.snr_db), cfg.seed);
    }
    return out;
}

// ----- Tap profile files --------------------------------------------------
// One tap per line: "delay_samples gain_re gain_im". '#' starts a comment.

inline TapProfile parse_taps(std::istream& in, const std::string& origin = "<stream>")
{
    TapProfile taps;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream fields(line);
        long long delay = 0;
        double re = 0.0, im = 0.0;
        if (!(fields >> delay))
        {
            if (line.find_first_not_of(" \t\r") == std::string::npos)
                continue;
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'delay gain_re gain_im'");
        }
        std::string extra;
        if (!(fields >> re >> im) || (fields >> extra) || delay < 0)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'delay gain_re gain_im'");
        taps.push_back(Tap{static_cast<std::size_t>(delay), Complex(re, im)});
    }
    try
    {
        validate_taps(taps);
    }
    catch (const ConfigError& e)
    {
        throw ConfigError(origin + ": " + e.what());
    }
    return taps;
}

inline TapProfile load_taps(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open tap profile '" + path + "'");
    return parse_taps(in, path);
}

} // namespace ofdmsync

#endif
