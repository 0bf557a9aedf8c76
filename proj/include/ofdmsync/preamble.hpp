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

#ifndef OFDMSYNC_PREAMBLE_HPP
#define OFDMSYNC_PREAMBLE_HPP

#include "ofdmsync/dft.hpp"
#include "ofdmsync/types.hpp"

#include <array>
#include <bit>
#include <cstdint>

namespace ofdmsync {

// IEEE 802.11a PLCP training preamble.
//
//   | t1 ... t10 (10 x 16) | GI2 (32) | T1 (64) | T2 (64) |
//   0                     160        192       256       320
//
// The short and long symbols are defined on subcarriers -26..26 of a 64-point
// grid. Bin k is stored at index (k + N) mod N.

struct PreambleSpec
{
    std::size_t fft_size = 64;
    std::vector<Complex> short_freq;
    std::vector<Complex> long_freq;
    std::size_t short_symbol_len = 16;
    std::size_t short_repeats = 10;
    std::size_t guard_len = 32;
    std::size_t long_symbol_len = 64;
    std::size_t long_repeats = 2;
    double sample_rate = 20e6;

    std::size_t sts_length() const noexcept { return short_repeats * short_symbol_len; }
    std::size_t lts_length() const noexcept { return guard_len + long_repeats * long_symbol_len; }
    std::size_t total_length() const noexcept { return sts_length() + lts_length(); }

    /// First sample of the last long symbol inside the preamble.
    std::size_t last_long_symbol_start() const noexcept { return total_length() - long_symbol_len; }

    void validate() const;
};

namespace detail {

// Subcarriers -26..26.
inline constexpr std::array<std::int8_t, 53> kShortPattern = {
    0, 0, 1, 0, 0, 0, -1, 0, 0, 0, 1, 0, 0, 0, -1, 0, 0, 0, -1, 0, 0, 0, 1, 0, 0, 0, 0,
    0, 0, 0, -1, 0, 0, 0, -1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0};

inline constexpr std::array<std::int8_t, 53> kLongPattern = {
    1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, 1, 1, 0,
    1, -1, -1, 1, 1, -1, 1, -1, 1, -1, -1, -1, -1, -1, 1, 1, -1, -1, 1, -1, 1, -1, 1, 1, 1, 1};

inline std::vector<Complex> place_subcarriers(const std::array<std::int8_t, 53>& pattern, Complex unit,
                                              std::size_t fft_size)
{
    std::vector<Complex> bins(fft_size);
    const auto n = static_cast<std::ptrdiff_t>(fft_size);
    for (std::ptrdiff_t k = -26; k <= 26; ++k)
        bins[static_cast<std::size_t>((k + n) % n)] = static_cast<double>(pattern[k + 26]) * unit;
    return bins;
}

} // namespace detail

/// Default 802.11a preamble at 20 MHz.
inline PreambleSpec ieee80211a_spec()
{
    PreambleSpec spec;
    const double s = std::sqrt(13.0 / 6.0);
    spec.short_freq = detail::place_subcarriers(detail::kShortPattern, Complex(s, s), spec.fft_size);
    spec.long_freq = detail::place_subcarriers(detail::kLongPattern, Complex(1.0, 0.0), spec.fft_size);
    return spec;
}

inline void PreambleSpec::validate() const
{
    if (fft_size == 0 || !std::has_single_bit(fft_size))
        throw ConfigError("fft_size must be a power of two");
    if (short_freq.size() != fft_size || long_freq.size() != fft_size)
        throw ConfigError("frequency-domain training values must have fft_size entries");
    if (short_symbol_len == 0 || fft_size % short_symbol_len != 0)
        throw ConfigError("short_symbol_len must divide fft_size");
    if (long_symbol_len != fft_size)
        throw ConfigError("long_symbol_len must equal fft_size");
    if (guard_len > long_symbol_len)
        throw ConfigError("guard_len cannot exceed long_symbol_len");
    if (short_repeats == 0 || long_repeats == 0)
        throw ConfigError("symbol repeat counts must be positive");
    require_sample_rate(sample_rate);
}

namespace detail {

struct RawSymbols
{
    std::vector<Complex> short_period; // one short symbol, unscaled
    std::vector<Complex> long_symbol;  // one long symbol, unscaled
    double scale;                      // brings the full preamble to unit mean power
};

inline RawSymbols raw_symbols(const PreambleSpec& spec)
{
    spec.validate();
    auto short_full = inverse_dft(spec.short_freq);
    RawSymbols raw{
        {short_full.begin(), short_full.begin() + static_cast<std::ptrdiff_t>(spec.short_symbol_len)},
        inverse_dft(spec.long_freq),
        1.0};

    const double sts_energy =
        static_cast<double>(spec.short_repeats) * mean_power<double>(raw.short_period) *
        static_cast<double>(spec.short_symbol_len);
    const double lts_energy = static_cast<double>(spec.lts_length()) * mean_power<double>(raw.long_symbol);
    const double power = (sts_energy + lts_energy) / static_cast<double>(spec.total_length());
    if (!(power > 0.0))
        throw ConfigError("training values produce a zero-power preamble");
    raw.scale = 1.0 / std::sqrt(power);
    for (auto& v : raw.short_period)
        v *= raw.scale;
    for (auto& v : raw.long_symbol)
        v *= raw.scale;
    return raw;
}

} // namespace detail

/// Ten short symbols, built by tiling one period so the repetition is exact.
inline SampleBuffer generate_sts(const PreambleSpec& spec)
{
    const auto raw = detail::raw_symbols(spec);
    SampleBuffer out;
    out.sample_rate = spec.sample_rate;
    out.samples.reserve(spec.sts_length());
    for (std::size_t r = 0; r < spec.short_repeats; ++r)
        out.samples.insert(out.samples.end(), raw.short_period.begin(), raw.short_period.end());
    return out;
}

/// Cyclic prefix followed by the repeated long symbol.
inline SampleBuffer generate_lts(const PreambleSpec& spec)
{
    const auto raw = detail::raw_symbols(spec);
    SampleBuffer out;
    out.sample_rate = spec.sample_rate;
    out.samples.reserve(spec.lts_length());
    out.samples.insert(out.samples.end(), raw.long_symbol.end() - static_cast<std::ptrdiff_t>(spec.guard_len),
                       raw.long_symbol.end());
    for (std::size_t r = 0; r < spec.long_repeats; ++r)
        out.samples.insert(out.samples.end(), raw.long_symbol.begin(), raw.long_symbol.end());
    return out;
}

inline SampleBuffer generate_preamble(const PreambleSpec& spec)
{
    auto out = generate_sts(spec);
    const auto lts = generate_lts(spec);
    out.samples.insert(out.samples.end(), lts.samples.begin(), lts.samples.end());
    return out;
}

/// One short symbol (the STS correlation template).
inline std::vector<Complex> short_symbol(const PreambleSpec& spec)
{
    return detail::raw_symbols(spec).short_period;
}

/// One long symbol (the LTS correlation template).
inline std::vector<Complex> long_symbol(const PreambleSpec& spec)
{
    return detail::raw_symbols(spec).long_symbol;
}

} // namespace ofdmsync

#endif
