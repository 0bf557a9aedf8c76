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

#ifndef OFDMSYNC_IO_HPP
#define OFDMSYNC_IO_HPP

#include "ofdmsync/csv.hpp"
#include "ofdmsync/types.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

namespace ofdmsync::io {

// Raw IQ: interleaved little-endian float32 pairs (I0, Q0, I1, Q1, ...), no header.
// CSV:    "index,re,im" header then one sample per line.

enum class SampleFormat
{
    iq,
    csv,
};

inline SampleFormat parse_format(std::string_view s)
{
    if (s == "iq" || s == "cf32" || s == "raw")
        return SampleFormat::iq;
    if (s == "csv")
        return SampleFormat::csv;
    throw ConfigError("unknown sample format '" + std::string(s) + "' (expected iq or csv)");
}

/// .csv selects CSV, anything else raw IQ.
inline SampleFormat format_for_path(std::string_view path)
{
    return path.size() >= 4 && path.substr(path.size() - 4) == ".csv" ? SampleFormat::csv : SampleFormat::iq;
}

namespace detail {

inline std::uint32_t to_le(std::uint32_t v)
{
    if constexpr (std::endian::native == std::endian::big)
        v = ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
    return v;
}

inline void put_f32(std::ostream& os, float f)
{
    const std::uint32_t le = to_le(std::bit_cast<std::uint32_t>(f));
    char bytes[4];
    std::memcpy(bytes, &le, 4);
    os.write(bytes, 4);
}

inline float get_f32(const char* p)
{
    std::uint32_t le;
    std::memcpy(&le, p, 4);
    return std::bit_cast<float>(to_le(le));
}

} // namespace detail

inline std::size_t write_iq(std::ostream& os, const SampleBuffer& buf)
{
    for (const auto& s : buf.samples)
    {
        detail::put_f32(os, static_cast<float>(s.real()));
        detail::put_f32(os, static_cast<float>(s.imag()));
    }
    return 8 * buf.size();
}

inline SampleBuffer read_iq(std::istream& is, double sample_rate, const std::string& origin = "<stream>")
{
    require_sample_rate(sample_rate);
    const std::string bytes{std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
    if (bytes.size() % 8 != 0)
        throw FormatError(origin + ": truncated IQ sample at byte offset " +
                          std::to_string(bytes.size() - bytes.size() % 8) + " (file length " +
                          std::to_string(bytes.size()) + " is not a multiple of 8)");
    SampleBuffer out;
    out.sample_rate = sample_rate;
    out.samples.resize(bytes.size() / 8);
    for (std::size_t i = 0; i < out.size(); ++i)
    {
        const float re = detail::get_f32(bytes.data() + 8 * i);
        const float im = detail::get_f32(bytes.data() + 8 * i + 4);
        if (!std::isfinite(re) || !std::isfinite(im))
            throw FormatError(origin + ": non-finite sample at byte offset " + std::to_string(8 * i));
        out.samples[i] = Complex(re, im);
    }
    return out;
}

inline void write_csv(std::ostream& os, const SampleBuffer& buf)
{
    os << "index,re,im\n";
    for (std::size_t i = 0; i < buf.size(); ++i)
        csv::row(os, i, buf.samples[i].real(), buf.samples[i].imag());
}

inline SampleBuffer read_csv(std::istream& is, double sample_rate, const std::string& origin = "<stream>")
{
    require_sample_rate(sample_rate);
    SampleBuffer out;
    out.sample_rate = sample_rate;
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(is, line))
        return out;
    ++lineno;
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != "index,re,im")
        throw FormatError(origin + ":1: expected header 'index,re,im'");
    while (std::getline(is, line))
    {
        ++lineno;
        if (line.empty() || line == "\r")
            continue;
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
        double idx = 0, re = 0, im = 0;
        if (c2 == std::string::npos || !csv::parse_double(std::string_view(line).substr(0, c1), idx) ||
            !csv::parse_double(std::string_view(line).substr(c1 + 1, c2 - c1 - 1), re) ||
            !csv::parse_double(std::string_view(line).substr(c2 + 1), im))
            throw FormatError(origin + ":" + std::to_string(lineno) + ": expected 'index,re,im'");
        if (idx != static_cast<double>(out.size()))
            throw FormatError(origin + ":" + std::to_string(lineno) + ": index " + csv::num(idx) +
                              " out of sequence");
        if (!std::isfinite(re) || !std::isfinite(im))
            throw FormatError(origin + ":" + std::to_string(lineno) + ": non-finite sample");
        out.samples.emplace_back(re, im);
    }
    return out;
}

/// Returns the number of bytes written.
inline std::size_t write_samples(const std::string& path, const SampleBuffer& buf, SampleFormat format)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw IoError("cannot open '" + path + "' for writing");
    if (format == SampleFormat::iq)
        write_iq(os, buf);
    else
        write_csv(os, buf);
    os.flush();
    if (!os)
        throw IoError("write to '" + path + "' failed");
    return static_cast<std::size_t>(os.tellp());
}

inline std::size_t write_iq(const std::string& path, const SampleBuffer& buf)
{
    return write_samples(path, buf, SampleFormat::iq);
}

inline SampleBuffer read_samples(const std::string& path, double sample_rate, SampleFormat format)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("cannot open '" + path + "' for reading");
    return format == SampleFormat::iq ? read_iq(is, sample_rate, path) : read_csv(is, sample_rate, path);
}

inline SampleBuffer read_iq(const std::string& path, double sample_rate)
{
    return read_samples(path, sample_rate, SampleFormat::iq);
}

} // namespace ofdmsync::io

#endif
