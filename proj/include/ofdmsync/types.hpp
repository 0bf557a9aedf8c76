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

#ifndef OFDMSYNC_TYPES_HPP
#define OFDMSYNC_TYPES_HPP

#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ofdmsync {

// ----- Errors ------------------------------------------------------------

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Buffer or transform length does not fit the requested operation.
class SizingError : public Error
{
public:
    using Error::Error;
};

/// Invalid configuration value (spec, channel, plan, CLI flags).
class ConfigError : public Error
{
public:
    using Error::Error;
};

/// Malformed sample file content.
class FormatError : public Error
{
public:
    using Error::Error;
};

/// Filesystem failure; the message carries the path.
class IoError : public Error
{
public:
    using Error::Error;
};

/// No coherent signal to estimate from (e.g. zero autocorrelation).
class EstimationError : public Error
{
public:
    using Error::Error;
};

// ----- Samples -----------------------------------------------------------

template <std::floating_point T>
using BasicComplex = std::complex<T>;

using Complex = BasicComplex<double>;

/// Complex baseband samples at a fixed sample rate.
template <std::floating_point T>
struct BasicSampleBuffer
{
    std::vector<BasicComplex<T>> samples;
    double sample_rate = 20e6; // Hz

    std::size_t size() const noexcept { return samples.size(); }
    bool empty() const noexcept { return samples.empty(); }

    double sample_period() const noexcept { return 1.0 / sample_rate; }
    double duration() const noexcept { return static_cast<double>(samples.size()) / sample_rate; }

    std::span<const BasicComplex<T>> view() const noexcept { return samples; }
    std::span<const BasicComplex<T>> view(std::size_t offset, std::size_t count) const
    {
        if (offset > samples.size() || count > samples.size() - offset)
            throw SizingError("sample view [" + std::to_string(offset) + ", " +
                              std::to_string(offset + count) + ") exceeds buffer of " +
                              std::to_string(samples.size()));
        return std::span<const BasicComplex<T>>(samples).subspan(offset, count);
    }

    const BasicComplex<T>& operator[](std::size_t i) const { return samples[i]; }
    BasicComplex<T>& operator[](std::size_t i) { return samples[i]; }
};

using SampleBuffer = BasicSampleBuffer<double>;

template <std::floating_point T>
bool all_finite(std::span<const BasicComplex<T>> x) noexcept
{
    for (const auto& v : x)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            return false;
    return true;
}

template <std::floating_point T>
T mean_power(std::span<const BasicComplex<T>> x) noexcept
{
    if (x.empty())
        return T(0);
    T acc = 0;
    for (const auto& v : x)
        acc += std::norm(v);
    return acc / static_cast<T>(x.size());
}

inline double mean_power(const SampleBuffer& b) noexcept
{
    return mean_power(b.view());
}

inline void require_sample_rate(double sample_rate)
{
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate))
        throw ConfigError("sample rate must be positive and finite, got " + std::to_string(sample_rate));
}

} // namespace ofdmsync

#endif
