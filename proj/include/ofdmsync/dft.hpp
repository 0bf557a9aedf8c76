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

#ifndef OFDMSYNC_DFT_HPP
#define OFDMSYNC_DFT_HPP

#include "ofdmsync/types.hpp"

#include <bit>
#include <utility>

namespace ofdmsync {

namespace detail {

// In-place iterative radix-2 transform. sign = -1 forward, +1 inverse (unscaled).
template <std::floating_point T>
void radix2_transform(std::vector<BasicComplex<T>>& a, int sign)
{
    const std::size_t n = a.size();

    for (std::size_t i = 1, j = 0; i < n; ++i)
    {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1)
    {
        const std::size_t half = len / 2;
        for (std::size_t k = 0; k < half; ++k)
        {
            // Twiddles evaluated directly (not by recurrence) to keep error at O(eps log N).
            const T angle = static_cast<T>(sign) * T(2) * std::numbers::pi_v<T> * static_cast<T>(k) /
                            static_cast<T>(len);
            const BasicComplex<T> w(std::cos(angle), std::sin(angle));
            for (std::size_t i = k; i < n; i += len)
            {
                const auto u = a[i];
                const auto v = a[i + half] * w;
                a[i] = u + v;
                a[i + half] = u - v;
            }
        }
    }
}

template <std::floating_point T>
std::vector<BasicComplex<T>> checked_copy(std::span<const BasicComplex<T>> in)
{
    if (!std::has_single_bit(in.size()))
        throw SizingError("DFT length must be a power of two, got " + std::to_string(in.size()));
    return {in.begin(), in.end()};
}

} // namespace detail

/// X[k] = sum_n x[n] exp(-j 2 pi k n / N). N must be a power of two.
template <std::floating_point T>
std::vector<BasicComplex<T>> forward_dft(std::span<const BasicComplex<T>> time)
{
    auto a = detail::checked_copy(time);
    detail::radix2_transform(a, -1);
    return a;
}

/// x[n] = (1/N) sum_k X[k] exp(+j 2 pi k n / N). The 1/N lives on the inverse.
template <std::floating_point T>
std::vector<BasicComplex<T>> inverse_dft(std::span<const BasicComplex<T>> freq)
{
    auto a = detail::checked_copy(freq);
    detail::radix2_transform(a, +1);
    const T scale = T(1) / static_cast<T>(a.size());
    for (auto& v : a)
        v *= scale;
    return a;
}

template <std::floating_point T>
std::vector<BasicComplex<T>> forward_dft(const std::vector<BasicComplex<T>>& time)
{
    return forward_dft(std::span<const BasicComplex<T>>(time));
}

template <std::floating_point T>
std::vector<BasicComplex<T>> inverse_dft(const std::vector<BasicComplex<T>>& freq)
{
    return inverse_dft(std::span<const BasicComplex<T>>(freq));
}

} // namespace ofdmsync

#endif
