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


#include <catch_amalgamated.hpp>

#include "ofdmsync/dft.hpp"
#include "oracles.hpp"

using namespace ofdmsync;
using Catch::Matchers::WithinAbs;

TEST_CASE("inverse_dft of zeros is zeros", "[dft]")
{
    const std::vector<Complex> zeros(64);
    for (const auto& v : inverse_dft(zeros))
        CHECK(v == Complex{});
}

TEST_CASE("inverse_dft of a bin-0 impulse is the constant 1/N", "[dft]")
{
    std::vector<Complex> x(64);
    x[0] = 1.0;
    for (const auto& v : inverse_dft(x))
    {
        CHECK_THAT(v.real(), WithinAbs(1.0 / 64.0, 1e-15));
        CHECK_THAT(v.imag(), WithinAbs(0.0, 1e-15));
    }
}

TEST_CASE("transforms match direct summation", "[dft][oracle]")
{
    for (std::size_t n : {1u, 2u, 4u, 8u, 16u, 32u, 64u})
    {
        for (std::uint64_t seed = 0; seed < 10; ++seed)
        {
            const auto x = oracle::random_complex(n, 1000 * n + seed);
            CHECK(oracle::max_rel_error(inverse_dft(x), oracle::direct_dft(x, true)) < 1e-9);
            CHECK(oracle::max_rel_error(forward_dft(x), oracle::direct_dft(x, false)) < 1e-9);
        }
    }
}

TEST_CASE("forward after inverse is the identity", "[dft]")
{
    for (std::size_t n : {8u, 16u, 64u})
        for (std::uint64_t seed = 0; seed < 20; ++seed)
        {
            const auto x = oracle::random_complex(n, seed);
            CHECK(oracle::max_rel_error(forward_dft(inverse_dft(x)), x) < 1e-9);
        }
}

TEST_CASE("non power-of-two lengths are rejected", "[dft]")
{
    for (std::size_t n : {0u, 3u, 48u, 63u, 65u})
    {
        const std::vector<Complex> x(n);
        CHECK_THROWS_AS(inverse_dft(x), SizingError);
        CHECK_THROWS_AS(forward_dft(x), SizingError);
    }
}

TEST_CASE("single precision instantiation", "[dft]")
{
    std::vector<std::complex<float>> x(16);
    x[1] = 1.0f;
    const auto y = inverse_dft(x);
    // e^{j 2 pi n / 16} / 16
    CHECK_THAT(y[4].real(), WithinAbs(0.0, 1e-7));
    CHECK_THAT(y[4].imag(), WithinAbs(1.0 / 16.0, 1e-7));
}
