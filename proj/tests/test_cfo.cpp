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

#include "ofdmsync/cfo.hpp"
#include "ofdmsync/channel.hpp"
#include "oracles.hpp"

using namespace ofdmsync;
using Catch::Matchers::WithinAbs;

namespace {

const PreambleSpec kSpec = ieee80211a_spec();

SampleBuffer impaired(double cfo_hz, std::size_t lead = 0)
{
    ChannelConfig ch;
    ch.cfo_hz = cfo_hz;
    ch.timing_offset = lead;
    return transmit(generate_preamble(kSpec), ch, 100);
}

CfoEstimate detect_and_estimate(const SampleBuffer& r)
{
    const FrameDetectConfig cfg;
    const auto events = detect_frames(r, cfg);
    REQUIRE(events.size() == 1);
    return estimate_cfo(r, cfg.lag, plateau_span(events.front(), cfg, kSpec));
}

} // namespace

TEST_CASE("unambiguous range is fs / 2L", "[cfo]")
{
    CHECK(cfo_unambiguous_range(16, 20e6) == 625e3);
}

TEST_CASE("noiseless CFO estimates at the reference offsets", "[cfo]")
{
    CHECK_THAT(detect_and_estimate(impaired(0.0)).delta_f_hz, WithinAbs(0.0, 1e-6));

    const auto e100 = detect_and_estimate(impaired(100e3));
    CHECK_THAT(e100.delta_f_hz, WithinAbs(100e3, 1.0));
    // arg R = -2 pi * 100e3 * 16 * 50 ns = -0.16 pi
    CHECK_THAT(e100.phase_rad, WithinAbs(-0.16 * std::numbers::pi, 1e-9));

    CHECK_THAT(detect_and_estimate(impaired(200e3)).delta_f_hz, WithinAbs(200e3, 1.0));
}

TEST_CASE("estimate sign follows the injected offset", "[cfo]")
{
    CHECK(detect_and_estimate(impaired(-150e3)).delta_f_hz < 0.0);
    CHECK(detect_and_estimate(impaired(150e3)).delta_f_hz > 0.0);
}

TEST_CASE("round trip across the unambiguous range", "[cfo][property]")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> f(-620e3, 620e3);
    std::uniform_int_distribution<std::size_t> lead(0, 200);
    for (int i = 0; i < 200; ++i)
    {
        const double cfo = f(rng);
        const auto est = detect_and_estimate(impaired(cfo, lead(rng)));
        REQUIRE_THAT(est.delta_f_hz, WithinAbs(cfo, 1.0));
    }
}

TEST_CASE("offsets past 625 kHz alias to the other edge", "[cfo]")
{
    for (double delta : {1e3, 10e3, 50e3})
    {
        const auto est = detect_and_estimate(impaired(625e3 + delta));
        CHECK_THAT(est.delta_f_hz, WithinAbs(-625e3 + delta, 1.0));
    }
}

TEST_CASE("phase is reported in (-pi, pi]", "[cfo]")
{
    // Exactly fs/2L lands on the branch cut.
    const auto est = estimate_cfo(impaired(625e3), 16, {0, 128});
    CHECK(est.phase_rad > -std::numbers::pi);
    CHECK(est.phase_rad <= std::numbers::pi);
}

TEST_CASE("correct_cfo", "[cfo]")
{
    SampleBuffer x;
    x.samples = oracle::random_complex(1000, 3);
    SECTION("zero offset is the identity")
    {
        CHECK(correct_cfo(x, 0.0).samples == x.samples);
    }
    SECTION("inverts apply_cfo and preserves magnitude")
    {
        for (double f : {-300e3, 12.5, 100e3, 200e3})
        {
            const auto y = correct_cfo(apply_cfo(x, f), f);
            const auto z = correct_cfo(x, f);
            for (std::size_t n = 0; n < x.size(); ++n)
            {
                CHECK(std::abs(y[n] - x[n]) <= 1e-9);
                CHECK_THAT(std::abs(z[n]), WithinAbs(std::abs(x[n]), 1e-12));
            }
        }
    }
}

TEST_CASE("estimate, correct, re-estimate leaves under 1 Hz", "[cfo]")
{
    for (double f : {0.0, 100e3, 200e3, -410e3})
    {
        const auto r = impaired(f, 33);
        const auto est = detect_and_estimate(r);
        const auto fixed = correct_cfo(r, est.delta_f_hz);
        CHECK(std::abs(detect_and_estimate(fixed).delta_f_hz) < 1.0);
    }
}

TEST_CASE("estimate is invariant to positive scaling", "[cfo][property]")
{
    ChannelConfig ch;
    ch.cfo_hz = 73e3;
    ch.snr_db = 8.0;
    ch.seed = 4;
    const auto r = transmit(generate_preamble(kSpec), ch, 100);
    const PlateauSpan span{0, 128};
    const double base = estimate_cfo(r, 16, span).delta_f_hz;
    for (double alpha : {1e-3, 2.0, 1e3})
    {
        SampleBuffer s = r;
        for (auto& v : s.samples)
            v *= alpha;
        CHECK_THAT(estimate_cfo(s, 16, span).delta_f_hz, WithinAbs(base, 1e-6));
    }
}

TEST_CASE("estimator errors", "[cfo]")
{
    SampleBuffer z;
    z.samples.assign(300, Complex{});
    CHECK_THROWS_AS(estimate_cfo(z, 16, {0, 100}), EstimationError);
    const auto r = impaired(0.0);
    CHECK_THROWS_AS(estimate_cfo(r, 16, {10, 5}), SizingError);
    CHECK_THROWS_AS(estimate_cfo(r, 16, {0, r.size()}), SizingError);
    CHECK_THROWS_AS(estimate_cfo(r, 0, {0, 10}), ConfigError);
}

TEST_CASE("plateau span is trimmed to the short training sequence", "[cfo]")
{
    const FrameDetectConfig cfg;
    CHECK(plateau_span({10, 400, 1.0}, cfg, kSpec).end == 10 + 128);
    CHECK(plateau_span({10, 50, 1.0}, cfg, kSpec).end == 50);
    CHECK(plateau_span({10, 50, 1.0}, cfg, kSpec).start == 10);
}

TEST_CASE("cfo trace", "[cfo][trace]")
{
    std::ostringstream os;
    write_cfo_trace(os, impaired(100e3), 16);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "n,abs_r,arg_r");
    std::getline(in, line);
    double n = -1, mag = 0, arg = 0;
    CHECK(std::sscanf(line.c_str(), "%lf,%lf,%lf", &n, &mag, &arg) == 3);
    CHECK(n == 0);
    CHECK_THAT(mag, WithinAbs(16.0, 1e-9));
    CHECK_THAT(arg, WithinAbs(-0.16 * std::numbers::pi, 1e-9));
}
