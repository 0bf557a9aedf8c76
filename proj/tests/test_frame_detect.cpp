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

#include "ofdmsync/channel.hpp"
#include "ofdmsync/frame_detect.hpp"
#include "ofdmsync/preamble.hpp"
#include "oracles.hpp"

using namespace ofdmsync;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SampleBuffer random_buffer(std::size_t n, std::uint64_t seed)
{
    SampleBuffer b;
    b.samples = oracle::random_complex(n, seed);
    return b;
}

void check_against_oracle(const SampleBuffer& r, std::size_t lag, std::size_t window)
{
    const auto series = autocorrelate(r.view(), lag, window);
    REQUIRE(series.corr.size() == r.size() - lag - window + 1);
    std::vector<Complex> ref_corr(series.corr.size());
    std::vector<Complex> ref_power(series.corr.size());
    std::vector<Complex> got_power(series.corr.size());
    for (std::size_t n = 0; n < ref_corr.size(); ++n)
    {
        ref_corr[n] = oracle::autocorr_at(r.samples, n, lag, window);
        ref_power[n] = oracle::power_at(r.samples, n, lag, window);
        got_power[n] = series.power[n];
    }
    CHECK(oracle::max_rel_error(series.corr, ref_corr) < 1e-9);
    CHECK(oracle::max_rel_error(got_power, ref_power) < 1e-9);
}

} // namespace

TEST_CASE("autocorrelation and power of silence are exactly zero", "[frame][autocorr]")
{
    SampleBuffer z;
    z.samples.assign(200, Complex{});
    for (const auto& v : autocorrelation(z, 16, 16))
        CHECK(v == Complex{});
    for (const double p : signal_power(z, 16, 16))
        CHECK(p == 0.0);
}

TEST_CASE("unit constant signal has P[n] = window", "[frame][autocorr]")
{
    SampleBuffer x;
    x.samples.assign(100, Complex(1.0, 0.0));
    for (const double p : signal_power(x, 16, 16))
        CHECK_THAT(p, WithinAbs(16.0, 1e-12));
}

TEST_CASE("sliding sums match direct summation", "[frame][autocorr][oracle]")
{
    for (std::uint64_t seed = 0; seed < 5; ++seed)
        check_against_oracle(random_buffer(700, seed), 16, 16);
    check_against_oracle(random_buffer(300, 11), 1, 1);
    check_against_oracle(random_buffer(300, 12), 16, 48);
    check_against_oracle(random_buffer(300, 13), 64, 8);
    // Long enough to cross several re-anchoring points.
    check_against_oracle(random_buffer(20000, 14), 16, 16);
}

TEST_CASE("sums return to exact zero after a burst", "[frame][autocorr]")
{
    SampleBuffer x = random_buffer(100, 21);
    x.samples.resize(400);
    const auto series = autocorrelate(x.view(), 16, 16);
    for (std::size_t n = 100; n < series.corr.size(); ++n)
    {
        CHECK(series.corr[n] == Complex{});
        CHECK(series.power[n] == 0.0);
    }
}

TEST_CASE("preamble plateau equals the short-symbol energy", "[frame][autocorr]")
{
    const auto p = generate_preamble(ieee80211a_spec());
    const auto series = autocorrelate(p.view(), 16, 16);
    // Both windows inside the STS for n <= 160 - 32.
    for (std::size_t n = 0; n <= 128; ++n)
    {
        CHECK_THAT(std::abs(series.corr[n]), WithinRel(16.0, 1e-12));
        CHECK_THAT(series.power[n], WithinRel(16.0, 1e-12));
    }
}

TEST_CASE("too-short buffers are a sizing error", "[frame][autocorr]")
{
    const auto x = random_buffer(31, 1);
    CHECK_THROWS_AS(autocorrelation(x, 16, 16), SizingError);
    CHECK_THROWS_AS(signal_power(x, 16, 16), SizingError);
    CHECK(detect_frames(x, {}).empty());
}

TEST_CASE("detection metric arithmetic", "[frame][metric]")
{
    const std::vector<Complex> corr = {{16.0, 0.0}, {3.0, 4.0}, {0.0, 0.0}};
    const std::vector<double> power = {16.0, 10.0, 0.0};
    const auto exact = detection_metric(corr, power, MetricMode::exact);
    const auto l1 = detection_metric(corr, power, MetricMode::l1_approx);
    CHECK_THAT(exact[0], WithinRel(1.0, 1e-12));
    CHECK_THAT(exact[1], WithinRel(25.0 / 100.0, 1e-12));
    CHECK(exact[2] == 0.0); // guarded 0 / 0
    CHECK(l1[1] == 7.0);
    CHECK_THROWS_AS(detection_metric(corr, std::vector<double>{1.0}, MetricMode::exact), SizingError);
}

TEST_CASE("L1 magnitude bounds", "[frame][metric][property]")
{
    std::mt19937_64 rng(99);
    std::normal_distribution<double> g(0.0, 10.0);
    for (int i = 0; i < 10000; ++i)
    {
        const Complex r(g(rng), g(rng));
        const double l1 = metric_value(r, 1.0, MetricMode::l1_approx);
        REQUIRE(std::abs(r) <= l1 * (1 + 1e-15));
        REQUIRE(l1 <= std::sqrt(2.0) * std::abs(r) * (1 + 1e-15));
    }
}

TEST_CASE("noiseless preamble yields one plateau inside the STS", "[frame][detect]")
{
    const auto p = generate_preamble(ieee80211a_spec());
    const auto events = detect_frames(p, {});
    REQUIRE(events.size() == 1);
    CHECK(events[0].start_index == 0);
    CHECK(events[0].start_index < 160);
    CHECK(events[0].length() >= 32);
    CHECK_THAT(events[0].peak_metric, WithinRel(1.0, 1e-9));
}

TEST_CASE("silence yields no events", "[frame][detect]")
{
    SampleBuffer z;
    z.samples.assign(1000, Complex{});
    CHECK(detect_frames(z, {}).empty());
    FrameDetectConfig l1;
    l1.mode = MetricMode::l1_approx;
    CHECK(detect_frames(z, l1).empty());
}

TEST_CASE("pulse train of k frames at 20 dB", "[frame][detect]")
{
    const auto spec = ieee80211a_spec();
    const auto p = generate_preamble(spec);
    constexpr std::size_t k = 5;
    constexpr std::size_t gap = 400;

    SampleBuffer train;
    train.samples.assign(gap, Complex{});
    for (std::size_t i = 0; i < k; ++i)
    {
        train.samples.insert(train.samples.end(), p.samples.begin(), p.samples.end());
        train.samples.resize(train.size() + gap);
    }
    SampleBuffer rx = train;
    add_noise(rx, noise_power_for(1.0, 20.0), 2024);

    const auto events = detect_frames(rx, {});
    REQUIRE(events.size() == k);
    for (std::size_t i = 0; i < k; ++i)
    {
        const auto frame_start = gap + i * (p.size() + gap);
        CHECK(events[i].start_index + 8 >= frame_start);
        CHECK(events[i].start_index < frame_start + 160);
    }
}

TEST_CASE("exact metric is gain invariant", "[frame][property]")
{
    auto rx = transmit(generate_preamble(ieee80211a_spec()), ChannelConfig{0.0, 15.0, {Tap{}}, 100, 8});
    const auto base = autocorrelate(rx.view(), 16, 16);
    const auto m0 = detection_metric(base.corr, base.power, MetricMode::exact);
    const auto events0 = detect_frames(rx, {});
    REQUIRE(events0.size() == 1);
    for (double alpha : {1e-3, 0.37, 5.0, 1e3})
    {
        SampleBuffer scaled = rx;
        for (auto& v : scaled.samples)
            v *= alpha;
        const auto s = autocorrelate(scaled.view(), 16, 16);
        const auto m = detection_metric(s.corr, s.power, MetricMode::exact);
        for (std::size_t n = 0; n < m.size(); ++n)
            REQUIRE_THAT(m[n], WithinAbs(m0[n], 1e-9));
        const auto ev = detect_frames(scaled, {});
        REQUIRE(ev.size() == 1);
        CHECK(ev[0].start_index == events0[0].start_index);
        CHECK(ev[0].end_index == events0[0].end_index);
        CHECK_THAT(ev[0].peak_metric, WithinAbs(events0[0].peak_metric, 1e-9));
    }
}

TEST_CASE("l1_approx agrees with exact at unit power but is gain sensitive", "[frame][metric]")
{
    const auto p = generate_preamble(ieee80211a_spec());
    FrameDetectConfig l1;
    l1.mode = MetricMode::l1_approx;
    const auto exact_events = detect_frames(p, {});
    const auto l1_events = detect_frames(p, l1);
    REQUIRE(exact_events.size() == 1);
    REQUIRE(l1_events.size() == 1);
    CHECK(l1_events[0].start_index == exact_events[0].start_index);
    CHECK(l1_events[0].length() >= 32);

    // Left side grows as a^2, right side as a^4: a loud enough frame is never detected.
    SampleBuffer loud = p;
    for (auto& v : loud.samples)
        v *= 10.0;
    CHECK(detect_frames(loud, l1).empty());
    CHECK(detect_frames(loud, {}).size() == 1);
}

TEST_CASE("runs shorter than min_plateau are never emitted", "[frame][detect]")
{
    const auto p = generate_preamble(ieee80211a_spec());
    FrameDetectConfig cfg;
    cfg.min_plateau = 200;
    CHECK(detect_frames(p, cfg).empty());

    SampleBuffer noisy = p;
    noisy.samples.resize(5000);
    add_noise(noisy, 0.5, 3);
    cfg.threshold = 0.1; // lots of short noise runs
    for (std::size_t min_plateau : {1u, 5u, 32u})
    {
        cfg.min_plateau = min_plateau;
        for (const auto& e : detect_frames(noisy, cfg))
            CHECK(e.length() >= min_plateau);
    }
}

TEST_CASE("streaming detector reproduces the batch detector", "[frame][streaming]")
{
    const auto p = generate_preamble(ieee80211a_spec());
    SampleBuffer rx;
    for (int i = 0; i < 4; ++i)
    {
        rx.samples.resize(rx.size() + 300 + 37 * static_cast<std::size_t>(i));
        rx.samples.insert(rx.samples.end(), p.samples.begin(), p.samples.end());
    }
    rx.samples.resize(rx.size() + 250);
    add_noise(rx, noise_power_for(1.0, 12.0), 77);

    for (const auto mode : {MetricMode::exact, MetricMode::l1_approx})
    {
        FrameDetectConfig cfg;
        cfg.mode = mode;
        StreamingFrameDetector det(cfg);
        std::vector<FrameEvent> streamed;
        for (const auto& x : rx.samples)
            if (auto e = det.push(x))
                streamed.push_back(*e);
        if (auto e = det.finish())
            streamed.push_back(*e);
        CHECK(streamed == detect_frames(rx, cfg));
        if (mode == MetricMode::exact)
            CHECK(streamed.size() == 4);
    }
}

TEST_CASE("streaming detector closes a run at end of stream", "[frame][streaming]")
{
    const auto p = generate_preamble(ieee80211a_spec());
    StreamingFrameDetector det;
    for (std::size_t n = 0; n < 160; ++n)
        CHECK_FALSE(det.push(p[n]).has_value());
    const auto e = det.finish();
    REQUIRE(e.has_value());
    CHECK(e->start_index == 0);
    det.reset();
    CHECK_FALSE(det.finish().has_value());
}

TEST_CASE("frame detector config validation", "[frame]")
{
    FrameDetectConfig cfg;
    SECTION("lag") { cfg.lag = 0; }
    SECTION("threshold high") { cfg.threshold = 1.0; }
    SECTION("threshold low") { cfg.threshold = 0.0; }
    SECTION("plateau") { cfg.min_plateau = 0; }
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    CHECK_THROWS_AS(StreamingFrameDetector(cfg), ConfigError);
}

TEST_CASE("frame trace columns", "[frame][trace]")
{
    std::ostringstream os;
    write_frame_trace(os, generate_preamble(ieee80211a_spec()), {});
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "n,abs_r_sq,p_sq,metric,above_threshold");
    std::getline(in, line);
    CHECK(line.rfind("0,", 0) == 0);
    CHECK(line.back() == '1');
    std::size_t rows = 1;
    while (std::getline(in, line))
        ++rows;
    CHECK(rows == 320 - 32 + 1);
}
