#include <doctest.h>

#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>

#include "sgsim/detectors.hpp"

using namespace sgsim;

TEST_CASE("physics residual threshold arithmetic") {
    const SgParams p;
    const double p_core = 873'888'000.0;
    const double implied = implied_flowrate(p_core, p);

    SUBCASE("exact balance gives zero residual") {
        const DetectorVerdict v = pbd_detect(p_core, implied, p);
        CHECK(v.residual == 0.0);
        CHECK_FALSE(v.alarmed);
    }
    SUBCASE("1.1% excess crosses the 1% default") {
        const DetectorVerdict v = pbd_detect(p_core, implied * 1.011, p);
        CHECK(v.residual == doctest::Approx(0.011).epsilon(1e-9));
        CHECK(v.alarmed);
    }
    SUBCASE("0.9% deviation stays quiet") {
        const DetectorVerdict v = pbd_detect(p_core, implied * 0.991, p);
        CHECK_FALSE(v.alarmed);
    }
    SUBCASE("power must be positive") {
        CHECK_THROWS_AS(pbd_detect(0.0, implied, p), std::invalid_argument);
    }
}

TEST_CASE("sensor validation pairwise checks") {
    const OsvTolerances tol{5.0, 48.0, 48.0};

    SUBCASE("spoofed channel stands out") {
        const DetectorVerdict v =
            osv_detect({64.1, 50.0, 50.1}, {480.0, 480.2}, {479.8, 480.0}, tol);
        CHECK(v.alarmed);
        CHECK(v.residual == doctest::Approx(14.1 / 5.0).epsilon(1e-9));
    }
    SUBCASE("all channels equal never alarms") {
        const DetectorVerdict v = osv_detect({50.0, 50.0, 50.0}, {480.0, 480.0},
                                             {480.0, 480.0}, tol);
        CHECK_FALSE(v.alarmed);
        CHECK(v.residual == 0.0);
    }
    SUBCASE("identically spoofed channels are invisible to consensus") {
        const DetectorVerdict v = osv_detect({64.1, 64.1, 64.1}, {480.0, 480.1},
                                             {480.0, 480.0}, tol);
        CHECK_FALSE(v.alarmed);
    }
    SUBCASE("single-channel kinds are skipped and noted") {
        const DetectorVerdict v = osv_detect({50.0, 50.0, 50.0}, {480.0}, {}, tol);
        CHECK_FALSE(v.alarmed);
        CHECK(v.note.find("FT") != std::string::npos);
        CHECK(v.note.find("ST") != std::string::npos);
    }
    SUBCASE("flow deviation beyond tolerance alarms") {
        const DetectorVerdict v = osv_detect({50.0, 50.0, 50.0}, {480.0, 580.0},
                                             {480.0, 480.0}, tol);
        CHECK(v.alarmed);
    }
}

TEST_CASE("noise profile single-step branches") {
    const NpThresholds th; // m=5, 1e-3, 1.0
    const std::deque<double> flat{1.0, 1.0, 1.0, 1.0, 1.0};

    SUBCASE("identical window and reading give exactly zero deviation") {
        const DetectorVerdict v = np_detect(flat, 1.0, th);
        CHECK(v.residual == 0.0);
        CHECK(v.alarmed); // too clean
        CHECK(v.note == "lower");
    }
    SUBCASE("step jump fires the upper branch") {
        const DetectorVerdict v = np_detect(flat, 3.0, th);
        CHECK(v.residual == doctest::Approx(2.0));
        CHECK(v.alarmed);
        CHECK(v.note == "upper");
    }
    SUBCASE("healthy noise sits between the branches") {
        const DetectorVerdict v = np_detect({1.01, 0.98, 1.02, 0.99, 1.0}, 1.03, th);
        CHECK_FALSE(v.alarmed);
    }
    SUBCASE("window must hold exactly m readings") {
        CHECK_THROWS_AS(np_detect({1.0, 1.0}, 1.0, th), std::invalid_argument);
    }
}

TEST_CASE("streaming noise profile holds off during warmup") {
    NpChannelState ch(NpThresholds{}, 3);
    for (int i = 0; i < 5; ++i) {
        const DetectorVerdict v = ch.push(1.0 + 0.01 * i);
        CHECK_FALSE(v.alarmed); // window not full yet
    }
}

TEST_CASE("streaming lower branch needs a sustained run") {
    NpChannelState ch(NpThresholds{}, 3);
    for (int i = 0; i < 5; ++i) ch.push(1.0 + 0.02 * (i % 2 ? 1 : -1));
    // constant spoof from here: deviation shrinks as the window flushes
    int first_alarm = -1;
    for (int i = 0; i < 20; ++i) {
        const DetectorVerdict v = ch.push(1.0);
        if (v.alarmed && first_alarm < 0) first_alarm = i;
    }
    REQUIRE(first_alarm >= 0);
    CHECK(first_alarm >= 2); // at least hold=3 consecutive clean steps
}

TEST_CASE("streaming upper branch fires immediately") {
    NpChannelState ch(NpThresholds{}, 50);
    for (int i = 0; i < 5; ++i) ch.push(1.0);
    const DetectorVerdict v = ch.push(5.0);
    CHECK(v.alarmed);
    CHECK(v.note == "upper");
}

TEST_CASE("gaussian channel does not trip the persistent lower branch") {
    // a healthy channel dips below eta_lower on single steps all the time;
    // the hold counter must keep that from alarming
    std::mt19937_64 eng(5);
    std::normal_distribution<double> gauss(1.0, 0.002);
    NpChannelState ch(NpThresholds{}, 50);
    for (int i = 0; i < 20000; ++i) {
        const DetectorVerdict v = ch.push(gauss(eng));
        CHECK_FALSE(v.alarmed);
    }
}
