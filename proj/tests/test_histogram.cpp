#include <catch2/catch_amalgamated.hpp>

#include "hvgrid/histogram.hpp"
#include "hvgrid/rng.hpp"

using namespace hvgrid;
using Catch::Matchers::WithinAbs;

TEST_CASE("binning basics") {
    SECTION("three records, two bins") {
        const Histogram h = bin_samples({0.0, 0.5, 1.0}, 2);
        REQUIRE(h.mass.size() == 2);
        CHECK_THAT(h.mass[0], WithinAbs(2.0 / 3.0, 1e-12));
        CHECK_THAT(h.mass[1], WithinAbs(1.0 / 3.0, 1e-12));
        CHECK(h.lo == 0.0);
        CHECK(h.hi == 1.0);
    }
    SECTION("all-zero records collapse to a spike") {
        const Histogram h = bin_samples(std::vector<double>(100, 0.0), 100);
        REQUIRE(h.mass.size() == 1);
        CHECK_THAT(h.mass[0], WithinAbs(1.0, 1e-12));
        CHECK(h.bin_width() == 0.0);
    }
    SECTION("identical nonzero records occupy a single bin") {
        const Histogram h = bin_samples(std::vector<double>(50, 5.0), 10);
        int occupied = 0;
        for (double m : h.mass)
            if (m > 0.0) ++occupied;
        CHECK(occupied == 1);
        CHECK_THAT(h.mass.back(), WithinAbs(1.0, 1e-12));
    }
    SECTION("negative values make the range symmetric") {
        const Histogram h = bin_samples({-0.4, 0.1, 0.2}, 8);
        CHECK(h.lo == -0.4);
        CHECK(h.hi == 0.4);
    }
    SECTION("empty input and zero bins are invalid") {
        CHECK_THROWS_AS(bin_samples({}, 10), ValidationError);
        CHECK_THROWS_AS(bin_samples({1.0}, 0), ValidationError);
    }
}

TEST_CASE("histogram mass always sums to one") {
    SplitMix64 rng(5);
    for (int round = 0; round < 20; ++round) {
        std::vector<double> samples;
        const std::size_t n = 1 + rng.bounded(400);
        for (std::size_t i = 0; i < n; ++i)
            samples.push_back(rng.uniform01() * 2.0 - (round % 2 ? 0.5 : 0.0));
        const Histogram h = bin_samples(samples, 1 + rng.bounded(60));
        double total = 0.0;
        for (double m : h.mass) total += m;
        CHECK_THAT(total, WithinAbs(1.0, 1e-9));
    }
}

TEST_CASE("local maxima counting") {
    SECTION("unimodal") {
        CHECK(count_local_maxima({0, 1, 3, 5, 3, 1, 0}) == 1);
    }
    SECTION("bimodal") {
        CHECK(count_local_maxima({0, 4, 1, 0, 2, 5, 1}) == 2);
    }
    SECTION("plateau counts once") {
        CHECK(count_local_maxima({0, 2, 2, 2, 1, 0}) == 1);
    }
    SECTION("boundary peaks count") {
        CHECK(count_local_maxima({5, 1, 0, 0, 3}) == 2);
    }
    SECTION("monotone has a single boundary peak") {
        CHECK(count_local_maxima({0, 1, 2, 3}) == 1);
    }
    SECTION("smoothing merges close spikes") {
        // two spikes one bin apart vanish into one bump at window 5
        const std::vector<double> v = {0, 0, 5, 0, 5, 0, 0, 0, 0, 0};
        CHECK(count_local_maxima(v, 1) == 2);
        CHECK(count_local_maxima(v, 5) == 1);
    }
    SECTION("smoothing keeps well-separated modes apart") {
        const std::vector<double> v = {0, 1, 6, 1, 0, 0, 0, 0, 0, 1, 6, 1, 0};
        CHECK(count_local_maxima(v, 5) == 2);
    }
    SECTION("empty and flat-zero input") {
        CHECK(count_local_maxima({}) == 0);
        CHECK(count_local_maxima({0, 0, 0}) == 0);
    }
}

TEST_CASE("sample summary") {
    const SampleSummary s = summarize_samples({4.0, 1.0, 3.0, 2.0});
    CHECK_THAT(s.mean, WithinAbs(2.5, 1e-12));
    CHECK_THAT(s.stddev, WithinAbs(1.2909944487358056, 1e-12)); // sqrt(5/3)
    CHECK(s.min == 1.0);
    CHECK(s.max == 4.0);
    CHECK_THAT(s.median, WithinAbs(2.5, 1e-12));
    CHECK_THAT(s.q25, WithinAbs(1.75, 1e-12));
    CHECK_THAT(s.q75, WithinAbs(3.25, 1e-12));
    CHECK_THROWS_AS(summarize_samples({}), ValidationError);
}
