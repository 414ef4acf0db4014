#include <catch2/catch_amalgamated.hpp>

#include "uqeval/calibration.hpp"
#include "uqeval/rng.hpp"
#include "uqeval/synthgen.hpp"

#include <algorithm>
#include <numbers>

using namespace uqeval;

TEST_CASE("bins route samples by floor(p*B)") {
    const std::vector<double> p{0.05, 0.95};
    const std::vector<std::uint8_t> y{0, 1};
    const auto bins = reliability_bins(p, y, 10);
    REQUIRE(bins.bins.size() == 10);
    CHECK(bins.bins[0].count == 1);
    CHECK(bins.bins[9].count == 1);
    CHECK(bins.bins[0].confidence == Catch::Approx(0.05));
    CHECK(bins.bins[0].accuracy == 0.0);
    CHECK(bins.bins[9].confidence == Catch::Approx(0.95));
    CHECK(bins.bins[9].accuracy == 1.0);
    for (std::size_t b = 1; b < 9; ++b) {
        CHECK(bins.bins[b].count == 0);
        CHECK(std::isnan(bins.bins[b].confidence));
    }
    CHECK(bins.bins[9].upper == 1.0);
}

TEST_CASE("probability one lands in the last bin") {
    const std::vector<double> p{1.0};
    const std::vector<std::uint8_t> y{1};
    const auto bins = reliability_bins(p, y, 10);
    CHECK(bins.bins[9].count == 1);
}

TEST_CASE("bin counts sum to the sample count and ignore order") {
    Xoshiro256ss rng(55);
    std::vector<double> p(1000);
    std::vector<std::uint8_t> y(1000);
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = rng.uniform();
        y[i] = rng.uniform() < 0.5 ? 1 : 0;
    }
    const auto bins = reliability_bins(p, y, 13);
    std::size_t total = 0;
    for (const auto& bin : bins.bins) total += bin.count;
    CHECK(total == 1000);

    // permutation invariance
    std::vector<std::size_t> order(p.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    shuffle(order, rng);
    std::vector<double> p2(p.size());
    std::vector<std::uint8_t> y2(p.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        p2[i] = p[order[i]];
        y2[i] = y[order[i]];
    }
    const auto bins2 = reliability_bins(p2, y2, 13);
    for (std::size_t b = 0; b < bins.bins.size(); ++b) {
        CHECK(bins.bins[b].count == bins2.bins[b].count);
        if (bins.bins[b].count > 0) {
            CHECK(bins.bins[b].confidence ==
                  Catch::Approx(bins2.bins[b].confidence).epsilon(0).margin(1e-12));
            CHECK(bins.bins[b].accuracy ==
                  Catch::Approx(bins2.bins[b].accuracy).epsilon(0).margin(1e-12));
        }
    }
}

TEST_CASE("bins reject bad input") {
    CHECK_THROWS_AS(reliability_bins({}, {}, 10), validation_error);
    const std::vector<double> p{0.5};
    const std::vector<std::uint8_t> y{1};
    CHECK_THROWS_AS(reliability_bins(p, y, 0), validation_error);
    const std::vector<double> bad{1.5};
    CHECK_THROWS_AS(reliability_bins(bad, y, 10), validation_error);
}

TEST_CASE("ece of per-bin perfect calibration is zero") {
    const std::vector<double> p{0.25, 0.25, 0.25, 0.25};
    const std::vector<std::uint8_t> y{1, 0, 0, 0};
    CHECK(ece(p, y, 10) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("ece of constant overconfidence is the gap") {
    const std::vector<double> p(50, 0.9);
    const std::vector<std::uint8_t> y(50, 0);
    CHECK(ece(p, y, 10) == Catch::Approx(0.9).margin(1e-12));
}

TEST_CASE("ece is invariant under duplicating the sample set") {
    Xoshiro256ss rng(8);
    std::vector<double> p(400);
    std::vector<std::uint8_t> y(400);
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = rng.uniform();
        y[i] = rng.uniform() < p[i] ? 1 : 0;
    }
    std::vector<double> pp(p);
    pp.insert(pp.end(), p.begin(), p.end());
    std::vector<std::uint8_t> yy(y);
    yy.insert(yy.end(), y.begin(), y.end());
    CHECK(ece(pp, yy, 10) == Catch::Approx(ece(p, y, 10)).epsilon(0).margin(1e-12));
    CHECK(ece(p, y, 10) >= 0.0);
    CHECK(ece(p, y, 10) <= 1.0);
}

TEST_CASE("nll closed forms") {
    const std::vector<double> exact{1.0, 0.0, 1.0};
    const std::vector<std::uint8_t> labels{1, 0, 1};
    CHECK(nll(exact, labels) < 1e-6); // clamped perfect predictions

    const std::vector<double> half(7, 0.5);
    const std::vector<std::uint8_t> mixed{1, 0, 1, 1, 0, 0, 1};
    CHECK(nll(half, mixed) == Catch::Approx(std::numbers::ln2).margin(1e-15));

    const std::vector<double> p{0.8, 0.3};
    const std::vector<std::uint8_t> y{1, 0};
    CHECK(nll(p, y) == Catch::Approx(0.2899092476264711).margin(1e-12));
    CHECK_THROWS_AS(nll({}, {}), validation_error);
}

TEST_CASE("brier closed forms") {
    const std::vector<double> exact{1.0, 0.0};
    const std::vector<std::uint8_t> labels{1, 0};
    CHECK(brier(exact, labels) == 0.0);

    const std::vector<double> half(4, 0.5);
    const std::vector<std::uint8_t> mixed{1, 0, 0, 1};
    CHECK(brier(half, mixed) == Catch::Approx(0.25).margin(1e-15));

    const std::vector<double> p{0.8, 0.3};
    const std::vector<std::uint8_t> y{1, 0};
    CHECK(brier(p, y) == Catch::Approx(0.065).margin(1e-12));
}

TEST_CASE("constant-prediction brier matches the algebraic decomposition") {
    Xoshiro256ss rng(21);
    for (double c : {0.1, 0.37, 0.5, 0.92}) {
        std::vector<double> p(300, c);
        std::vector<std::uint8_t> y(300);
        double positives = 0.0;
        for (auto& label : y) {
            label = rng.uniform() < 0.4 ? 1 : 0;
            positives += label;
        }
        const double rate = positives / 300.0;
        const double expected = c * c * (1.0 - rate) + (1.0 - c) * (1.0 - c) * rate;
        CHECK(brier(p, y) == Catch::Approx(expected).epsilon(0).margin(1e-12));
    }
}

TEST_CASE("binned recalibration does not hurt NLL on distorted synthetic data") {
    SynthSpec spec;
    spec.n_samples = 20000;
    spec.prevalences = {0.3};
    spec.n_members = 1;
    spec.tau = 3.0; // systematic miscalibration
    spec.seed = 606;
    const auto result = generate(spec);

    std::vector<double> p(spec.n_samples);
    for (std::size_t n = 0; n < spec.n_samples; ++n) p[n] = result.tensor.at(n, 0, 0);
    const auto y = result.labels.column(0);

    const std::size_t b = 10;
    const auto bins = reliability_bins(p, y, b);
    std::vector<double> recalibrated(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        std::size_t bin = static_cast<std::size_t>(p[i] * static_cast<double>(b));
        if (bin >= b) bin = b - 1;
        recalibrated[i] = bins.bins[bin].accuracy;
    }
    CHECK(nll(recalibrated, y) <= nll(p, y));
}
