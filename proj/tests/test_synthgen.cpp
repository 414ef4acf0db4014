#include <catch2/catch_amalgamated.hpp>

#include "uqeval/calibration.hpp"
#include "uqeval/ensemble.hpp"
#include "uqeval/synthgen.hpp"

#include <cmath>

using namespace uqeval;

TEST_CASE("generation is bit-deterministic per spec") {
    SynthSpec spec;
    spec.n_samples = 500;
    spec.prevalences = {0.2, 0.5};
    spec.n_members = 4;
    spec.sigma = 0.7;
    spec.tau = 1.4;
    spec.bias = 0.1;
    spec.seed = 11;
    const auto a = generate(spec);
    const auto b = generate(spec);
    CHECK(a.tensor.values() == b.tensor.values());
    CHECK(a.labels.data == b.labels.data);
    CHECK(a.true_probabilities.data == b.true_probabilities.data);

    spec.seed = 12;
    const auto c = generate(spec);
    CHECK(a.tensor.values() != c.tensor.values());
}

TEST_CASE("undistorted members reproduce the true probability exactly") {
    SynthSpec spec;
    spec.n_samples = 300;
    spec.prevalences = {0.3};
    spec.n_members = 3;
    spec.seed = 5;
    const auto result = generate(spec);
    for (std::size_t n = 0; n < spec.n_samples; ++n)
        for (std::size_t m = 0; m < spec.n_members; ++m)
            REQUIRE(result.tensor.at(n, 0, m) == result.true_probabilities.at(n, 0));
}

TEST_CASE("zero diversity means zero epistemic uncertainty everywhere") {
    SynthSpec spec;
    spec.n_samples = 400;
    spec.prevalences = {0.25, 0.6};
    spec.n_members = 5;
    spec.tau = 2.0; // miscalibrated but still member-identical
    spec.seed = 8;
    const auto result = generate(spec);
    const auto field = decompose_uncertainty(result.tensor);
    for (const auto& rec : field.data) REQUIRE(rec.eu == 0.0);
}

TEST_CASE("distortion parameters do not disturb the draw stream") {
    SynthSpec spec;
    spec.n_samples = 200;
    spec.prevalences = {0.4};
    spec.n_members = 3;
    spec.seed = 99;
    const auto calm = generate(spec);
    spec.sigma = 1.5;
    spec.tau = 3.0;
    spec.bias = -0.4;
    const auto wild = generate(spec);
    CHECK(calm.labels.data == wild.labels.data);
    CHECK(calm.true_probabilities.data == wild.true_probabilities.data);
    CHECK(calm.tensor.values() != wild.tensor.values());
}

TEST_CASE("label prevalence converges to the Beta mean") {
    SynthSpec spec;
    spec.n_samples = 200000;
    spec.prevalences = {0.3};
    spec.n_members = 1;
    spec.seed = 2024;
    const auto result = generate(spec);
    double positives = 0.0;
    for (std::size_t n = 0; n < spec.n_samples; ++n) positives += result.labels.at(n, 0);
    const double rate = positives / static_cast<double>(spec.n_samples);
    const double se = std::sqrt(0.3 * 0.7 / static_cast<double>(spec.n_samples));
    CHECK(std::abs(rate - 0.3) < 3.0 * se);
}

TEST_CASE("calibration error shrinks as the sample count grows") {
    double previous = 1.0;
    for (std::size_t n : {1000u, 10000u, 200000u}) {
        SynthSpec spec;
        spec.n_samples = n;
        spec.prevalences = {0.35};
        spec.n_members = 1;
        spec.seed = 77;
        const auto result = generate(spec);
        std::vector<double> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = result.tensor.at(i, 0, 0);
        const double e = ece(p, result.labels.column(0), 10);
        CHECK(e < previous);
        previous = e;
    }
    CHECK(previous < 0.005);
}

TEST_CASE("spec validation") {
    SynthSpec spec;
    spec.n_samples = 10;
    spec.prevalences = {0.5};
    spec.n_members = 1;
    SynthSpec bad = spec;
    bad.n_samples = 0;
    CHECK_THROWS_AS(generate(bad), validation_error);
    bad = spec;
    bad.prevalences = {};
    CHECK_THROWS_AS(generate(bad), validation_error);
    bad = spec;
    bad.prevalences = {1.0};
    CHECK_THROWS_AS(generate(bad), validation_error);
    bad = spec;
    bad.tau = 0.0;
    CHECK_THROWS_AS(generate(bad), validation_error);
    bad = spec;
    bad.sigma = -0.1;
    CHECK_THROWS_AS(generate(bad), validation_error);
    bad = spec;
    bad.n_members = 0;
    CHECK_THROWS_AS(generate(bad), validation_error);
}

TEST_CASE("distortion sweep exposes the expected orderings") {
    SynthSpec base;
    base.n_samples = 30000;
    base.prevalences = {0.2, 0.5};
    base.n_members = 4;
    base.seed = 31337;

    SECTION("temperature miscalibrates") {
        const auto rows = distortion_sweep(base, {1.0, 3.0}, {0.0});
        REQUIRE(rows.size() == 2);
        CHECK(rows[1].mean_ece > rows[0].mean_ece);
        CHECK(rows[0].mean_eu == 0.0);
    }
    SECTION("diversity raises epistemic uncertainty") {
        const auto rows = distortion_sweep(base, {1.0}, {0.0, 0.5, 1.0});
        REQUIRE(rows.size() == 3);
        CHECK(rows[0].mean_eu < rows[1].mean_eu);
        CHECK(rows[1].mean_eu < rows[2].mean_eu);
    }
    SECTION("a single combination reduces to generate plus summary") {
        const auto rows = distortion_sweep(base, {1.0}, {0.0});
        REQUIRE(rows.size() == 1);
        const auto direct = generate(base);
        const auto summary =
            mean_uncertainty_summary(decompose_uncertainty(direct.tensor));
        CHECK(rows[0].mean_eu == summary.overall.eu);
        CHECK(rows[0].tau == 1.0);
        CHECK(rows[0].sigma == 0.0);
    }
}
