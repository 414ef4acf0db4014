#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "uqeval/calibration.hpp"
#include "uqeval/ensemble.hpp"
#include "uqeval/errors.hpp"
#include "uqeval/losses.hpp"
#include "uqeval/matrix.hpp"
#include "uqeval/prediction_store.hpp"
#include "uqeval/rng.hpp"

namespace uqeval {

/// Controls for the synthetic ensemble generator. tau != 1 or bias != 0
/// miscalibrate the members; sigma > 0 makes them disagree.
struct SynthSpec {
    std::size_t n_samples = 0;
    std::vector<double> prevalences; // pi_k in (0,1), one per class
    std::size_t n_members = 1;
    double sigma = 0.0; // member logit-noise scale
    double tau = 1.0;   // logit temperature
    double bias = 0.0;  // logit shift
    std::uint64_t seed = 0;
};

struct SynthResult {
    PredictionTensor tensor;
    LabelMatrix labels;
    Matrix true_probabilities;
};

namespace detail {

inline double logit(double q) {
    const double clamped = std::clamp(q, 1e-12, 1.0 - 1e-12);
    return std::log(clamped / (1.0 - clamped));
}

} // namespace detail

/// Deterministic synthetic ensemble. Per cell (n,k), in row-major order:
/// q ~ Beta(2/(1-pi), 2/pi) (mean pi_k, concentration 2/(pi(1-pi))), label
/// y ~ Bernoulli(q), then each member predicts
/// sigmoid((logit(q) + bias + sigma*eps_m)/tau) with eps_m standard normal.
/// The undistorted configuration reproduces q bit-exactly. Draw counts do not
/// depend on sigma/tau/bias, so those parameters can be swept under one seed
/// against identical q, labels, and noise.
inline SynthResult generate(const SynthSpec& spec) {
    if (spec.n_samples == 0) throw validation_error("n_samples must be positive");
    if (spec.n_members == 0) throw validation_error("n_members must be positive");
    if (spec.prevalences.empty())
        throw validation_error("at least one class prevalence is required");
    for (double pi : spec.prevalences)
        if (!(pi > 0.0 && pi < 1.0))
            throw validation_error("prevalences must lie strictly in (0,1)");
    if (!(spec.sigma >= 0.0)) throw validation_error("sigma must be non-negative");
    if (!(spec.tau > 0.0)) throw validation_error("tau must be positive");
    if (!std::isfinite(spec.bias)) throw validation_error("bias must be finite");

    const std::size_t n = spec.n_samples;
    const std::size_t k_count = spec.prevalences.size();
    const std::size_t m_count = spec.n_members;

    std::vector<std::string> image_ids(n);
    {
        char buf[32];
        for (std::size_t i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof(buf), "synth-%08zu", i);
            image_ids[i] = buf;
        }
    }
    std::vector<std::string> member_ids(m_count);
    for (std::size_t m = 0; m < m_count; ++m)
        member_ids[m] = "member-" + std::to_string(m);

    Xoshiro256ss rng(spec.seed);
    Matrix truth(n, k_count);
    LabelMatrix labels(n, k_count);
    std::vector<double> values(n * k_count * m_count);

    for (std::size_t row = 0; row < n; ++row) {
        for (std::size_t k = 0; k < k_count; ++k) {
            const double pi = spec.prevalences[k];
            const double a = 2.0 / (1.0 - pi);
            const double b = 2.0 / pi;
            const double q = rng.beta(a, b);
            truth.at(row, k) = q;
            labels.at(row, k) = rng.uniform() < q ? 1 : 0;

            const double z = detail::logit(q);
            for (std::size_t m = 0; m < m_count; ++m) {
                const double eps = rng.normal();
                const double shifted = (z + spec.bias + spec.sigma * eps) / spec.tau;
                const double p = shifted == z ? q : detail::sigmoid(shifted);
                values[(row * k_count + k) * m_count + m] = std::clamp(p, 0.0, 1.0);
            }
        }
    }
    return SynthResult{
        PredictionTensor(n, k_count, std::move(member_ids), std::move(image_ids),
                         std::move(values)),
        std::move(labels), std::move(truth)};
}

struct DistortionRow {
    double tau;
    double sigma;
    double mean_ece; // mean over classes of per-class ECE of the ensemble mean
    double mean_eu;  // mean over classes of per-class EU means
};

/// Runs generate + the calibration/uncertainty suite for every (tau, sigma)
/// combination, all under base.seed.
inline std::vector<DistortionRow> distortion_sweep(const SynthSpec& base,
                                                   const std::vector<double>& taus,
                                                   const std::vector<double>& sigmas,
                                                   std::size_t bins = 10) {
    std::vector<DistortionRow> rows;
    rows.reserve(taus.size() * sigmas.size());
    for (double tau : taus) {
        for (double sigma : sigmas) {
            SynthSpec spec = base;
            spec.tau = tau;
            spec.sigma = sigma;
            const SynthResult result = generate(spec);
            const Matrix mean = ensemble_mean(result.tensor);
            const auto field = decompose_uncertainty(result.tensor);
            const auto summary = mean_uncertainty_summary(field);

            double ece_sum = 0.0;
            std::vector<double> p(result.tensor.n_samples());
            for (std::size_t k = 0; k < result.tensor.n_classes(); ++k) {
                for (std::size_t n = 0; n < result.tensor.n_samples(); ++n)
                    p[n] = mean.at(n, k);
                ece_sum += ece(p, result.labels.column(k), bins);
            }
            rows.push_back({tau, sigma,
                            ece_sum / static_cast<double>(result.tensor.n_classes()),
                            summary.overall.eu});
        }
    }
    return rows;
}

} // namespace uqeval
