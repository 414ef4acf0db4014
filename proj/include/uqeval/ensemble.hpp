#pragma once

#include <cmath>
#include <vector>

#include "uqeval/errors.hpp"
#include "uqeval/matrix.hpp"
#include "uqeval/prediction_store.hpp"

namespace uqeval {

/// Bernoulli entropy in nats; 0*ln(0) is taken as 0, no epsilon injected.
inline double binary_entropy(double p) {
    if (std::isnan(p) || p < 0.0 || p > 1.0)
        throw validation_error("binary_entropy argument must lie in [0,1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
}

/// Uniform average over members: mean(n,k) = (1/M) * sum_m t(n,k,m).
/// Cells whose members all agree average to exactly the common value, so a
/// zero-diversity ensemble is reproduced bit-for-bit.
inline Matrix ensemble_mean(const PredictionTensor& t) {
    Matrix out(t.n_samples(), t.n_classes());
    const double inv_m = 1.0 / static_cast<double>(t.n_members());
    for (std::size_t n = 0; n < t.n_samples(); ++n)
        for (std::size_t k = 0; k < t.n_classes(); ++k) {
            const double first = t.at(n, k, 0);
            double sum = first;
            bool all_equal = true;
            for (std::size_t m = 1; m < t.n_members(); ++m) {
                const double p = t.at(n, k, m);
                sum += p;
                all_equal = all_equal && p == first;
            }
            out.at(n, k) = all_equal ? first : sum * inv_m;
        }
    return out;
}

/// Per-cell total/aleatoric/epistemic uncertainty, nats. eu is stored as the
/// computed difference tu - au, so tu - au - eu is identically zero.
struct UncertaintyRecord {
    double tu = 0.0;
    double au = 0.0;
    double eu = 0.0;
};

/// N x K grid of uncertainty records.
struct UncertaintyField {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<UncertaintyRecord> data;

    const UncertaintyRecord& at(std::size_t r, std::size_t c) const {
        return data[r * cols + c];
    }
    UncertaintyRecord& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
};

/// Entropy decomposition per (sample, class): tu is the entropy of the
/// ensemble mean, au the mean of per-member entropies, eu their difference
/// (the model-disagreement component). A cell whose members all agree has
/// tu == au and eu identically zero.
inline UncertaintyField decompose_uncertainty(const PredictionTensor& t) {
    UncertaintyField field;
    field.rows = t.n_samples();
    field.cols = t.n_classes();
    field.data.resize(field.rows * field.cols);
    const double inv_m = 1.0 / static_cast<double>(t.n_members());
    for (std::size_t n = 0; n < field.rows; ++n)
        for (std::size_t k = 0; k < field.cols; ++k) {
            const double first = t.at(n, k, 0);
            double sum = first;
            bool all_equal = true;
            for (std::size_t m = 1; m < t.n_members(); ++m) {
                const double p = t.at(n, k, m);
                sum += p;
                all_equal = all_equal && p == first;
            }
            auto& rec = field.at(n, k);
            if (all_equal) {
                rec.tu = rec.au = binary_entropy(first);
                rec.eu = 0.0;
                continue;
            }
            double entropy_sum = 0.0;
            for (std::size_t m = 0; m < t.n_members(); ++m)
                entropy_sum += binary_entropy(t.at(n, k, m));
            rec.tu = binary_entropy(sum * inv_m);
            rec.au = entropy_sum * inv_m;
            rec.eu = rec.tu - rec.au;
        }
    return field;
}

/// Sum of per-class total uncertainty for each sample — the multi-label
/// analogue of a summed categorical entropy. Derived quantity only; reports
/// use the per-class records.
inline std::vector<double> summed_total_uncertainty(const UncertaintyField& field) {
    std::vector<double> out(field.rows, 0.0);
    for (std::size_t n = 0; n < field.rows; ++n) {
        double sum = 0.0;
        for (std::size_t k = 0; k < field.cols; ++k) sum += field.at(n, k).tu;
        out[n] = sum;
    }
    return out;
}

struct UncertaintySummary {
    std::vector<UncertaintyRecord> per_class; // mean over samples, one per class
    UncertaintyRecord overall;                // mean over classes of per-class means
};

/// Per-class means over samples plus the overall mean of those means. With
/// positives_only set, each class averages only over its positive samples
/// (classes with no positives contribute zeroed means and are skipped in the
/// overall average).
inline UncertaintySummary mean_uncertainty_summary(
    const UncertaintyField& field, const LabelMatrix* labels = nullptr,
    bool positives_only = false) {
    if (field.rows == 0 || field.cols == 0)
        throw validation_error("cannot summarize an empty uncertainty field");
    if (positives_only && labels == nullptr)
        throw validation_error("positives-only summary requires labels");

    UncertaintySummary summary;
    summary.per_class.resize(field.cols);
    std::size_t included_classes = 0;
    for (std::size_t k = 0; k < field.cols; ++k) {
        double tu = 0.0, au = 0.0, eu = 0.0;
        std::size_t count = 0;
        for (std::size_t n = 0; n < field.rows; ++n) {
            if (positives_only && labels->at(n, k) == 0) continue;
            const auto& rec = field.at(n, k);
            tu += rec.tu;
            au += rec.au;
            eu += rec.eu;
            ++count;
        }
        auto& cls = summary.per_class[k];
        if (count > 0) {
            cls.tu = tu / static_cast<double>(count);
            cls.au = au / static_cast<double>(count);
            cls.eu = eu / static_cast<double>(count);
            summary.overall.tu += cls.tu;
            summary.overall.au += cls.au;
            summary.overall.eu += cls.eu;
            ++included_classes;
        }
    }
    if (included_classes == 0)
        throw validation_error("no class had samples to summarize");
    summary.overall.tu /= static_cast<double>(included_classes);
    summary.overall.au /= static_cast<double>(included_classes);
    summary.overall.eu /= static_cast<double>(included_classes);
    return summary;
}

} // namespace uqeval
