#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "uqeval/csv.hpp"
#include "uqeval/errors.hpp"
#include "uqeval/matrix.hpp"
#include "uqeval/prediction_store.hpp"

namespace uqeval {

/// One attribution map per ensemble member, all sharing a shape, values in
/// [0,1].
struct HeatmapStack {
    std::vector<Matrix> maps;

    explicit HeatmapStack(std::vector<Matrix> in) : maps(std::move(in)) {
        if (maps.empty()) throw validation_error("heatmap stack must not be empty");
        for (const auto& map : maps) {
            if (!map.same_shape(maps.front()))
                throw validation_error("heatmap shapes differ within the stack");
            for (double v : map.data)
                if (!(v >= 0.0 && v <= 1.0))
                    throw validation_error("heatmap values must lie in [0,1]");
        }
    }

    std::size_t size() const { return maps.size(); }
};

/// Consensus attribution: emitted only when the ensemble probability clears
/// the gate (strictly). The per-pixel member average is min-max renormalized
/// to [0,1]; a constant average maps to all zeros.
inline std::optional<Matrix> consensus_heatmap(const HeatmapStack& stack,
                                               double ensemble_prob,
                                               double gate = 0.5) {
    if (!(gate >= 0.0 && gate <= 1.0))
        throw validation_error("gate must lie in [0,1]");
    if (!(ensemble_prob >= 0.0 && ensemble_prob <= 1.0))
        throw validation_error("ensemble probability must lie in [0,1]");
    if (!(ensemble_prob > gate)) return std::nullopt;

    const Matrix& first = stack.maps.front();
    Matrix mean(first.rows, first.cols);
    const double inv_m = 1.0 / static_cast<double>(stack.size());
    for (const auto& map : stack.maps)
        for (std::size_t i = 0; i < map.data.size(); ++i) mean.data[i] += map.data[i];
    double lo = mean.data.empty() ? 0.0 : mean.data.front() * inv_m;
    double hi = lo;
    for (auto& v : mean.data) {
        v *= inv_m;
        if (v < lo) lo = v;
        if (v > hi) hi = v;
    }
    if (hi > lo) {
        const double scale = 1.0 / (hi - lo);
        for (auto& v : mean.data) v = (v - lo) * scale;
    } else {
        for (auto& v : mean.data) v = 0.0;
    }
    return mean;
}

/// Plain text matrix: one row per line, whitespace-separated decimals.
inline Matrix parse_text_matrix(const std::string& text) {
    Matrix out;
    std::istringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) {
        if (csv::trim(line).empty()) continue;
        std::istringstream row(line);
        std::vector<double> values;
        double v;
        while (row >> v) values.push_back(v);
        if (!row.eof())
            throw validation_error("malformed matrix row: '" + line + "'");
        if (out.cols == 0) out.cols = values.size();
        if (values.size() != out.cols)
            throw validation_error("ragged matrix row: '" + line + "'");
        out.data.insert(out.data.end(), values.begin(), values.end());
        ++out.rows;
    }
    if (out.rows == 0) throw validation_error("matrix text is empty");
    return out;
}

/// Heatmap stack from the binary tensor format: each member is one map of
/// n_samples pixels (shape n x 1; averaging ignores 2-D layout).
inline HeatmapStack heatmap_stack_from_tensor(const PredictionTensor& t) {
    if (t.n_classes() != 1)
        throw validation_error("heatmap tensors must have K=1");
    std::vector<Matrix> maps;
    maps.reserve(t.n_members());
    for (std::size_t m = 0; m < t.n_members(); ++m) {
        Matrix map(t.n_samples(), 1);
        for (std::size_t n = 0; n < t.n_samples(); ++n) map.at(n, 0) = t.at(n, 0, m);
        maps.push_back(std::move(map));
    }
    return HeatmapStack(std::move(maps));
}

} // namespace uqeval
