#pragma once

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "uqeval/calibration.hpp"
#include "uqeval/class_catalog.hpp"
#include "uqeval/classification.hpp"
#include "uqeval/csv.hpp"
#include "uqeval/ensemble.hpp"
#include "uqeval/errors.hpp"
#include "uqeval/matrix.hpp"
#include "uqeval/prediction_store.hpp"

namespace uqeval {

using ordered_json = nlohmann::ordered_json;

/// One per-class row of an evaluation report. auroc is absent when the class
/// had single-class labels.
struct ClassReport {
    std::string name;
    std::optional<double> auroc;
    double f1 = 0.0;
    double threshold = 0.0;
    double brier = 0.0;
    double ece = 0.0;
    double nll = 0.0;
    double tu_mean = 0.0;
    double au_mean = 0.0;
    double eu_mean = 0.0;
};

struct MacroBlock {
    std::optional<double> auroc; // over classes where AUROC is defined
    double f1 = 0.0;
    double brier = 0.0;
    double ece = 0.0;
    double nll = 0.0;
    double tu_mean = 0.0;
    double au_mean = 0.0;
    double eu_mean = 0.0;
};

struct ProvenanceInput {
    std::string path;
    std::string fnv1a64;
};

struct Provenance {
    std::vector<std::string> member_ids;
    std::vector<ProvenanceInput> inputs;
    std::size_t bins = 10;
    std::string thresholds_source; // "provided" or "validation"
};

struct EnsembleReport {
    std::vector<ClassReport> classes;
    MacroBlock macro;
    std::vector<std::string> warnings;
    Provenance provenance;
};

/// Arithmetic mean; the macro op behind every summary row.
inline double macro_average(std::span<const double> values) {
    if (values.empty()) throw validation_error("macro average of an empty list");
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

struct EvalOptions {
    std::size_t bins = 10;
    std::optional<std::vector<double>> thresholds; // per class, in [0,1]
    const PredictionTensor* val_tensor = nullptr;  // used when thresholds absent
    const LabelMatrix* val_labels = nullptr;
    Provenance provenance;
};

/// Full evaluation pipeline: ensemble mean, per-class classification and
/// calibration metrics at the chosen thresholds, entropy decomposition, and
/// macro summary. Deterministic for identical inputs and options.
inline EnsembleReport evaluate(const PredictionTensor& tensor,
                               const LabelMatrix& labels,
                               const ClassCatalog& catalog,
                               const EvalOptions& options = {}) {
    const std::size_t k_count = tensor.n_classes();
    if (catalog.size() != k_count)
        throw validation_error("catalog size does not match tensor classes");
    if (labels.rows != tensor.n_samples() || labels.cols != k_count)
        throw validation_error("label matrix shape does not match tensor");
    if (options.bins == 0) throw validation_error("bin count must be positive");

    std::vector<double> thresholds;
    std::string thresholds_source;
    if (options.thresholds) {
        if (options.thresholds->size() != k_count)
            throw validation_error("expected one threshold per class");
        for (double t : *options.thresholds)
            if (!(t >= 0.0 && t <= 1.0))
                throw validation_error("thresholds must lie in [0,1]");
        thresholds = *options.thresholds;
        thresholds_source = "provided";
    } else {
        if (options.val_tensor == nullptr || options.val_labels == nullptr)
            throw validation_error(
                "evaluate needs explicit thresholds or a validation split");
        if (options.val_tensor->n_classes() != k_count)
            throw validation_error("validation tensor class count differs");
        const Matrix val_mean = ensemble_mean(*options.val_tensor);
        std::vector<double> scores(val_mean.rows);
        thresholds.resize(k_count);
        for (std::size_t k = 0; k < k_count; ++k) {
            for (std::size_t n = 0; n < val_mean.rows; ++n)
                scores[n] = val_mean.at(n, k);
            thresholds[k] = select_threshold(scores, options.val_labels->column(k)).threshold;
        }
        thresholds_source = "validation";
    }

    const Matrix mean = ensemble_mean(tensor);
    const UncertaintyField field = decompose_uncertainty(tensor);
    const UncertaintySummary uncertainty = mean_uncertainty_summary(field);

    EnsembleReport report;
    report.provenance = options.provenance;
    report.provenance.member_ids = tensor.member_ids();
    report.provenance.bins = options.bins;
    report.provenance.thresholds_source = thresholds_source;

    std::vector<double> p(tensor.n_samples());
    std::vector<double> defined_aurocs;
    for (std::size_t k = 0; k < k_count; ++k) {
        for (std::size_t n = 0; n < tensor.n_samples(); ++n) p[n] = mean.at(n, k);
        const auto y = labels.column(k);

        ClassReport row;
        row.name = catalog.name(k);
        row.threshold = thresholds[k];
        try {
            row.auroc = auroc(p, y);
            defined_aurocs.push_back(*row.auroc);
        } catch (const validation_error&) {
            report.warnings.push_back("class " + row.name +
                                      ": AUROC undefined (single-class labels), "
                                      "excluded from macro AUROC");
        }
        const ConfusionCounts counts = confusion_at(p, y, row.threshold);
        row.f1 = f1_score(counts.tp, counts.fp, counts.fn);
        row.brier = brier(p, y);
        row.ece = ece(p, y, options.bins);
        row.nll = nll(p, y);
        row.tu_mean = uncertainty.per_class[k].tu;
        row.au_mean = uncertainty.per_class[k].au;
        row.eu_mean = uncertainty.per_class[k].eu;
        report.classes.push_back(std::move(row));
    }

    std::vector<double> f1s, briers, eces, nlls, tus, aus, eus;
    for (const auto& row : report.classes) {
        f1s.push_back(row.f1);
        briers.push_back(row.brier);
        eces.push_back(row.ece);
        nlls.push_back(row.nll);
        tus.push_back(row.tu_mean);
        aus.push_back(row.au_mean);
        eus.push_back(row.eu_mean);
    }
    if (!defined_aurocs.empty()) report.macro.auroc = macro_average(defined_aurocs);
    report.macro.f1 = macro_average(f1s);
    report.macro.brier = macro_average(briers);
    report.macro.ece = macro_average(eces);
    report.macro.nll = macro_average(nlls);
    report.macro.tu_mean = macro_average(tus);
    report.macro.au_mean = macro_average(aus);
    report.macro.eu_mean = macro_average(eus);
    return report;
}

namespace detail {

/// Six-significant-digit rounding for serialized report floats.
inline double round6(double v) {
    return std::strtod(csv::format6(v).c_str(), nullptr);
}

inline ordered_json json_number(double v, bool full_precision) {
    return full_precision ? v : round6(v);
}

inline ordered_json json_optional(const std::optional<double>& v, bool full_precision) {
    if (!v) return nullptr;
    return json_number(*v, full_precision);
}

} // namespace detail

inline ordered_json report_to_json(const EnsembleReport& report,
                                   bool full_precision = false) {
    ordered_json j;
    j["schema"] = "uqeval.report.v1";
    j["classes"] = ordered_json::array();
    for (const auto& row : report.classes) {
        ordered_json c;
        c["name"] = row.name;
        c["auroc"] = detail::json_optional(row.auroc, full_precision);
        c["f1"] = detail::json_number(row.f1, full_precision);
        c["threshold"] = detail::json_number(row.threshold, full_precision);
        c["brier"] = detail::json_number(row.brier, full_precision);
        c["ece"] = detail::json_number(row.ece, full_precision);
        c["nll"] = detail::json_number(row.nll, full_precision);
        c["tu_mean"] = detail::json_number(row.tu_mean, full_precision);
        c["au_mean"] = detail::json_number(row.au_mean, full_precision);
        c["eu_mean"] = detail::json_number(row.eu_mean, full_precision);
        j["classes"].push_back(std::move(c));
    }
    ordered_json m;
    m["auroc"] = detail::json_optional(report.macro.auroc, full_precision);
    m["f1"] = detail::json_number(report.macro.f1, full_precision);
    m["brier"] = detail::json_number(report.macro.brier, full_precision);
    m["ece"] = detail::json_number(report.macro.ece, full_precision);
    m["nll"] = detail::json_number(report.macro.nll, full_precision);
    m["tu_mean"] = detail::json_number(report.macro.tu_mean, full_precision);
    m["au_mean"] = detail::json_number(report.macro.au_mean, full_precision);
    m["eu_mean"] = detail::json_number(report.macro.eu_mean, full_precision);
    j["macro"] = std::move(m);
    j["warnings"] = report.warnings;
    ordered_json prov;
    prov["member_ids"] = report.provenance.member_ids;
    prov["inputs"] = ordered_json::array();
    for (const auto& input : report.provenance.inputs)
        prov["inputs"].push_back({{"path", input.path}, {"fnv1a64", input.fnv1a64}});
    prov["settings"] = {{"bins", report.provenance.bins},
                        {"thresholds", report.provenance.thresholds_source}};
    j["provenance"] = std::move(prov);
    return j;
}

/// Per-class CSV mirror in the canonical column order.
inline std::string report_to_csv(const EnsembleReport& report) {
    std::string out = "class,auroc,f1,threshold,brier,ece,nll,tu_mean,au_mean,eu_mean\n";
    for (const auto& row : report.classes) {
        out += row.name;
        out += ',';
        out += row.auroc ? csv::format6(*row.auroc) : std::string();
        for (double v : {row.f1, row.threshold, row.brier, row.ece, row.nll,
                         row.tu_mean, row.au_mean, row.eu_mean})
            out += "," + csv::format6(v);
        out += '\n';
    }
    return out;
}

inline EnsembleReport report_from_json(const ordered_json& j) {
    if (!j.contains("classes") || !j.contains("macro"))
        throw validation_error("not a uqeval report document");
    EnsembleReport report;
    for (const auto& c : j.at("classes")) {
        ClassReport row;
        row.name = c.at("name").get<std::string>();
        if (!c.at("auroc").is_null()) row.auroc = c.at("auroc").get<double>();
        row.f1 = c.at("f1").get<double>();
        row.threshold = c.at("threshold").get<double>();
        row.brier = c.at("brier").get<double>();
        row.ece = c.at("ece").get<double>();
        row.nll = c.at("nll").get<double>();
        row.tu_mean = c.at("tu_mean").get<double>();
        row.au_mean = c.at("au_mean").get<double>();
        row.eu_mean = c.at("eu_mean").get<double>();
        report.classes.push_back(std::move(row));
    }
    const auto& m = j.at("macro");
    if (!m.at("auroc").is_null()) report.macro.auroc = m.at("auroc").get<double>();
    report.macro.f1 = m.at("f1").get<double>();
    report.macro.brier = m.at("brier").get<double>();
    report.macro.ece = m.at("ece").get<double>();
    report.macro.nll = m.at("nll").get<double>();
    report.macro.tu_mean = m.at("tu_mean").get<double>();
    report.macro.au_mean = m.at("au_mean").get<double>();
    report.macro.eu_mean = m.at("eu_mean").get<double>();
    if (j.contains("warnings"))
        report.warnings = j.at("warnings").get<std::vector<std::string>>();
    return report;
}

struct ClassDelta {
    std::string name;
    std::optional<double> auroc;
    double f1 = 0.0;
    double threshold = 0.0;
    double brier = 0.0;
    double ece = 0.0;
    double nll = 0.0;
    double tu_mean = 0.0;
    double au_mean = 0.0;
    double eu_mean = 0.0;
};

struct ComparisonTable {
    std::vector<ClassDelta> classes; // b - a per metric
    ClassDelta macro;
};

/// Per-metric deltas (run B minus run A); both reports must share a catalog.
inline ComparisonTable compare_runs(const EnsembleReport& a, const EnsembleReport& b) {
    if (a.classes.size() != b.classes.size())
        throw validation_error("reports cover different class catalogs");
    for (std::size_t k = 0; k < a.classes.size(); ++k)
        if (a.classes[k].name != b.classes[k].name)
            throw validation_error("reports cover different class catalogs");

    ComparisonTable table;
    const auto diff = [](const auto& x, const auto& y) {
        ClassDelta d;
        if (x.auroc && y.auroc) d.auroc = *y.auroc - *x.auroc;
        d.f1 = y.f1 - x.f1;
        d.brier = y.brier - x.brier;
        d.ece = y.ece - x.ece;
        d.nll = y.nll - x.nll;
        d.tu_mean = y.tu_mean - x.tu_mean;
        d.au_mean = y.au_mean - x.au_mean;
        d.eu_mean = y.eu_mean - x.eu_mean;
        return d;
    };
    for (std::size_t k = 0; k < a.classes.size(); ++k) {
        ClassDelta d = diff(a.classes[k], b.classes[k]);
        d.name = a.classes[k].name;
        d.threshold = b.classes[k].threshold - a.classes[k].threshold;
        table.classes.push_back(std::move(d));
    }
    table.macro = diff(a.macro, b.macro);
    table.macro.name = "macro";
    return table;
}

inline ordered_json comparison_to_json(const ComparisonTable& table) {
    ordered_json j;
    j["schema"] = "uqeval.compare.v1";
    const auto emit = [](const ClassDelta& d) {
        ordered_json c;
        c["name"] = d.name;
        c["auroc"] = detail::json_optional(d.auroc, false);
        c["f1"] = detail::round6(d.f1);
        c["brier"] = detail::round6(d.brier);
        c["ece"] = detail::round6(d.ece);
        c["nll"] = detail::round6(d.nll);
        c["tu_mean"] = detail::round6(d.tu_mean);
        c["au_mean"] = detail::round6(d.au_mean);
        c["eu_mean"] = detail::round6(d.eu_mean);
        return c;
    };
    j["classes"] = ordered_json::array();
    for (const auto& d : table.classes) j["classes"].push_back(emit(d));
    j["macro"] = emit(table.macro);
    return j;
}

inline std::string comparison_to_text(const ComparisonTable& table) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof(line), "%-22s %9s %9s %9s %9s %9s %9s %9s %9s\n",
                  "class", "auroc", "f1", "brier", "ece", "nll", "tu", "au", "eu");
    out += line;
    const auto emit = [&](const ClassDelta& d) {
        char auroc_buf[16] = "     n/a";
        if (d.auroc) std::snprintf(auroc_buf, sizeof(auroc_buf), "%+9.4f", *d.auroc);
        std::snprintf(line, sizeof(line),
                      "%-22s %9s %+9.4f %+9.4f %+9.4f %+9.4f %+9.4f %+9.4f %+9.4f\n",
                      d.name.c_str(), auroc_buf, d.f1, d.brier, d.ece, d.nll,
                      d.tu_mean, d.au_mean, d.eu_mean);
        out += line;
    };
    for (const auto& d : table.classes) emit(d);
    emit(table.macro);
    return out;
}

} // namespace uqeval
