// uqeval command line: evaluation pipeline for multi-label classifier
// ensembles. Subcommands mirror the library modules; see README.md and
// docs/formats.md for the file formats involved.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "uqeval/uqeval.hpp"

namespace fs = std::filesystem;
using uqeval::ordered_json;

namespace {

struct GlobalOptions {
    std::size_t bins = 10;
    std::uint64_t seed = 0;
    std::string format = "csv";
    std::string out_dir = ".";
    std::vector<std::string> classes;
    std::string classes_file;
};

uqeval::ClassCatalog resolve_catalog(const GlobalOptions& opts) {
    if (!opts.classes_file.empty()) {
        std::vector<std::string> names;
        for (const auto& line : uqeval::csv::split_lines(
                 uqeval::csv::read_file(opts.classes_file))) {
            const std::string name = uqeval::csv::trim(line);
            if (!name.empty()) names.push_back(name);
        }
        return uqeval::ClassCatalog(names);
    }
    if (!opts.classes.empty()) return uqeval::ClassCatalog(opts.classes);
    return uqeval::ClassCatalog::nih_chest14();
}

void ensure_out_dir(const GlobalOptions& opts) {
    std::error_code ec;
    fs::create_directories(opts.out_dir, ec);
    if (ec) throw uqeval::io_error("cannot create directory " + opts.out_dir);
}

std::string out_path(const GlobalOptions& opts, const std::string& name) {
    return (fs::path(opts.out_dir) / name).string();
}

std::string sanitize_name(const std::string& name) {
    std::string out = name;
    for (char& c : out)
        if (c == ' ' || c == '/' || c == '\\') c = '_';
    return out;
}

struct LoadedPredictions {
    uqeval::PredictionTensor tensor;
    std::vector<uqeval::ProvenanceInput> inputs;
};

/// Accepts either one UQPM binary or one CSV per member (member id = file
/// stem). Rows are aligned to manifest order.
LoadedPredictions load_prediction_files(const std::vector<std::string>& paths,
                                        const uqeval::DatasetManifest& manifest,
                                        const uqeval::ClassCatalog& catalog) {
    if (paths.empty())
        throw uqeval::validation_error("at least one --pred file is required");

    std::vector<uqeval::ProvenanceInput> inputs;
    const std::string first = uqeval::csv::read_file(paths.front());
    if (uqeval::looks_like_uqpm(first)) {
        if (paths.size() != 1)
            throw uqeval::validation_error(
                "a binary tensor must be the only --pred argument");
        inputs.push_back({paths.front(), uqeval::csv::fnv1a64_hex(first)});
        auto tensor = uqeval::decode_uqpm(first);
        if (tensor.n_classes() != catalog.size())
            throw uqeval::validation_error("tensor has " +
                                           std::to_string(tensor.n_classes()) +
                                           " classes, catalog has " +
                                           std::to_string(catalog.size()));
        return {uqeval::align_to_manifest(tensor, manifest), std::move(inputs)};
    }

    std::vector<uqeval::MemberFile> members;
    members.push_back({fs::path(paths.front()).stem().string(), first});
    inputs.push_back({paths.front(), uqeval::csv::fnv1a64_hex(first)});
    for (std::size_t i = 1; i < paths.size(); ++i) {
        const std::string text = uqeval::csv::read_file(paths[i]);
        members.push_back({fs::path(paths[i]).stem().string(), text});
        inputs.push_back({paths[i], uqeval::csv::fnv1a64_hex(text)});
    }
    return {uqeval::load_predictions(members, manifest, catalog), std::move(inputs)};
}

void write_json(const std::string& path, const ordered_json& j) {
    uqeval::csv::write_file(path, j.dump(2) + "\n");
}

// --- subcommand bodies ------------------------------------------------------

int run_split(const GlobalOptions& opts, const std::string& manifest_path,
              double test_fraction, double val_fraction) {
    const auto catalog = resolve_catalog(opts);
    const auto manifest = uqeval::load_nih_manifest(manifest_path, catalog);
    const uqeval::SplitResult result = uqeval::patient_level_split(
        manifest, {test_fraction, val_fraction, opts.seed});

    ensure_out_dir(opts);
    const auto write_ids = [&](const std::string& name,
                               const std::vector<std::string>& ids) {
        std::string text;
        for (const auto& id : ids) text += id + "\n";
        uqeval::csv::write_file(out_path(opts, name), text);
    };
    write_ids("train_ids.txt", result.train_ids);
    write_ids("val_ids.txt", result.val_ids);
    write_ids("test_ids.txt", result.test_ids);

    ordered_json j;
    j["schema"] = "uqeval.split.v1";
    j["seed"] = opts.seed;
    j["test_patient_fraction"] = test_fraction;
    j["val_patient_fraction_of_remainder"] = val_fraction;
    j["patients"] = {{"train", result.train_patients},
                     {"val", result.val_patients},
                     {"test", result.test_patients}};
    j["images"] = {{"train", result.train_ids.size()},
                   {"val", result.val_ids.size()},
                   {"test", result.test_ids.size()}};
    write_json(out_path(opts, "split_summary.json"), j);
    std::cout << "split: " << result.train_ids.size() << " train / "
              << result.val_ids.size() << " val / " << result.test_ids.size()
              << " test images\n";
    return 0;
}

int run_synth(const GlobalOptions& opts, std::size_t samples,
              std::vector<double> prevalences, std::size_t members, double sigma,
              double tau, double bias) {
    if (prevalences.empty()) prevalences = {0.1, 0.3, 0.5};
    uqeval::SynthSpec spec;
    spec.n_samples = samples;
    spec.prevalences = prevalences;
    spec.n_members = members;
    spec.sigma = sigma;
    spec.tau = tau;
    spec.bias = bias;
    spec.seed = opts.seed;
    const uqeval::SynthResult result = uqeval::generate(spec);

    std::vector<std::string> class_names;
    for (std::size_t k = 0; k < prevalences.size(); ++k)
        class_names.push_back("class-" + std::to_string(k + 1));
    const uqeval::ClassCatalog catalog(class_names);

    ensure_out_dir(opts);
    {
        std::string classes_text;
        for (const auto& name : class_names) classes_text += name + "\n";
        uqeval::csv::write_file(out_path(opts, "classes.txt"), classes_text);
    }
    {
        std::string manifest = "Image Index,Finding Labels,Patient ID\n";
        for (std::size_t n = 0; n < samples; ++n) {
            std::string findings;
            for (std::size_t k = 0; k < class_names.size(); ++k) {
                if (!result.labels.at(n, k)) continue;
                if (!findings.empty()) findings += "|";
                findings += class_names[k];
            }
            if (findings.empty()) findings = "No Finding";
            manifest += result.tensor.image_ids()[n] + "," + findings + ",P" +
                        std::to_string(n) + "\n";
        }
        uqeval::csv::write_file(out_path(opts, "manifest.csv"), manifest);
    }
    {
        std::string truth = "image_id";
        for (const auto& name : class_names) truth += "," + name;
        truth += "\n";
        for (std::size_t n = 0; n < samples; ++n) {
            truth += result.tensor.image_ids()[n];
            for (std::size_t k = 0; k < class_names.size(); ++k)
                truth += "," + uqeval::csv::format_full(result.true_probabilities.at(n, k));
            truth += "\n";
        }
        uqeval::csv::write_file(out_path(opts, "true_probabilities.csv"), truth);
    }
    if (opts.format == "bin") {
        uqeval::csv::write_file(out_path(opts, "predictions.uqpm"),
                                uqeval::encode_uqpm(result.tensor));
    } else {
        for (std::size_t m = 0; m < members; ++m)
            uqeval::csv::write_file(
                out_path(opts, result.tensor.member_ids()[m] + ".csv"),
                uqeval::member_csv(result.tensor, m, catalog));
    }
    ordered_json j;
    j["schema"] = "uqeval.synthspec.v1";
    j["n_samples"] = samples;
    j["prevalences"] = prevalences;
    j["n_members"] = members;
    j["sigma"] = sigma;
    j["tau"] = tau;
    j["bias"] = bias;
    j["seed"] = opts.seed;
    j["classes"] = class_names;
    write_json(out_path(opts, "synth_spec.json"), j);
    std::cout << "synth: wrote " << samples << "x" << prevalences.size() << "x"
              << members << " tensor to " << opts.out_dir << "\n";
    return 0;
}

int run_uncertainty(const GlobalOptions& opts, const std::vector<std::string>& pred,
                    const std::string& manifest_path, bool positives_only) {
    const auto catalog = resolve_catalog(opts);
    const auto manifest = uqeval::load_nih_manifest(manifest_path, catalog);
    const auto loaded = load_prediction_files(pred, manifest, catalog);
    const auto field = uqeval::decompose_uncertainty(loaded.tensor);
    const auto labels = manifest.label_matrix();
    const auto summary =
        uqeval::mean_uncertainty_summary(field, &labels, positives_only);

    ensure_out_dir(opts);
    {
        std::string out = "image_id,class,tu,au,eu\n";
        for (std::size_t n = 0; n < field.rows; ++n)
            for (std::size_t k = 0; k < field.cols; ++k) {
                const auto& rec = field.at(n, k);
                out += loaded.tensor.image_ids()[n] + "," + catalog.name(k) + "," +
                       uqeval::csv::format6(rec.tu) + "," +
                       uqeval::csv::format6(rec.au) + "," +
                       uqeval::csv::format6(rec.eu) + "\n";
            }
        uqeval::csv::write_file(out_path(opts, "uncertainty.csv"), out);
    }
    ordered_json j;
    j["schema"] = "uqeval.uncertainty.v1";
    j["positives_only"] = positives_only;
    j["classes"] = ordered_json::array();
    for (std::size_t k = 0; k < field.cols; ++k) {
        const auto& rec = summary.per_class[k];
        j["classes"].push_back({{"name", catalog.name(k)},
                                {"tu_mean", uqeval::detail::round6(rec.tu)},
                                {"au_mean", uqeval::detail::round6(rec.au)},
                                {"eu_mean", uqeval::detail::round6(rec.eu)}});
    }
    j["overall"] = {{"tu_mean", uqeval::detail::round6(summary.overall.tu)},
                    {"au_mean", uqeval::detail::round6(summary.overall.au)},
                    {"eu_mean", uqeval::detail::round6(summary.overall.eu)}};
    write_json(out_path(opts, "uncertainty_summary.json"), j);
    std::cout << "uncertainty: overall TU " << uqeval::csv::format6(summary.overall.tu)
              << ", AU " << uqeval::csv::format6(summary.overall.au) << ", EU "
              << uqeval::csv::format6(summary.overall.eu) << "\n";
    return 0;
}

int run_calibrate(const GlobalOptions& opts, const std::vector<std::string>& pred,
                  const std::string& manifest_path) {
    const auto catalog = resolve_catalog(opts);
    const auto manifest = uqeval::load_nih_manifest(manifest_path, catalog);
    const auto loaded = load_prediction_files(pred, manifest, catalog);
    const auto labels = manifest.label_matrix();
    const uqeval::Matrix mean = uqeval::ensemble_mean(loaded.tensor);

    ensure_out_dir(opts);
    ordered_json j;
    j["schema"] = "uqeval.calibration.v1";
    j["bins"] = opts.bins;
    j["classes"] = ordered_json::array();
    std::vector<double> p(mean.rows);
    for (std::size_t k = 0; k < mean.cols; ++k) {
        for (std::size_t n = 0; n < mean.rows; ++n) p[n] = mean.at(n, k);
        const auto y = labels.column(k);
        const auto bins = uqeval::reliability_bins(p, y, opts.bins);
        j["classes"].push_back(
            {{"name", catalog.name(k)},
             {"ece", uqeval::detail::round6(uqeval::ece(bins))},
             {"nll", uqeval::detail::round6(uqeval::nll(p, y))},
             {"brier", uqeval::detail::round6(uqeval::brier(p, y))}});

        std::string csv_text = "class,bin_lower,bin_upper,count,confidence,accuracy\n";
        for (const auto& bin : bins.bins) {
            csv_text += catalog.name(k) + "," + uqeval::csv::format6(bin.lower) + "," +
                        uqeval::csv::format6(bin.upper) + "," +
                        std::to_string(bin.count) + ",";
            if (bin.count > 0)
                csv_text += uqeval::csv::format6(bin.confidence) + "," +
                            uqeval::csv::format6(bin.accuracy);
            else
                csv_text += ",";
            csv_text += "\n";
        }
        uqeval::csv::write_file(
            out_path(opts, "reliability_" + sanitize_name(catalog.name(k)) + ".csv"),
            csv_text);
    }
    write_json(out_path(opts, "calibration.json"), j);
    std::cout << "calibrate: wrote per-class reports for " << mean.cols
              << " classes\n";
    return 0;
}

int run_thresholds(const GlobalOptions& opts, const std::vector<std::string>& pred,
                   const std::string& manifest_path) {
    const auto catalog = resolve_catalog(opts);
    const auto manifest = uqeval::load_nih_manifest(manifest_path, catalog);
    const auto loaded = load_prediction_files(pred, manifest, catalog);
    const auto labels = manifest.label_matrix();
    const uqeval::Matrix mean = uqeval::ensemble_mean(loaded.tensor);

    ensure_out_dir(opts);
    ordered_json j;
    j["schema"] = "uqeval.thresholds.v1";
    j["classes"] = ordered_json::array();
    std::vector<double> p(mean.rows);
    for (std::size_t k = 0; k < mean.cols; ++k) {
        for (std::size_t n = 0; n < mean.rows; ++n) p[n] = mean.at(n, k);
        auto choice = uqeval::select_threshold(p, labels.column(k));
        choice.class_index = k;
        j["classes"].push_back({{"name", catalog.name(k)},
                                {"threshold", uqeval::detail::round6(choice.threshold)},
                                {"f1", uqeval::detail::round6(choice.f1)}});
    }
    write_json(out_path(opts, "thresholds.json"), j);
    std::cout << "thresholds: wrote " << mean.cols << " per-class choices\n";
    return 0;
}

int run_roc(const GlobalOptions& opts, const std::vector<std::string>& pred,
            const std::string& manifest_path) {
    const auto catalog = resolve_catalog(opts);
    const auto manifest = uqeval::load_nih_manifest(manifest_path, catalog);
    const auto loaded = load_prediction_files(pred, manifest, catalog);
    const auto labels = manifest.label_matrix();
    const uqeval::Matrix mean = uqeval::ensemble_mean(loaded.tensor);

    ensure_out_dir(opts);
    std::string out = "class,fpr,tpr,threshold\n";
    std::vector<double> p(mean.rows);
    for (std::size_t k = 0; k < mean.cols; ++k) {
        for (std::size_t n = 0; n < mean.rows; ++n) p[n] = mean.at(n, k);
        const auto curve = uqeval::roc_curve(p, labels.column(k));
        for (const auto& point : curve.points)
            out += catalog.name(k) + "," + uqeval::csv::format6(point.fpr) + "," +
                   uqeval::csv::format6(point.tpr) + "," +
                   uqeval::csv::format6(point.threshold) + "\n";
    }
    uqeval::csv::write_file(out_path(opts, "roc.csv"), out);
    std::cout << "roc: wrote curves for " << mean.cols << " classes\n";
    return 0;
}

int run_eval(const GlobalOptions& opts, const std::vector<std::string>& pred,
             const std::string& manifest_path, const std::string& thresholds_path,
             const std::vector<std::string>& val_pred,
             const std::string& val_manifest_path, bool sidecar) {
    const auto catalog = resolve_catalog(opts);
    const auto manifest = uqeval::load_nih_manifest(manifest_path, catalog);
    auto loaded = load_prediction_files(pred, manifest, catalog);
    const auto labels = manifest.label_matrix();

    uqeval::EvalOptions eval_opts;
    eval_opts.bins = opts.bins;
    eval_opts.provenance.inputs = loaded.inputs;
    eval_opts.provenance.inputs.push_back(
        {manifest_path, uqeval::csv::fnv1a64_hex(uqeval::csv::read_file(manifest_path))});

    std::optional<uqeval::PredictionTensor> val_tensor;
    uqeval::LabelMatrix val_labels;
    if (!thresholds_path.empty()) {
        const auto doc = ordered_json::parse(uqeval::csv::read_file(thresholds_path));
        std::vector<double> thresholds(catalog.size());
        std::vector<bool> found(catalog.size(), false);
        for (const auto& c : doc.at("classes")) {
            const auto k = catalog.find(c.at("name").get<std::string>());
            if (!k) continue;
            thresholds[*k] = c.at("threshold").get<double>();
            found[*k] = true;
        }
        for (std::size_t k = 0; k < catalog.size(); ++k)
            if (!found[k])
                throw uqeval::validation_error("thresholds file lacks class '" +
                                               catalog.name(k) + "'");
        eval_opts.thresholds = std::move(thresholds);
    } else if (!val_pred.empty() && !val_manifest_path.empty()) {
        const auto val_manifest = uqeval::load_nih_manifest(val_manifest_path, catalog);
        auto val_loaded = load_prediction_files(val_pred, val_manifest, catalog);
        val_tensor.emplace(std::move(val_loaded.tensor));
        val_labels = val_manifest.label_matrix();
        eval_opts.val_tensor = &*val_tensor;
        eval_opts.val_labels = &val_labels;
    } else {
        throw uqeval::validation_error(
            "eval needs --thresholds or both --val-pred and --val-manifest");
    }

    const uqeval::EnsembleReport report =
        uqeval::evaluate(loaded.tensor, labels, catalog, eval_opts);

    ensure_out_dir(opts);
    write_json(out_path(opts, "report.json"), uqeval::report_to_json(report));
    uqeval::csv::write_file(out_path(opts, "report.csv"), uqeval::report_to_csv(report));
    if (sidecar)
        write_json(out_path(opts, "report_full.json"),
                   uqeval::report_to_json(report, true));
    for (const auto& warning : report.warnings)
        std::cerr << "warning: " << warning << "\n";
    std::cout << "eval: macro F1 " << uqeval::csv::format6(report.macro.f1);
    if (report.macro.auroc)
        std::cout << ", macro AUROC " << uqeval::csv::format6(*report.macro.auroc);
    std::cout << ", mean ECE " << uqeval::csv::format6(report.macro.ece) << "\n";
    return 0;
}

int run_compare(const GlobalOptions& opts, const std::string& a_path,
                const std::string& b_path) {
    const auto a = uqeval::report_from_json(
        ordered_json::parse(uqeval::csv::read_file(a_path)));
    const auto b = uqeval::report_from_json(
        ordered_json::parse(uqeval::csv::read_file(b_path)));
    const auto table = uqeval::compare_runs(a, b);
    std::cout << uqeval::comparison_to_text(table);
    ensure_out_dir(opts);
    write_json(out_path(opts, "compare.json"), uqeval::comparison_to_json(table));
    return 0;
}

int run_losscheck(const GlobalOptions& opts, std::size_t trials) {
    uqeval::Xoshiro256ss rng(opts.seed);
    const double tolerance = 1e-4;

    struct Row {
        std::string name;
        double worst = 0.0;
    };
    std::vector<Row> rows{{"focal(alpha=1,gamma=2)"}, {"focal(random params)"}, {"zlpr"}};

    for (std::size_t trial = 0; trial < trials; ++trial) {
        const std::size_t k = 1 + static_cast<std::size_t>(rng.bounded(8));
        std::vector<double> logits(k);
        std::vector<std::uint8_t> labels(k);
        const double scale = trial % 5 == 0 ? 30.0 : 6.0;
        for (std::size_t i = 0; i < k; ++i) {
            logits[i] = (rng.uniform() * 2.0 - 1.0) * scale;
            labels[i] = rng.uniform() < 0.5 ? 1 : 0;
        }
        const uqeval::FocalParams random_params{0.25 + rng.uniform() * 3.75,
                                                rng.uniform() * 3.0};

        const auto check = [&](Row& row, auto&& loss_fn) {
            const auto result = loss_fn(std::span<const double>(logits),
                                        std::span<const std::uint8_t>(labels));
            const auto numeric = uqeval::finite_diff_gradient(loss_fn, logits, labels);
            row.worst = std::max(
                row.worst, uqeval::max_gradient_discrepancy(result.gradient, numeric));
        };
        check(rows[0], [](std::span<const double> s, std::span<const std::uint8_t> y) {
            return uqeval::focal_loss(s, y, {1.0, 2.0});
        });
        check(rows[1], [&](std::span<const double> s, std::span<const std::uint8_t> y) {
            return uqeval::focal_loss(s, y, random_params);
        });
        check(rows[2], [](std::span<const double> s, std::span<const std::uint8_t> y) {
            return uqeval::zlpr_loss(s, y);
        });
    }

    bool all_ok = true;
    std::printf("%-26s %-14s %s\n", "loss", "max rel error", "status");
    for (const auto& row : rows) {
        const bool ok = row.worst < tolerance;
        all_ok = all_ok && ok;
        std::printf("%-26s %-14.3e %s\n", row.name.c_str(), row.worst,
                    ok ? "PASS" : "FAIL");
    }
    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"uqeval - ensemble evaluation and uncertainty toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions opts;
    app.add_option("--bins", opts.bins, "reliability bin count")->capture_default_str();
    app.add_option("--seed", opts.seed, "generator seed")->capture_default_str();
    app.add_option("--format", opts.format, "tensor output format")
        ->check(CLI::IsMember({"csv", "bin"}))
        ->capture_default_str();
    app.add_option("--out", opts.out_dir, "output directory")->capture_default_str();
    app.add_option("--classes", opts.classes,
                   "class catalog (defaults to the 14 NIH pathologies)")
        ->delimiter(',');
    app.add_option("--classes-file", opts.classes_file, "class catalog, one per line");

    // split
    std::string manifest_path;
    double test_fraction = 0.02, val_fraction = 0.052;
    auto* split = app.add_subcommand("split", "patient-level train/val/test split");
    split->add_option("--manifest", manifest_path)->required();
    split->add_option("--test-fraction", test_fraction)->capture_default_str();
    split->add_option("--val-fraction", val_fraction)->capture_default_str();

    // synth
    std::size_t samples = 1000, members = 3;
    std::vector<double> prevalences;
    double sigma = 0.0, tau = 1.0, bias = 0.0;
    auto* synth = app.add_subcommand("synth", "generate a synthetic ensemble");
    synth->add_option("--samples", samples)->capture_default_str();
    synth->add_option("--prevalence", prevalences, "per-class positive rate")
        ->delimiter(',');
    synth->add_option("--members", members)->capture_default_str();
    synth->add_option("--sigma", sigma, "member logit-noise scale")
        ->capture_default_str();
    synth->add_option("--tau", tau, "logit temperature")->capture_default_str();
    synth->add_option("--bias", bias, "logit shift")->capture_default_str();

    // shared prediction-input options
    std::vector<std::string> pred;
    bool positives_only = false;
    auto* uncertainty =
        app.add_subcommand("uncertainty", "per-sample TU/AU/EU decomposition");
    uncertainty->add_option("--pred", pred, "UQPM tensor or member CSVs")->required();
    uncertainty->add_option("--manifest", manifest_path)->required();
    uncertainty->add_flag("--positives-only", positives_only,
                          "summarize only positive-labelled cells");

    auto* calibrate = app.add_subcommand("calibrate", "ECE/NLL/Brier with bins");
    calibrate->add_option("--pred", pred)->required();
    calibrate->add_option("--manifest", manifest_path)->required();

    auto* thresholds_cmd =
        app.add_subcommand("thresholds", "per-class F1-optimal thresholds");
    thresholds_cmd->add_option("--pred", pred)->required();
    thresholds_cmd->add_option("--manifest", manifest_path)->required();

    auto* roc = app.add_subcommand("roc", "per-class ROC points");
    roc->add_option("--pred", pred)->required();
    roc->add_option("--manifest", manifest_path)->required();

    // eval
    std::string thresholds_path, val_manifest_path;
    std::vector<std::string> val_pred;
    bool sidecar = false;
    auto* eval = app.add_subcommand("eval", "full evaluation report");
    eval->add_option("--pred", pred)->required();
    eval->add_option("--manifest", manifest_path)->required();
    eval->add_option("--thresholds", thresholds_path, "thresholds JSON");
    eval->add_option("--val-pred", val_pred, "validation predictions");
    eval->add_option("--val-manifest", val_manifest_path, "validation manifest");
    eval->add_flag("--sidecar", sidecar, "also write full-precision report");

    // compare
    std::string a_path, b_path;
    auto* compare = app.add_subcommand("compare", "delta table between two reports");
    compare->add_option("--a", a_path)->required();
    compare->add_option("--b", b_path)->required();

    // losscheck
    std::size_t trials = 1000;
    auto* losscheck =
        app.add_subcommand("losscheck", "randomized gradient verification");
    losscheck->add_option("--trials", trials)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (split->parsed())
            return run_split(opts, manifest_path, test_fraction, val_fraction);
        if (synth->parsed())
            return run_synth(opts, samples, prevalences, members, sigma, tau, bias);
        if (uncertainty->parsed())
            return run_uncertainty(opts, pred, manifest_path, positives_only);
        if (calibrate->parsed()) return run_calibrate(opts, pred, manifest_path);
        if (thresholds_cmd->parsed()) return run_thresholds(opts, pred, manifest_path);
        if (roc->parsed()) return run_roc(opts, pred, manifest_path);
        if (eval->parsed())
            return run_eval(opts, pred, manifest_path, thresholds_path, val_pred,
                            val_manifest_path, sidecar);
        if (compare->parsed()) return run_compare(opts, a_path, b_path);
        if (losscheck->parsed()) return run_losscheck(opts, trials);
    } catch (const uqeval::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const uqeval::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
