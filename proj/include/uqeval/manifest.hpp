#pragma once

#include <cctype>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "uqeval/class_catalog.hpp"
#include "uqeval/csv.hpp"
#include "uqeval/errors.hpp"
#include "uqeval/matrix.hpp"

namespace uqeval {

struct ManifestEntry {
    std::string image_id;
    std::string patient_id;
    std::vector<std::uint8_t> labels; // K entries, 0/1
};

/// Ground-truth listing: one entry per image, in file row order. Row order is
/// the canonical sample order for every tensor aligned with this manifest.
struct DatasetManifest {
    std::vector<ManifestEntry> entries;

    std::size_t size() const { return entries.size(); }

    LabelMatrix label_matrix() const {
        const std::size_t k = entries.empty() ? 0 : entries.front().labels.size();
        LabelMatrix m(entries.size(), k);
        for (std::size_t r = 0; r < entries.size(); ++r)
            for (std::size_t c = 0; c < k; ++c) m.at(r, c) = entries[r].labels[c];
        return m;
    }

    std::vector<std::string> image_ids() const {
        std::vector<std::string> ids;
        ids.reserve(entries.size());
        for (const auto& e : entries) ids.push_back(e.image_id);
        return ids;
    }
};

namespace detail {

// Header matching ignores case and punctuation, so "Image Index", "image_id"
// and "Finding Labels" all resolve.
inline std::string squash_header(std::string_view s) {
    std::string out;
    for (char c : s)
        if (std::isalnum(static_cast<unsigned char>(c)))
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

inline std::size_t find_column(const std::vector<std::string>& header,
                               const std::vector<std::string>& accepted,
                               const std::string& what) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string squashed = squash_header(header[i]);
        for (const auto& candidate : accepted)
            if (squashed == candidate) return i;
    }
    throw validation_error("manifest is missing a " + what + " column");
}

} // namespace detail

/// Parses an NIH-layout label CSV (image id, pipe-delimited findings, patient
/// id; columns located by header name). "No Finding" maps to the all-zero
/// label vector.
inline DatasetManifest parse_nih_manifest(const std::string& csv_text,
                                          const ClassCatalog& catalog) {
    const auto lines = csv::split_lines(csv_text);
    if (lines.empty()) throw validation_error("manifest is empty");

    const auto header = csv::split_record(lines[0]);
    const std::size_t image_col =
        detail::find_column(header, {"imageindex", "imageid", "image"}, "image-id");
    const std::size_t findings_col = detail::find_column(
        header, {"findinglabels", "findings", "findinglabel"}, "finding-labels");
    const std::size_t patient_col =
        detail::find_column(header, {"patientid", "patient"}, "patient-id");

    DatasetManifest manifest;
    manifest.entries.reserve(lines.size() - 1);
    std::unordered_set<std::string> seen_ids;

    for (std::size_t row = 1; row < lines.size(); ++row) {
        if (lines[row].empty()) continue;
        const auto fields = csv::split_record(lines[row]);
        const std::size_t needed =
            std::max({image_col, findings_col, patient_col}) + 1;
        if (fields.size() < needed)
            throw validation_error("manifest row " + std::to_string(row + 1) +
                                   " has too few columns");

        ManifestEntry entry;
        entry.image_id = csv::trim(fields[image_col]);
        entry.patient_id = csv::trim(fields[patient_col]);
        if (entry.image_id.empty())
            throw validation_error("manifest row " + std::to_string(row + 1) +
                                   " has an empty image id");
        if (!seen_ids.insert(entry.image_id).second)
            throw validation_error("duplicate image id '" + entry.image_id +
                                   "' at manifest row " + std::to_string(row + 1));

        entry.labels.assign(catalog.size(), 0);
        const std::string findings = csv::trim(fields[findings_col]);
        std::size_t start = 0;
        while (start <= findings.size()) {
            std::size_t end = findings.find('|', start);
            if (end == std::string::npos) end = findings.size();
            const std::string token = csv::trim(findings.substr(start, end - start));
            if (!token.empty() && token != "No Finding" && token != "No_Finding") {
                const auto k = catalog.find(token);
                if (!k)
                    throw validation_error("unknown pathology '" + token +
                                           "' at manifest row " +
                                           std::to_string(row + 1));
                entry.labels[*k] = 1;
            }
            if (end == findings.size()) break;
            start = end + 1;
        }
        manifest.entries.push_back(std::move(entry));
    }
    if (manifest.entries.empty()) throw validation_error("manifest has no data rows");
    return manifest;
}

inline DatasetManifest load_nih_manifest(const std::string& path,
                                         const ClassCatalog& catalog) {
    return parse_nih_manifest(csv::read_file(path), catalog);
}

} // namespace uqeval
