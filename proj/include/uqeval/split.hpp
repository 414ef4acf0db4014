#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "uqeval/errors.hpp"
#include "uqeval/manifest.hpp"
#include "uqeval/rng.hpp"

namespace uqeval {

struct SplitSpec {
    double test_patient_fraction = 0.02;
    double val_patient_fraction_of_remainder = 0.052;
    std::uint64_t seed = 0;
};

struct SplitResult {
    std::vector<std::string> train_ids;
    std::vector<std::string> val_ids;
    std::vector<std::string> test_ids;
    std::size_t train_patients = 0;
    std::size_t val_patients = 0;
    std::size_t test_patients = 0;
};

/// Partitions a manifest into train/val/test at the patient level: all images
/// of one patient land in exactly one split. Patient ids are sorted bytewise,
/// Fisher-Yates shuffled with xoshiro256**(seed), then the first
/// ceil(test_fraction * P) patients form the test set and
/// ceil(val_fraction * remainder) form validation. Image ids keep manifest
/// order within each split.
inline SplitResult patient_level_split(const DatasetManifest& manifest,
                                       const SplitSpec& spec) {
    if (!(spec.test_patient_fraction > 0.0 && spec.test_patient_fraction < 1.0))
        throw validation_error("test fraction must lie strictly in (0,1)");
    if (!(spec.val_patient_fraction_of_remainder > 0.0 &&
          spec.val_patient_fraction_of_remainder < 1.0))
        throw validation_error("validation fraction must lie strictly in (0,1)");
    if (manifest.entries.empty()) throw validation_error("manifest is empty");

    std::vector<std::string> patients;
    {
        std::unordered_map<std::string, bool> seen;
        for (const auto& e : manifest.entries)
            if (seen.emplace(e.patient_id, true).second) patients.push_back(e.patient_id);
    }
    std::sort(patients.begin(), patients.end());

    Xoshiro256ss rng(spec.seed);
    shuffle(patients, rng);

    const std::size_t total = patients.size();
    const std::size_t test_count = static_cast<std::size_t>(
        std::ceil(spec.test_patient_fraction * static_cast<double>(total)));
    const std::size_t remainder = total > test_count ? total - test_count : 0;
    const std::size_t val_count = static_cast<std::size_t>(std::ceil(
        spec.val_patient_fraction_of_remainder * static_cast<double>(remainder)));

    if (test_count == 0 || test_count >= total)
        throw validation_error("test split would be empty or consume all patients (" +
                               std::to_string(total) + " patients)");
    if (val_count == 0 || val_count >= remainder)
        throw validation_error("validation split would be empty or leave no training "
                               "patients (" + std::to_string(total) + " patients)");

    enum class Bucket : std::uint8_t { kTrain, kVal, kTest };
    std::unordered_map<std::string, Bucket> bucket_of;
    bucket_of.reserve(total);
    for (std::size_t i = 0; i < total; ++i) {
        Bucket b = Bucket::kTrain;
        if (i < test_count)
            b = Bucket::kTest;
        else if (i < test_count + val_count)
            b = Bucket::kVal;
        bucket_of.emplace(patients[i], b);
    }

    SplitResult result;
    result.test_patients = test_count;
    result.val_patients = val_count;
    result.train_patients = total - test_count - val_count;
    for (const auto& e : manifest.entries) {
        switch (bucket_of.at(e.patient_id)) {
            case Bucket::kTrain: result.train_ids.push_back(e.image_id); break;
            case Bucket::kVal: result.val_ids.push_back(e.image_id); break;
            case Bucket::kTest: result.test_ids.push_back(e.image_id); break;
        }
    }
    return result;
}

} // namespace uqeval
