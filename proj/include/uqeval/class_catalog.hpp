#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "uqeval/errors.hpp"

namespace uqeval {

/// Ordered list of class labels. Class index k everywhere in the toolkit
/// refers to a position in this catalog.
class ClassCatalog {
public:
    explicit ClassCatalog(std::vector<std::string> names) : names_(std::move(names)) {
        if (names_.empty()) throw validation_error("class catalog must not be empty");
        for (const auto& name : names_) {
            if (name.empty()) throw validation_error("class names must be non-empty");
        }
        auto sorted = names_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw validation_error("class names must be unique");
    }

    /// The 14 NIH ChestX-ray14 pathologies in their conventional order.
    static ClassCatalog nih_chest14() {
        return ClassCatalog({
            "Atelectasis", "Cardiomegaly", "Consolidation", "Edema", "Effusion",
            "Emphysema", "Fibrosis", "Hernia", "Infiltration", "Mass", "Nodule",
            "Pleural Thickening", "Pneumonia", "Pneumothorax",
        });
    }

    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t k) const { return names_[k]; }
    const std::vector<std::string>& names() const { return names_; }

    /// Index lookup; treats '_' and ' ' as equivalent (the NIH label file
    /// spells "Pleural_Thickening").
    std::optional<std::size_t> find(std::string_view token) const {
        const std::string normalized = normalize(token);
        for (std::size_t k = 0; k < names_.size(); ++k) {
            if (normalize(names_[k]) == normalized) return k;
        }
        return std::nullopt;
    }

    bool operator==(const ClassCatalog& other) const { return names_ == other.names_; }

private:
    static std::string normalize(std::string_view s) {
        std::string out(s);
        std::replace(out.begin(), out.end(), '_', ' ');
        return out;
    }

    std::vector<std::string> names_;
};

} // namespace uqeval
