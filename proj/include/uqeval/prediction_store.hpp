#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "uqeval/class_catalog.hpp"
#include "uqeval/csv.hpp"
#include "uqeval/errors.hpp"
#include "uqeval/manifest.hpp"
#include "uqeval/matrix.hpp"

namespace uqeval {

/// Per-sample, per-class, per-member predicted probabilities. Immutable after
/// construction; values are laid out in (sample, class, member) order. Row
/// order always equals the order of the manifest the tensor was aligned with.
class PredictionTensor {
public:
    PredictionTensor(std::size_t n_samples, std::size_t n_classes,
                     std::vector<std::string> member_ids,
                     std::vector<std::string> image_ids,
                     std::vector<double> values)
        : n_(n_samples),
          k_(n_classes),
          m_(member_ids.size()),
          member_ids_(std::move(member_ids)),
          image_ids_(std::move(image_ids)),
          values_(std::move(values)) {
        if (m_ == 0) throw validation_error("prediction tensor needs at least one member");
        if (n_ == 0) throw validation_error("prediction tensor needs at least one sample");
        if (k_ == 0) throw validation_error("prediction tensor needs at least one class");
        if (image_ids_.size() != n_)
            throw validation_error("image id count does not match sample count");
        if (values_.size() != n_ * k_ * m_)
            throw validation_error("value buffer does not match tensor dimensions");
        for (std::size_t i = 0; i < member_ids_.size(); ++i)
            for (std::size_t j = i + 1; j < member_ids_.size(); ++j)
                if (member_ids_[i] == member_ids_[j])
                    throw validation_error("duplicate member id '" + member_ids_[i] + "'");
        for (std::size_t n = 0; n < n_; ++n)
            for (std::size_t k = 0; k < k_; ++k)
                for (std::size_t m = 0; m < m_; ++m) {
                    const double v = at(n, k, m);
                    if (std::isnan(v))
                        throw validation_error("NaN probability at " + coords(n, k, m));
                    if (v < 0.0 || v > 1.0)
                        throw validation_error("probability " + csv::format_full(v) +
                                               " out of [0,1] at " + coords(n, k, m));
                }
    }

    std::size_t n_samples() const { return n_; }
    std::size_t n_classes() const { return k_; }
    std::size_t n_members() const { return m_; }
    const std::vector<std::string>& member_ids() const { return member_ids_; }
    const std::vector<std::string>& image_ids() const { return image_ids_; }
    const std::vector<double>& values() const { return values_; }

    double at(std::size_t n, std::size_t k, std::size_t m) const {
        return values_[(n * k_ + k) * m_ + m];
    }

    /// One member's N x K probability matrix.
    Matrix member_slice(std::size_t m) const {
        if (m >= m_)
            throw validation_error("member index " + std::to_string(m) +
                                   " out of range (M=" + std::to_string(m_) + ")");
        Matrix out(n_, k_);
        for (std::size_t n = 0; n < n_; ++n)
            for (std::size_t k = 0; k < k_; ++k) out.at(n, k) = at(n, k, m);
        return out;
    }

private:
    std::string coords(std::size_t n, std::size_t k, std::size_t m) const {
        return "(sample " + image_ids_[n] + ", class " + std::to_string(k) +
               ", member " + member_ids_[m] + ")";
    }

    std::size_t n_, k_, m_;
    std::vector<std::string> member_ids_;
    std::vector<std::string> image_ids_;
    std::vector<double> values_;
};

/// One member's predictions as parsed text, before alignment.
struct MemberFile {
    std::string member_id;
    std::string csv_text;
};

namespace detail {

struct ParsedMember {
    std::vector<std::string> image_ids;
    std::vector<double> values; // row-major N x K
};

inline ParsedMember parse_member_csv(const std::string& text,
                                     const ClassCatalog& catalog,
                                     const std::string& member_id) {
    const auto lines = csv::split_lines(text);
    if (lines.empty())
        throw validation_error("member '" + member_id + "' file is empty");
    const auto header = csv::split_record(lines[0]);
    if (header.size() != catalog.size() + 1 || csv::trim(header[0]) != "image_id")
        throw validation_error("member '" + member_id +
                               "' header must be image_id,<class...> with " +
                               std::to_string(catalog.size()) + " classes");
    for (std::size_t k = 0; k < catalog.size(); ++k)
        if (csv::trim(header[k + 1]) != catalog.name(k))
            throw validation_error("member '" + member_id + "' column " +
                                   std::to_string(k + 2) + " is '" +
                                   csv::trim(header[k + 1]) + "', expected '" +
                                   catalog.name(k) + "'");

    ParsedMember parsed;
    for (std::size_t row = 1; row < lines.size(); ++row) {
        if (lines[row].empty()) continue;
        const auto fields = csv::split_record(lines[row]);
        if (fields.size() != catalog.size() + 1)
            throw validation_error("member '" + member_id + "' row " +
                                   std::to_string(row + 1) + " has " +
                                   std::to_string(fields.size()) + " fields");
        parsed.image_ids.push_back(csv::trim(fields[0]));
        for (std::size_t k = 0; k < catalog.size(); ++k) {
            const std::string where = "(member " + member_id + ", row " +
                                      std::to_string(row + 1) + ", column " +
                                      catalog.name(k) + ")";
            const double v = csv::parse_double(fields[k + 1], where);
            if (std::isnan(v)) throw validation_error("NaN probability " + where);
            if (v < 0.0 || v > 1.0)
                throw validation_error("probability " + csv::format_full(v) +
                                       " out of [0,1] " + where);
            parsed.values.push_back(v);
        }
    }
    if (parsed.image_ids.empty())
        throw validation_error("member '" + member_id + "' has no data rows");
    return parsed;
}

} // namespace detail

/// Assembles a tensor from per-member CSV texts, reordering every member's
/// rows to manifest order. All members must cover exactly the manifest's ids.
inline PredictionTensor load_predictions(const std::vector<MemberFile>& member_files,
                                         const DatasetManifest& manifest,
                                         const ClassCatalog& catalog) {
    if (member_files.empty())
        throw validation_error("at least one member prediction file is required");
    const std::size_t n = manifest.size();
    const std::size_t k = catalog.size();
    const std::size_t m_count = member_files.size();

    std::vector<std::string> member_ids;
    member_ids.reserve(m_count);
    std::vector<double> values(n * k * m_count);

    for (std::size_t m = 0; m < m_count; ++m) {
        const auto& file = member_files[m];
        member_ids.push_back(file.member_id);
        auto parsed = detail::parse_member_csv(file.csv_text, catalog, file.member_id);

        std::unordered_map<std::string, std::size_t> row_of;
        row_of.reserve(parsed.image_ids.size());
        for (std::size_t r = 0; r < parsed.image_ids.size(); ++r)
            if (!row_of.emplace(parsed.image_ids[r], r).second)
                throw validation_error("member '" + file.member_id +
                                       "' repeats image id '" + parsed.image_ids[r] + "'");
        if (row_of.size() != n)
            throw validation_error("member '" + file.member_id + "' has " +
                                   std::to_string(row_of.size()) +
                                   " images, manifest has " + std::to_string(n));
        for (std::size_t row = 0; row < n; ++row) {
            const auto& id = manifest.entries[row].image_id;
            const auto it = row_of.find(id);
            if (it == row_of.end())
                throw validation_error("member '" + file.member_id +
                                       "' is missing image id '" + id + "'");
            for (std::size_t c = 0; c < k; ++c)
                values[(row * k + c) * m_count + m] = parsed.values[it->second * k + c];
        }
    }
    return PredictionTensor(n, k, std::move(member_ids), manifest.image_ids(),
                            std::move(values));
}

// ---------------------------------------------------------------------------
// Compact binary tensor format ("UQPM", version 1, little endian):
//   magic 'U' 'Q' 'P' 'M' | u16 version | u32 N | u32 K | u32 M |
//   M member ids, N image ids (each u32 byte length + UTF-8 bytes) |
//   N*K*M float32 values in (sample, class, member) order.
// ---------------------------------------------------------------------------

namespace detail {

inline void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
}

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8)
        out.push_back(static_cast<char>((v >> shift) & 0xff));
}

inline void put_string(std::string& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.append(s);
}

struct BinReader {
    const std::string& buf;
    std::size_t pos = 0;

    void need(std::size_t count) const {
        if (pos + count > buf.size())
            throw validation_error("truncated UQPM data");
    }
    std::uint16_t u16() {
        need(2);
        const auto* p = reinterpret_cast<const unsigned char*>(buf.data() + pos);
        pos += 2;
        return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
    }
    std::uint32_t u32() {
        need(4);
        const auto* p = reinterpret_cast<const unsigned char*>(buf.data() + pos);
        pos += 4;
        return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
               (static_cast<std::uint32_t>(p[2]) << 16) |
               (static_cast<std::uint32_t>(p[3]) << 24);
    }
    std::string str() {
        const std::uint32_t len = u32();
        need(len);
        std::string s = buf.substr(pos, len);
        pos += len;
        return s;
    }
    float f32() {
        const std::uint32_t bits = u32();
        float f;
        std::memcpy(&f, &bits, sizeof f);
        return f;
    }
};

} // namespace detail

/// Serializes a tensor to UQPM bytes. Values are narrowed to float32 by
/// format definition.
inline std::string encode_uqpm(const PredictionTensor& t) {
    std::string out;
    out.reserve(32 + t.values().size() * 4);
    out.append("UQPM");
    detail::put_u16(out, 1);
    detail::put_u32(out, static_cast<std::uint32_t>(t.n_samples()));
    detail::put_u32(out, static_cast<std::uint32_t>(t.n_classes()));
    detail::put_u32(out, static_cast<std::uint32_t>(t.n_members()));
    for (const auto& id : t.member_ids()) detail::put_string(out, id);
    for (const auto& id : t.image_ids()) detail::put_string(out, id);
    for (double v : t.values()) {
        const float f = static_cast<float>(v);
        std::uint32_t bits;
        std::memcpy(&bits, &f, sizeof bits);
        detail::put_u32(out, bits);
    }
    return out;
}

inline bool looks_like_uqpm(const std::string& bytes) {
    return bytes.size() >= 4 && bytes.compare(0, 4, "UQPM") == 0;
}

inline PredictionTensor decode_uqpm(const std::string& bytes) {
    if (!looks_like_uqpm(bytes)) throw validation_error("missing UQPM magic");
    detail::BinReader r{bytes, 4};
    const std::uint16_t version = r.u16();
    if (version != 1)
        throw validation_error("unsupported UQPM version " + std::to_string(version));
    const std::size_t n = r.u32();
    const std::size_t k = r.u32();
    const std::size_t m = r.u32();
    std::vector<std::string> member_ids(m);
    for (auto& id : member_ids) id = r.str();
    std::vector<std::string> image_ids(n);
    for (auto& id : image_ids) id = r.str();
    std::vector<double> values(n * k * m);
    for (auto& v : values) v = static_cast<double>(r.f32());
    return PredictionTensor(n, k, std::move(member_ids), std::move(image_ids),
                            std::move(values));
}

/// Loads a UQPM tensor and reorders its rows to manifest order.
inline PredictionTensor align_to_manifest(const PredictionTensor& t,
                                          const DatasetManifest& manifest) {
    if (t.n_samples() != manifest.size())
        throw validation_error("tensor has " + std::to_string(t.n_samples()) +
                               " samples, manifest has " + std::to_string(manifest.size()));
    std::unordered_map<std::string, std::size_t> row_of;
    row_of.reserve(t.n_samples());
    for (std::size_t n = 0; n < t.n_samples(); ++n) row_of.emplace(t.image_ids()[n], n);

    const std::size_t k = t.n_classes();
    const std::size_t m = t.n_members();
    std::vector<double> values(t.values().size());
    for (std::size_t row = 0; row < manifest.size(); ++row) {
        const auto it = row_of.find(manifest.entries[row].image_id);
        if (it == row_of.end())
            throw validation_error("tensor is missing image id '" +
                                   manifest.entries[row].image_id + "'");
        const std::size_t src = it->second;
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t j = 0; j < m; ++j)
                values[(row * k + c) * m + j] = t.at(src, c, j);
    }
    return PredictionTensor(t.n_samples(), k, t.member_ids(), manifest.image_ids(),
                            std::move(values));
}

/// Member matrix rendered back to the CSV layout (full precision decimals).
inline std::string member_csv(const PredictionTensor& t, std::size_t m,
                              const ClassCatalog& catalog) {
    const Matrix slice = t.member_slice(m);
    std::string out = "image_id";
    for (const auto& name : catalog.names()) out += "," + name;
    out += "\n";
    for (std::size_t n = 0; n < t.n_samples(); ++n) {
        out += t.image_ids()[n];
        for (std::size_t k = 0; k < t.n_classes(); ++k)
            out += "," + csv::format_full(slice.at(n, k));
        out += "\n";
    }
    return out;
}

} // namespace uqeval
