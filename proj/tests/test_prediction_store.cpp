#include <catch2/catch_amalgamated.hpp>

#include "uqeval/manifest.hpp"
#include "uqeval/prediction_store.hpp"

#include <random>

using namespace uqeval;
using Catch::Matchers::ContainsSubstring;

namespace {

const std::string kManifestHeader = "Image Index,Finding Labels,Patient ID\n";

ClassCatalog small_catalog() {
    return ClassCatalog({"Atelectasis", "Effusion", "Mass"});
}

} // namespace

TEST_CASE("catalog rejects duplicates and empty names") {
    CHECK_THROWS_AS(ClassCatalog({"A", "A"}), validation_error);
    CHECK_THROWS_AS(ClassCatalog({"A", ""}), validation_error);
    CHECK_THROWS_AS(ClassCatalog({}), validation_error);
    CHECK(ClassCatalog::nih_chest14().size() == 14);
    CHECK(ClassCatalog::nih_chest14().name(0) == "Atelectasis");
    CHECK(ClassCatalog::nih_chest14().name(13) == "Pneumothorax");
}

TEST_CASE("manifest parses pipe-delimited findings") {
    const auto manifest = parse_nih_manifest(
        kManifestHeader + "img1.png,Atelectasis|Effusion,P1\n", small_catalog());
    REQUIRE(manifest.size() == 1);
    CHECK(manifest.entries[0].image_id == "img1.png");
    CHECK(manifest.entries[0].patient_id == "P1");
    CHECK(manifest.entries[0].labels == std::vector<std::uint8_t>{1, 1, 0});
}

TEST_CASE("No Finding encodes as the all-zero vector") {
    const auto manifest = parse_nih_manifest(
        kManifestHeader + "img1.png,No Finding,P1\n", small_catalog());
    CHECK(manifest.entries[0].labels == std::vector<std::uint8_t>{0, 0, 0});
}

TEST_CASE("manifest tolerates the full NIH column layout and underscores") {
    const std::string text =
        "Image Index,Finding Labels,Follow-up #,Patient ID,Patient Age\n"
        "a.png,Pleural_Thickening,0,P3,45\n";
    const auto manifest = parse_nih_manifest(text, ClassCatalog::nih_chest14());
    REQUIRE(manifest.size() == 1);
    CHECK(manifest.entries[0].labels[11] == 1); // Pleural Thickening
    CHECK(manifest.entries[0].patient_id == "P3");
}

TEST_CASE("manifest rejects duplicates, unknown tokens, missing columns") {
    CHECK_THROWS_WITH(
        parse_nih_manifest(kManifestHeader + "a.png,Mass,P1\nb.png,Mass,P2\n" +
                               "a.png,Effusion,P3\n",
                           small_catalog()),
        ContainsSubstring("a.png"));
    CHECK_THROWS_WITH(parse_nih_manifest(kManifestHeader + "a.png,Blorbus,P1\n",
                                         small_catalog()),
                      ContainsSubstring("Blorbus") && ContainsSubstring("2"));
    CHECK_THROWS_WITH(
        parse_nih_manifest("Image Index,Finding Labels\na.png,Mass\n", small_catalog()),
        ContainsSubstring("patient-id"));
    CHECK_THROWS_AS(parse_nih_manifest(kManifestHeader, small_catalog()),
                    validation_error);
}

namespace {

std::string member_text(const std::vector<std::pair<std::string, std::vector<double>>>& rows) {
    std::string text = "image_id,Atelectasis,Effusion,Mass\n";
    for (const auto& [id, values] : rows) {
        text += id;
        for (double v : values) text += "," + csv::format_full(v);
        text += "\n";
    }
    return text;
}

DatasetManifest two_row_manifest() {
    return parse_nih_manifest(
        kManifestHeader + "a.png,Mass,P1\nb.png,No Finding,P2\n", small_catalog());
}

} // namespace

TEST_CASE("load_predictions performs an identity load") {
    const auto manifest = parse_nih_manifest(kManifestHeader + "a.png,Mass,P1\n",
                                             small_catalog());
    const auto tensor = load_predictions(
        {{"m0", member_text({{"a.png", {0.2, 0.8, 0.5}}})}}, manifest, small_catalog());
    CHECK(tensor.n_samples() == 1);
    CHECK(tensor.n_members() == 1);
    CHECK(tensor.at(0, 0, 0) == 0.2);
    CHECK(tensor.at(0, 1, 0) == 0.8);
    CHECK(tensor.at(0, 2, 0) == 0.5);
}

TEST_CASE("load_predictions rejects out-of-range values with coordinates") {
    CHECK_THROWS_WITH(
        load_predictions({{"m7", member_text({{"a.png", {0.2, 1.3, 0.5}},
                                              {"b.png", {0.1, 0.2, 0.3}}})}},
                         two_row_manifest(), small_catalog()),
        ContainsSubstring("m7") && ContainsSubstring("Effusion") &&
            ContainsSubstring("1.3"));
    CHECK_THROWS_WITH(
        load_predictions({{"m0", "image_id,Atelectasis,Effusion,Mass\n"
                                 "a.png,0.1,nan,0.2\nb.png,0.1,0.1,0.1\n"}},
                         two_row_manifest(), small_catalog()),
        ContainsSubstring("NaN"));
}

TEST_CASE("load_predictions rejects member/manifest misalignment") {
    CHECK_THROWS_WITH(
        load_predictions({{"m0", member_text({{"a.png", {0.1, 0.1, 0.1}},
                                              {"c.png", {0.1, 0.1, 0.1}}})}},
                         two_row_manifest(), small_catalog()),
        ContainsSubstring("missing image id"));
    // two members with disjoint id sets cannot both match the manifest
    CHECK_THROWS_AS(
        load_predictions({{"m0", member_text({{"a.png", {0.1, 0.1, 0.1}},
                                              {"b.png", {0.1, 0.1, 0.1}}})},
                          {"m1", member_text({{"c.png", {0.1, 0.1, 0.1}},
                                              {"d.png", {0.1, 0.1, 0.1}}})}},
                         two_row_manifest(), small_catalog()),
        validation_error);
    CHECK_THROWS_WITH(
        load_predictions({{"m0", "image_id,Wrong,Effusion,Mass\na.png,0.1,0.1,0.1\n"}},
                         two_row_manifest(), small_catalog()),
        ContainsSubstring("Atelectasis"));
}

TEST_CASE("rows are canonicalized to manifest order") {
    const auto tensor = load_predictions(
        {{"m0", member_text({{"b.png", {0.4, 0.5, 0.6}}, {"a.png", {0.1, 0.2, 0.3}}})}},
        two_row_manifest(), small_catalog());
    CHECK(tensor.image_ids() == std::vector<std::string>{"a.png", "b.png"});
    CHECK(tensor.at(0, 0, 0) == 0.1);
    CHECK(tensor.at(1, 0, 0) == 0.4);
}

TEST_CASE("member_slice round-trips the source file bit-exactly") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<std::pair<std::string, std::vector<double>>> rows0, rows1;
    for (int i = 0; i < 25; ++i) {
        const std::string id = "img" + std::to_string(i) + ".png";
        rows0.push_back({id, {dist(gen), dist(gen), dist(gen)}});
        rows1.push_back({id, {dist(gen), dist(gen), dist(gen)}});
    }
    std::string manifest_text = kManifestHeader;
    for (int i = 0; i < 25; ++i)
        manifest_text += "img" + std::to_string(i) + ".png,No Finding,P" +
                         std::to_string(i) + "\n";
    const auto manifest = parse_nih_manifest(manifest_text, small_catalog());
    const std::string text1 = member_text(rows1);
    const auto tensor = load_predictions({{"m0", member_text(rows0)}, {"m1", text1}},
                                         manifest, small_catalog());

    // independent re-parse of the second file
    const auto lines = csv::split_lines(text1);
    const Matrix slice = tensor.member_slice(1);
    for (std::size_t row = 1; row < lines.size(); ++row) {
        const auto fields = csv::split_record(lines[row]);
        for (std::size_t k = 0; k < 3; ++k) {
            const double expected = std::stod(fields[k + 1]);
            CHECK(slice.at(row - 1, k) == expected);
        }
    }
    CHECK_THROWS_AS(tensor.member_slice(2), validation_error);

    SECTION("M=1 slice is the whole matrix") {
        const auto single = load_predictions({{"only", text1}}, manifest, small_catalog());
        const Matrix whole = single.member_slice(0);
        for (std::size_t n = 0; n < single.n_samples(); ++n)
            for (std::size_t k = 0; k < 3; ++k)
                CHECK(whole.at(n, k) == single.at(n, k, 0));
    }
}

TEST_CASE("UQPM binary round trip preserves float32 values") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> values(4 * 3 * 2);
    for (auto& v : values) v = static_cast<double>(static_cast<float>(dist(gen)));
    const PredictionTensor tensor(
        4, 3, {"alpha", "beta"}, {"i0", "i1", "i2", "i3"}, values);

    const std::string bytes = encode_uqpm(tensor);
    REQUIRE(looks_like_uqpm(bytes));
    const auto decoded = decode_uqpm(bytes);
    CHECK(decoded.member_ids() == tensor.member_ids());
    CHECK(decoded.image_ids() == tensor.image_ids());
    CHECK(decoded.values() == tensor.values()); // values pre-quantized to f32
    CHECK(encode_uqpm(decoded) == bytes);

    CHECK_THROWS_AS(decode_uqpm("NOPE"), validation_error);
    CHECK_THROWS_AS(decode_uqpm(bytes.substr(0, bytes.size() - 3)), validation_error);
}

TEST_CASE("align_to_manifest reorders and validates ids") {
    const PredictionTensor tensor(2, 3, {"m"}, {"b.png", "a.png"},
                                  {0.4, 0.5, 0.6, 0.1, 0.2, 0.3});
    const auto aligned = align_to_manifest(tensor, two_row_manifest());
    CHECK(aligned.image_ids() == std::vector<std::string>{"a.png", "b.png"});
    CHECK(aligned.at(0, 0, 0) == 0.1);
    CHECK(aligned.at(1, 2, 0) == 0.6);

    const PredictionTensor stranger(2, 3, {"m"}, {"x.png", "a.png"},
                                    {0.4, 0.5, 0.6, 0.1, 0.2, 0.3});
    CHECK_THROWS_AS(align_to_manifest(stranger, two_row_manifest()), validation_error);
}

TEST_CASE("tensor constructor enforces invariants") {
    CHECK_THROWS_AS(PredictionTensor(1, 1, {"a", "a"}, {"i"}, {0.5, 0.5}),
                    validation_error);
    CHECK_THROWS_AS(PredictionTensor(1, 1, {"a"}, {"i"}, {1.5}), validation_error);
    CHECK_THROWS_AS(PredictionTensor(1, 1, {}, {"i"}, {}), validation_error);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(PredictionTensor(1, 1, {"a"}, {"i"}, {nan}), validation_error);
}

TEST_CASE("label matrix rows align with manifest order") {
    const auto manifest = two_row_manifest();
    const auto labels = manifest.label_matrix();
    REQUIRE(labels.rows == 2);
    REQUIRE(labels.cols == 3);
    CHECK(labels.at(0, 2) == 1); // a.png carries Mass
    CHECK(labels.at(1, 2) == 0);
}
