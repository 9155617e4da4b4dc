#include <doctest.h>

#include "tunedp/datagen.hpp"
#include "tunedp/dataset.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

using namespace tunedp;
namespace fs = std::filesystem;

namespace {

// Scratch directory per test run; removed by the OS with the temp dir.
fs::path scratch_dir() {
    static fs::path dir = [] {
        auto d = fs::temp_directory_path() /
                 ("tunedp-dataset-test-" + std::to_string(std::random_device{}()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

const std::string kHeader =
    "name,version,name,wmc,dit,noc,cbo,rfc,lcom,ca,ce,npm,lcom3,loc,dam,moa,"
    "mfa,cam,ic,cbm,amc,max_cc,avg_cc,bug";

// One data row: 3 identifier fields, all 20 metrics set to `metric`,
// defect count as given.
std::string data_row(const std::string& cls, double metric,
                     const std::string& bug) {
    std::string row = "proj,1.0," + cls;
    for (int i = 0; i < 20; ++i) row += "," + std::to_string(metric);
    row += "," + bug;
    return row;
}

fs::path write_file(const std::string& name,
                    const std::vector<std::string>& lines) {
    const fs::path p = scratch_dir() / name;
    std::ofstream out(p);
    for (const auto& l : lines) out << l << "\n";
    return p;
}

Release tiny_release(const std::string& project, int version_index,
                     std::size_t rows, std::size_t defective) {
    Release r;
    r.project = project;
    r.version_index = version_index;
    for (std::size_t i = 0; i < rows; ++i) {
        Instance inst;
        for (std::size_t a = 0; a < kNumAttributes; ++a) {
            inst.metrics[a] = double(a) + double(i);
        }
        inst.defect_count = i < defective ? 1 : 0;
        inst.label = inst.defect_count >= 1;
        inst.name = "c" + std::to_string(i);
        r.instances.push_back(inst);
    }
    return r;
}

} // namespace

TEST_CASE("labels follow the defect-count threshold") {
    const auto p = write_file("labels.csv", {kHeader, data_row("a", 1, "0"),
                                             data_row("b", 2, "1"),
                                             data_row("c", 3, "5")});
    const Release r = load_release(p, CsvSchema::promise_default(), "proj", 0);
    REQUIRE(r.size() == 3);
    CHECK_FALSE(r.instances[0].label);
    CHECK(r.instances[1].label);
    CHECK(r.instances[2].label);
    CHECK(r.instances[2].defect_count == 5);
    CHECK(r.defective_count() == 2);
    CHECK(r.instances[0].name == "a");
    CHECK(r.version_label == "1.0");
}

TEST_CASE("single all-zero row loads as one clean instance") {
    const auto p = write_file("zero.csv", {kHeader, data_row("only", 0, "0")});
    const Release r = load_release(p, CsvSchema::promise_default(), "proj", 0);
    REQUIRE(r.size() == 1);
    CHECK_FALSE(r.instances[0].label);
    for (std::size_t a = 0; a < kNumAttributes; ++a) {
        CHECK(r.instances[0].metrics[a] == 0.0);
    }
}

TEST_CASE("a custom label threshold shifts the boundary") {
    const auto p = write_file("threshold.csv", {kHeader, data_row("a", 1, "1"),
                                                data_row("b", 1, "2")});
    CsvSchema schema = CsvSchema::promise_default();
    schema.label_threshold = 2;
    const Release r = load_release(p, schema, "proj", 0);
    CHECK_FALSE(r.instances[0].label);
    CHECK(r.instances[1].label);
}

TEST_CASE("fractional defect counts are floored") {
    const auto p = write_file("floored.csv", {kHeader, data_row("a", 1, "2.7"),
                                              data_row("b", 1, "0.9")});
    const Release r = load_release(p, CsvSchema::promise_default(), "proj", 0);
    CHECK(r.instances[0].defect_count == 2);
    CHECK(r.instances[1].defect_count == 0);
    CHECK_FALSE(r.instances[1].label);
}

TEST_CASE("missing and duplicated columns are schema errors") {
    std::string no_loc = kHeader;
    const auto pos = no_loc.find(",loc");
    no_loc.erase(pos, 4);
    const auto missing =
        write_file("missing.csv", {no_loc, "proj,1.0,a,1,1,1,1,1,1,1,1,1,1,1,1,"
                                           "1,1,1,1,1,1,1,0"});
    CHECK_THROWS_WITH_AS(
        load_release(missing, CsvSchema::promise_default(), "proj", 0),
        doctest::Contains("loc"), SchemaError);

    const auto dup = write_file(
        "dup.csv", {kHeader + ",wmc", data_row("a", 1, "0") + ",3"});
    CHECK_THROWS_WITH_AS(load_release(dup, CsvSchema::promise_default(), "proj", 0),
                         doctest::Contains("wmc"), SchemaError);
}

TEST_CASE("bad cells are parse errors with row and column context") {
    auto broken_row = data_row("a", 1, "0");
    const auto pos = broken_row.find(",1.000000");
    broken_row.replace(pos, 9, ",oops");
    const auto p = write_file("badcell.csv", {kHeader, data_row("ok", 1, "0"),
                                              broken_row});
    try {
        load_release(p, CsvSchema::promise_default(), "proj", 0);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        const std::string what = e.what();
        CHECK(what.find("row 3") != std::string::npos);
        CHECK(what.find("oops") != std::string::npos);
    }
}

TEST_CASE("non-finite metrics and negative defect counts are rejected") {
    const auto nan_file =
        write_file("nan.csv", {kHeader, data_row("a", 1, "0"),
                               "proj,1.0,b,nan,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,"
                               "1,1,1,0"});
    CHECK_THROWS_AS(load_release(nan_file, CsvSchema::promise_default(), "proj", 0),
                    ParseError);

    const auto neg = write_file("neg.csv", {kHeader, data_row("a", 1, "-2")});
    CHECK_THROWS_WITH_AS(load_release(neg, CsvSchema::promise_default(), "proj", 0),
                         doctest::Contains("negative"), ParseError);
}

TEST_CASE("empty and header-only files are rejected") {
    const auto empty = write_file("empty.csv", {});
    CHECK_THROWS_AS(load_release(empty, CsvSchema::promise_default(), "proj", 0),
                    ParseError);
    const auto header_only = write_file("header_only.csv", {kHeader});
    CHECK_THROWS_AS(
        load_release(header_only, CsvSchema::promise_default(), "proj", 0),
        ParseError);
    CHECK_THROWS_AS(load_release(scratch_dir() / "does-not-exist.csv",
                                 CsvSchema::promise_default(), "proj", 0),
                    ParseError);
}

TEST_CASE("quoted fields, CRLF endings and a BOM are tolerated") {
    std::ofstream out(scratch_dir() / "quoted.csv");
    out << "\xEF\xBB\xBF" << kHeader << "\r\n";
    out << "proj,1.0,\"Widget, Inc\",1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,2\r\n";
    out << "\r\n"; // trailing blank line
    out.close();
    const Release r = load_release(scratch_dir() / "quoted.csv",
                                   CsvSchema::promise_default(), "proj", 0);
    REQUIRE(r.size() == 1);
    CHECK(r.instances[0].name == "Widget, Inc");
    CHECK(r.instances[0].defect_count == 2);
}

TEST_CASE("column order does not matter: resolution is by header name") {
    // bug first, then the metrics reversed, no identifier columns.
    std::string header = "bug";
    std::string row = "7";
    for (int a = int(kNumAttributes) - 1; a >= 0; --a) {
        header += "," + std::string(kAttributeNames[std::size_t(a)]);
        row += "," + std::to_string(a * 10);
    }
    CsvSchema schema = CsvSchema::promise_default();
    schema.identifier_prefix_columns = 0;
    const auto p = write_file("reordered.csv", {header, row});
    const Release r = load_release(p, schema, "proj", 0);
    REQUIRE(r.size() == 1);
    for (std::size_t a = 0; a < kNumAttributes; ++a) {
        CHECK(r.instances[0].metrics[a] == doctest::Approx(double(a) * 10));
    }
    CHECK(r.instances[0].defect_count == 7);
}

TEST_CASE("load, re-serialize, reload is idempotent") {
    std::mt19937_64 rng(42);
    Release original = tiny_release("round", 0, 30, 9);
    for (auto& inst : original.instances) {
        for (auto& m : inst.metrics) {
            m = double(rng() % 10000) / 7.0; // awkward decimals
        }
    }
    const fs::path p1 = scratch_dir() / "round1.csv";
    const fs::path p2 = scratch_dir() / "round2.csv";
    write_release_csv(original, p1);
    const Release once = load_release(p1, CsvSchema::promise_default(), "round", 0);
    write_release_csv(once, p2);
    const Release twice = load_release(p2, CsvSchema::promise_default(), "round", 0);

    REQUIRE(once.size() == original.size());
    REQUIRE(twice.size() == original.size());
    for (std::size_t i = 0; i < original.size(); ++i) {
        for (std::size_t a = 0; a < kNumAttributes; ++a) {
            CHECK(once.instances[i].metrics[a] == original.instances[i].metrics[a]);
            CHECK(twice.instances[i].metrics[a] == once.instances[i].metrics[a]);
        }
        CHECK(once.instances[i].defect_count == original.instances[i].defect_count);
        CHECK(once.instances[i].label == original.instances[i].label);
        CHECK(twice.instances[i].name == once.instances[i].name);
    }
}

TEST_CASE("five releases give three sliding-window triples") {
    std::vector<Release> releases;
    for (int v = 0; v < 5; ++v) releases.push_back(tiny_release("ant", v, 4 + v, 1));
    const auto triples = build_triples(releases);
    REQUIRE(triples.size() == 3);
    CHECK(triples[0].name == "antV0");
    CHECK(triples[1].name == "antV1");
    CHECK(triples[2].name == "antV2");
    for (std::size_t i = 0; i < triples.size(); ++i) {
        CHECK(triples[i].train.version_index == int(i));
        CHECK(triples[i].tune.version_index == int(i) + 1);
        CHECK(triples[i].test.version_index == int(i) + 2);
    }
}

TEST_CASE("three releases give exactly one triple") {
    std::vector<Release> releases;
    for (int v = 0; v < 3; ++v) releases.push_back(tiny_release("ivy", v, 5, 2));
    const auto triples = build_triples(releases);
    REQUIRE(triples.size() == 1);
    CHECK(triples[0].name == "ivyV0");
}

TEST_CASE("adjacent triples share releases") {
    std::vector<Release> releases;
    for (int v = 0; v < 4; ++v) releases.push_back(tiny_release("poi", v, 6 + v, 2));
    const auto triples = build_triples(releases);
    REQUIRE(triples.size() == 2);
    // The sliding window: V0's tune release is V1's train release.
    CHECK(triples[0].tune.version_index == triples[1].train.version_index);
    CHECK(triples[0].tune.size() == triples[1].train.size());
    CHECK(triples[0].test.version_index == triples[1].tune.version_index);
}

TEST_CASE("build_triples rejects short, unsorted and mixed input") {
    std::vector<Release> two = {tiny_release("log4j", 0, 5, 1),
                                tiny_release("log4j", 1, 5, 1)};
    CHECK_THROWS_WITH_AS(build_triples(two), doctest::Contains("log4j"),
                         std::invalid_argument);

    std::vector<Release> unsorted = {tiny_release("a", 1, 5, 1),
                                     tiny_release("a", 0, 5, 1),
                                     tiny_release("a", 2, 5, 1)};
    CHECK_THROWS_AS(build_triples(unsorted), std::invalid_argument);

    std::vector<Release> mixed = {tiny_release("a", 0, 5, 1),
                                  tiny_release("b", 1, 5, 1),
                                  tiny_release("a", 2, 5, 1)};
    CHECK_THROWS_AS(build_triples(mixed), std::invalid_argument);
}

TEST_CASE("merging concatenates instances in order") {
    const Release a = tiny_release("ant", 0, 5, 2);
    const Release b = tiny_release("ant", 1, 7, 3);
    const Release m = merge_releases(a, b);
    REQUIRE(m.size() == 12);
    CHECK(m.defective_count() == 5);
    CHECK(m.project == "ant");
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(m.instances[i].name == a.instances[i].name);
        CHECK(m.instances[i].metrics[0] == a.instances[i].metrics[0]);
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        CHECK(m.instances[a.size() + i].metrics[0] == b.instances[i].metrics[0]);
    }
    CHECK_THROWS_AS(merge_releases(a, tiny_release("poi", 1, 3, 1)),
                    std::invalid_argument);
}

TEST_CASE("merging two singleton releases gives two instances") {
    const Release m = merge_releases(tiny_release("x", 0, 1, 0),
                                     tiny_release("x", 1, 1, 1));
    CHECK(m.size() == 2);
    CHECK(m.defective_count() == 1);
}

TEST_CASE("manifests skip comments and assign version order") {
    write_file("m_a.csv", {kHeader, data_row("a", 1, "0")});
    write_file("m_b.csv", {kHeader, data_row("b", 1, "1"), data_row("c", 2, "0")});
    const auto manifest = write_file("demo.manifest",
                                     {"# release list, oldest first", "",
                                      "m_a.csv", "   ", "m_b.csv"});
    const auto releases = load_manifest(manifest, CsvSchema::promise_default());
    REQUIRE(releases.size() == 2);
    CHECK(releases[0].project == "demo");
    CHECK(releases[0].version_index == 0);
    CHECK(releases[0].size() == 1);
    CHECK(releases[1].version_index == 1);
    CHECK(releases[1].size() == 2);

    const auto empty_manifest = write_file("empty.manifest", {"# nothing"});
    CHECK_THROWS_AS(load_manifest(empty_manifest, CsvSchema::promise_default()),
                    ParseError);
}

TEST_CASE("generated corpus ingests with exactly the cataloged shapes") {
    const fs::path dir = scratch_dir() / "corpus";
    fs::create_directories(dir);
    const int written = generate_promise_style_data(dir, 42);
    CHECK(written == 37);

    const auto triples = load_manifest_dir(dir, CsvSchema::promise_default());
    REQUIRE(triples.size() == 17);
    for (std::size_t i = 1; i < triples.size(); ++i) {
        CHECK(triples[i - 1].name < triples[i].name); // sorted by name
    }

    // Cross-check every release against the published per-release shapes.
    std::map<std::string, std::vector<ReleaseShape>> catalog;
    for (const auto& proj : promise_release_catalog()) {
        catalog[proj.name] = proj.releases;
    }
    int checked = 0;
    for (const auto& t : triples) {
        const std::string proj = t.train.project;
        REQUIRE(catalog.count(proj) == 1);
        const auto& shapes = catalog[proj];
        for (const Release* r : {&t.train, &t.tune, &t.test}) {
            const auto& want = shapes.at(std::size_t(r->version_index));
            CHECK(int(r->size()) == want.total);
            CHECK(int(r->defective_count()) == want.defective);
            ++checked;
        }
    }
    CHECK(checked == 51);

    // Deterministic generation: same seed, same bytes.
    const fs::path dir2 = scratch_dir() / "corpus2";
    fs::create_directories(dir2);
    generate_promise_style_data(dir2, 42);
    std::ifstream f1(dir / "ant-0.csv"), f2(dir2 / "ant-0.csv");
    std::string s1((std::istreambuf_iterator<char>(f1)),
                   std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)),
                   std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
    CHECK(s1.size() > 1000);
}
