#include "tunedp/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "csv_util.hpp"

namespace tunedp {

std::size_t Release::defective_count() const {
    return static_cast<std::size_t>(
        std::count_if(instances.begin(), instances.end(),
                      [](const Instance& i) { return i.label; }));
}

CsvSchema CsvSchema::promise_default() {
    CsvSchema s;
    for (auto name : kAttributeNames) {
        s.metric_columns[std::string(name)] = std::string(name);
    }
    return s;
}

CsvSchema CsvSchema::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open schema file: " + path.string());
    nlohmann::json j;
    in >> j;
    CsvSchema s = promise_default();
    if (j.contains("metric_columns")) {
        for (auto& [attr, col] : j["metric_columns"].items()) {
            if (!attribute_index(attr)) {
                throw SchemaError("schema maps unknown attribute: " + attr);
            }
            s.metric_columns[attr] = col.get<std::string>();
        }
    }
    if (j.contains("defect_column")) s.defect_column = j["defect_column"];
    if (j.contains("identifier_prefix_columns")) {
        s.identifier_prefix_columns = j["identifier_prefix_columns"];
    }
    if (j.contains("label_threshold")) s.label_threshold = j["label_threshold"];
    return s;
}

namespace {

using detail::csv_escape;
using detail::split_csv_line;

void strip_bom(std::string& s) {
    if (s.size() >= 3 && s[0] == '\xEF' && s[1] == '\xBB' && s[2] == '\xBF') {
        s.erase(0, 3);
    }
}

double parse_double(const std::string& cell, const std::string& file, int row,
                    const std::string& column) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw ParseError(file + ": row " + std::to_string(row) + ", column '" +
                         column + "': cannot parse '" + cell + "' as a number");
    }
    return value;
}

} // namespace

Release load_release(const std::filesystem::path& path, const CsvSchema& schema,
                     const std::string& project, int version_index) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());

    std::string header_line;
    if (!std::getline(in, header_line) || header_line.empty()) {
        throw ParseError(path.string() + ": empty file");
    }
    strip_bom(header_line);
    const auto header = split_csv_line(header_line);

    auto resolve = [&](const std::string& column) -> std::size_t {
        int found = -1;
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == column) {
                if (found >= 0) {
                    throw SchemaError(path.string() + ": column '" + column +
                                      "' appears more than once");
                }
                found = static_cast<int>(i);
            }
        }
        if (found < 0) {
            throw SchemaError(path.string() + ": missing column '" + column + "'");
        }
        return static_cast<std::size_t>(found);
    };

    std::array<std::size_t, kNumAttributes> metric_col{};
    for (std::size_t a = 0; a < kNumAttributes; ++a) {
        const std::string attr(kAttributeNames[a]);
        auto it = schema.metric_columns.find(attr);
        if (it == schema.metric_columns.end()) {
            throw SchemaError("schema has no column mapping for attribute " + attr);
        }
        metric_col[a] = resolve(it->second);
    }
    const std::size_t defect_col = resolve(schema.defect_column);

    const int id_cols = schema.identifier_prefix_columns;
    const int name_col = id_cols > 0 ? id_cols - 1 : -1;
    const int version_col = id_cols > 1 ? 1 : -1;

    Release release;
    release.project = project;
    release.version_index = version_index;

    std::string line;
    int row = 1; // header was row 1
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw ParseError(path.string() + ": row " + std::to_string(row) +
                             ": expected " + std::to_string(header.size()) +
                             " fields, got " + std::to_string(fields.size()));
        }
        Instance inst;
        for (std::size_t a = 0; a < kNumAttributes; ++a) {
            inst.metrics[a] = parse_double(fields[metric_col[a]], path.string(),
                                           row, header[metric_col[a]]);
        }
        const double raw = parse_double(fields[defect_col], path.string(), row,
                                        header[defect_col]);
        if (raw < 0) {
            throw ParseError(path.string() + ": row " + std::to_string(row) +
                             ": negative defect count");
        }
        inst.defect_count = static_cast<int>(std::floor(raw));
        inst.label = inst.defect_count >= schema.label_threshold;
        if (name_col >= 0 && static_cast<std::size_t>(name_col) < fields.size()) {
            inst.name = fields[name_col];
        }
        if (release.version_label.empty() && version_col >= 0 &&
            static_cast<std::size_t>(version_col) < fields.size()) {
            release.version_label = fields[version_col];
        }
        release.instances.push_back(std::move(inst));
    }
    if (release.instances.empty()) {
        throw ParseError(path.string() + ": no data rows");
    }
    return release;
}

void write_release_csv(const Release& release, const std::filesystem::path& path) {
    // The public PROMISE CK column order.
    static constexpr std::array<std::string_view, kNumAttributes> kOrder = {
        "wmc", "dit", "noc", "cbo", "rfc", "lcom", "ca",  "ce",     "npm", "lcom3",
        "loc", "dam", "moa", "mfa", "cam", "ic",   "cbm", "amc",    "max_cc",
        "avg_cc"};

    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    out << "name,version,name";
    for (auto col : kOrder) out << ',' << col;
    out << ",bug\n";

    char buf[64];
    auto fmt = [&](double v) -> std::string {
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        (void)ec;
        return std::string(buf, ptr);
    };

    for (const auto& inst : release.instances) {
        out << csv_escape(release.project) << ','
            << csv_escape(release.version_label) << ',' << csv_escape(inst.name);
        for (auto col : kOrder) {
            out << ',' << fmt(inst.metrics[*attribute_index(col)]);
        }
        out << ',' << inst.defect_count << '\n';
    }
}

std::vector<ExperimentTriple> build_triples(const std::vector<Release>& releases) {
    if (releases.empty()) {
        throw std::invalid_argument("build_triples: no releases");
    }
    const std::string& project = releases.front().project;
    for (std::size_t i = 0; i < releases.size(); ++i) {
        if (releases[i].project != project) {
            throw std::invalid_argument("build_triples: mixed projects (" +
                                        project + " vs " + releases[i].project +
                                        ")");
        }
        if (i > 0 && releases[i].version_index <= releases[i - 1].version_index) {
            throw std::invalid_argument(
                "build_triples: releases of " + project +
                " not sorted by version_index");
        }
    }
    if (releases.size() < 3) {
        throw std::invalid_argument("build_triples: project " + project +
                                    " has fewer than 3 releases");
    }
    std::vector<ExperimentTriple> triples;
    for (std::size_t i = 0; i + 2 < releases.size(); ++i) {
        ExperimentTriple t;
        t.name = project + "V" + std::to_string(i);
        t.train = releases[i];
        t.tune = releases[i + 1];
        t.test = releases[i + 2];
        triples.push_back(std::move(t));
    }
    return triples;
}

Release merge_releases(const Release& a, const Release& b) {
    if (a.project != b.project) {
        throw std::invalid_argument("merge_releases: different projects (" +
                                    a.project + " vs " + b.project + ")");
    }
    Release merged;
    merged.project = a.project;
    merged.version_index = a.version_index;
    merged.version_label = a.version_label;
    merged.instances = a.instances;
    merged.instances.insert(merged.instances.end(), b.instances.begin(),
                            b.instances.end());
    return merged;
}

std::vector<Release> load_manifest(const std::filesystem::path& manifest_path,
                                   const CsvSchema& schema) {
    std::ifstream in(manifest_path);
    if (!in) throw ParseError("cannot open manifest " + manifest_path.string());
    const std::string project = manifest_path.stem().string();
    const auto base = manifest_path.parent_path();

    std::vector<Release> releases;
    std::string line;
    int index = 0;
    while (std::getline(in, line)) {
        strip_bom(line);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') continue;
        std::filesystem::path p(line);
        if (p.is_relative()) p = base / p;
        releases.push_back(load_release(p, schema, project, index++));
    }
    if (releases.empty()) {
        throw ParseError("manifest " + manifest_path.string() +
                         " lists no releases");
    }
    return releases;
}

std::vector<ExperimentTriple> load_manifest_dir(const std::filesystem::path& dir,
                                                const CsvSchema& schema) {
    if (!std::filesystem::is_directory(dir)) {
        throw ParseError("not a directory: " + dir.string());
    }
    std::vector<std::filesystem::path> manifests;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() == ".manifest") {
            manifests.push_back(entry.path());
        }
    }
    if (manifests.empty()) {
        throw ParseError("no *.manifest files in " + dir.string());
    }
    std::sort(manifests.begin(), manifests.end());

    std::vector<ExperimentTriple> all;
    for (const auto& m : manifests) {
        auto triples = build_triples(load_manifest(m, schema));
        all.insert(all.end(), std::make_move_iterator(triples.begin()),
                   std::make_move_iterator(triples.end()));
    }
    std::sort(all.begin(), all.end(),
              [](const ExperimentTriple& a, const ExperimentTriple& b) {
                  return a.name < b.name;
              });
    return all;
}

} // namespace tunedp
