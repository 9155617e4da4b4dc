#ifndef TUNEDP_DATASET_HPP
#define TUNEDP_DATASET_HPP

#include <array>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "tunedp/attributes.hpp"

namespace tunedp {

/// Header/schema problems: a required column is missing or ambiguous.
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

/// Cell-level problems, addressed by row and column.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// One class/module: 20 metric values plus its observed defect count.
/// The boolean label is derived as defect_count >= labeling threshold
/// (default 1) at load time.
struct Instance {
    std::array<double, kNumAttributes> metrics{};
    int defect_count = 0;
    bool label = false;
    std::string name; // class identifier from the file; reporting only

    double metric(std::size_t attr) const { return metrics[attr]; }
};

/// A named, ordered version of one project.
struct Release {
    std::string project;
    int version_index = 0;     // position in the manifest, oldest = 0
    std::string version_label; // version string from the file, if any
    std::vector<Instance> instances;

    std::size_t size() const { return instances.size(); }
    std::size_t defective_count() const;
};

/// Three consecutive releases: train on the first, tune on the second,
/// report test statistics on the third.
struct ExperimentTriple {
    std::string name; // e.g. "antV0"
    Release train;
    Release tune;
    Release test;
};

/// Maps the canonical attribute names onto CSV column names. The default
/// matches the public PROMISE CK files: three leading identifier columns
/// (project name, version, class name), metric columns named as the
/// attributes, and a `bug` column holding the defect count.
struct CsvSchema {
    std::map<std::string, std::string> metric_columns; // attribute -> column
    std::string defect_column = "bug";
    int identifier_prefix_columns = 3; // ignored for learning
    int label_threshold = 1;           // defect_count >= T  =>  defective

    static CsvSchema promise_default();
    static CsvSchema from_json_file(const std::filesystem::path& path);
};

/// Reads one PROMISE-format CSV into a Release. Columns are resolved by
/// header name; identifier columns are kept for reporting only. Throws
/// SchemaError / ParseError with file, row and column context.
Release load_release(const std::filesystem::path& path, const CsvSchema& schema,
                     const std::string& project, int version_index);

/// Writes a Release back out in the default PROMISE column order.
void write_release_csv(const Release& release, const std::filesystem::path& path);

/// Sliding window of consecutive releases: k releases of one project give
/// k-2 triples named projectV0..projectV(k-3).
std::vector<ExperimentTriple> build_triples(const std::vector<Release>& releases);

/// Concatenates two releases of the same project (a's instances first).
Release merge_releases(const Release& a, const Release& b);

/// A manifest is a plain-text file listing one release CSV path per line,
/// oldest first, relative to the manifest's own directory. Lines that are
/// empty or start with '#' are skipped.
std::vector<Release> load_manifest(const std::filesystem::path& manifest_path,
                                   const CsvSchema& schema);

/// Loads every "*.manifest" file in a directory (the file stem names the
/// project) and returns all triples, sorted by triple name.
std::vector<ExperimentTriple> load_manifest_dir(const std::filesystem::path& dir,
                                                const CsvSchema& schema);

} // namespace tunedp

#endif
