#ifndef TUNEDP_DATAGEN_HPP
#define TUNEDP_DATAGEN_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tunedp/dataset.hpp"

namespace tunedp {

/// (defective, total) shape of one release.
struct ReleaseShape {
    int defective = 0;
    int total = 0;
};

struct ProjectShape {
    std::string name;
    std::vector<ReleaseShape> releases; // oldest first
};

/// The per-release defective/total counts of the ten-project PROMISE CK
/// corpus this toolkit evaluates on (37 releases, 17 train/tune/test
/// triples). validate-data checks ingested data against this catalog.
const std::vector<ProjectShape>& promise_release_catalog();

/// Synthesizes PROMISE-format releases for one project: plausible CK
/// metric marginals, a fixed per-project risk signal linking metrics to
/// defect counts, and exactly the requested defective/total counts per
/// release. Deterministic in (shape, seed).
std::vector<Release> generate_project(const ProjectShape& shape,
                                      std::uint64_t seed);

/// Writes CSVs plus a <project>.manifest per catalog project under
/// out_dir. Returns the number of releases written.
int generate_promise_style_data(const std::filesystem::path& out_dir,
                                std::uint64_t seed);

} // namespace tunedp

#endif
