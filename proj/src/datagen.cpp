#include "tunedp/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "learner_internal.hpp"
#include "tunedp/tuner.hpp"

namespace tunedp {

const std::vector<ProjectShape>& promise_release_catalog() {
    static const std::vector<ProjectShape> catalog = {
        {"ant", {{20, 125}, {40, 178}, {32, 293}, {92, 351}, {166, 745}}},
        {"camel", {{13, 339}, {216, 608}, {145, 872}, {188, 965}}},
        {"ivy", {{63, 111}, {16, 241}, {40, 352}}},
        {"jedit", {{90, 272}, {75, 306}, {79, 312}, {48, 367}, {11, 492}}},
        {"log4j", {{34, 135}, {37, 109}, {189, 205}}},
        {"lucene", {{91, 195}, {144, 247}, {203, 340}}},
        {"poi", {{141, 237}, {37, 314}, {248, 385}, {281, 442}}},
        {"synapse", {{16, 157}, {60, 222}, {86, 256}}},
        {"velocity", {{147, 196}, {142, 214}, {78, 229}}},
        {"xerces", {{77, 162}, {71, 440}, {69, 453}, {437, 588}}},
    };
    return catalog;
}

namespace {

using detail::draw_index;
using detail::draw_real;

double round_to(double v, double unit) { return std::round(v / unit) * unit; }

// Maps a uniform latent in [0,1] onto a plausible marginal for each CK
// metric: counts are skewed, ratio metrics stay in [0,1]-ish ranges.
double metric_from_latent(std::size_t attr, double u) {
    const double u2 = u * u;
    const double u3 = u2 * u;
    switch (attr) {
    case 0: return std::round(5 + 80 * u2);          // amc
    case 1: return round_to(0.5 + 3 * u, 0.01);      // avg_cc
    case 2: return std::round(15 * u3);              // ca
    case 3: return round_to(0.05 + 0.9 * u, 0.0001); // cam
    case 4: return std::round(8 * u2);               // cbm
    case 5: return std::round(1 + 25 * u2);          // cbo
    case 6: return std::round(12 * u2);              // ce
    case 7: return round_to(u, 0.0001);              // dam
    case 8: return std::round(1 + 5 * u);            // dit
    case 9: return std::round(4 * u2);               // ic
    case 10: return std::round(200 * u3);            // lcom
    case 11: return round_to(2 * u, 0.0001);         // lcom3
    case 12: return std::round(20 + 2000 * u3);      // loc
    case 13: return std::round(1 + 12 * u2);         // max_cc
    case 14: return round_to(u, 0.0001);             // mfa
    case 15: return std::round(8 * u2);              // moa
    case 16: return std::round(10 * u2 * u2);        // noc
    case 17: return std::round(1 + 25 * u2);         // npm
    case 18: return std::round(1 + 60 * u2);         // rfc
    default: return std::round(1 + 30 * u2);         // wmc
    }
}

double gaussian(std::mt19937_64& rng) {
    const double u1 = 1.0 - draw_real(rng, 0.0, 1.0);
    const double u2 = draw_real(rng, 0.0, 1.0);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
}

} // namespace

std::vector<Release> generate_project(const ProjectShape& shape,
                                      std::uint64_t seed) {
    std::mt19937_64 rng(seed);

    // A fixed per-project signal: a handful of informative metrics whose
    // latent values drive the defect risk of every release.
    const std::size_t k_informative = 4 + draw_index(rng, 4);
    std::vector<std::size_t> attrs(kNumAttributes);
    std::iota(attrs.begin(), attrs.end(), 0);
    for (std::size_t i = 0; i < k_informative; ++i) {
        const std::size_t j = i + draw_index(rng, attrs.size() - i);
        std::swap(attrs[i], attrs[j]);
    }
    attrs.resize(k_informative);
    std::vector<double> weights(k_informative);
    double var_signal = 0.0;
    for (auto& w : weights) {
        w = 0.5 + draw_real(rng, 0.0, 1.0);
        var_signal += w * w / 12.0; // variance of w * U(0,1)
    }
    const double noise_sd = 0.30 * std::sqrt(var_signal);

    std::vector<Release> releases;
    for (std::size_t r = 0; r < shape.releases.size(); ++r) {
        const int total = shape.releases[r].total;
        const int defective = shape.releases[r].defective;

        Release release;
        release.project = shape.name;
        release.version_index = static_cast<int>(r);
        release.version_label = "r" + std::to_string(r);
        release.instances.resize(total);

        std::vector<double> risk(total, 0.0);
        for (int i = 0; i < total; ++i) {
            Instance& inst = release.instances[i];
            std::array<double, kNumAttributes> latent{};
            for (std::size_t a = 0; a < kNumAttributes; ++a) {
                latent[a] = draw_real(rng, 0.0, 1.0);
                inst.metrics[a] = metric_from_latent(a, latent[a]);
            }
            for (std::size_t j = 0; j < k_informative; ++j) {
                risk[i] += weights[j] * latent[attrs[j]];
            }
            risk[i] += noise_sd * gaussian(rng);
            inst.name = shape.name + ".C" + std::to_string(r) + "_" +
                        std::to_string(i);
        }

        // The `defective` riskiest classes carry the release's defects.
        std::vector<int> ranked(total);
        std::iota(ranked.begin(), ranked.end(), 0);
        std::sort(ranked.begin(), ranked.end(), [&](int a, int b) {
            return risk[a] > risk[b] || (risk[a] == risk[b] && a < b);
        });
        for (int p = 0; p < defective; ++p) {
            Instance& inst = release.instances[ranked[p]];
            inst.defect_count = 1;
            if (p < defective / 3) {
                inst.defect_count += static_cast<int>(draw_index(rng, 3));
            }
            inst.label = true;
        }
        releases.push_back(std::move(release));
    }
    return releases;
}

int generate_promise_style_data(const std::filesystem::path& out_dir,
                                std::uint64_t seed) {
    std::filesystem::create_directories(out_dir);
    int written = 0;
    std::uint64_t project_index = 0;
    for (const ProjectShape& shape : promise_release_catalog()) {
        const auto releases =
            generate_project(shape, derive_seed(seed, project_index++));
        std::ofstream manifest(out_dir / (shape.name + ".manifest"));
        if (!manifest) {
            throw std::runtime_error("cannot write manifest for " + shape.name);
        }
        for (const Release& release : releases) {
            const std::string file =
                shape.name + "-" + std::to_string(release.version_index) +
                ".csv";
            write_release_csv(release, out_dir / file);
            manifest << file << '\n';
            ++written;
        }
    }
    return written;
}

} // namespace tunedp
