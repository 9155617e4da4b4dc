#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "learner_internal.hpp"

namespace tunedp {

std::size_t where_min_leaf_size(std::size_t n, double min_size) {
    const double m = std::pow(static_cast<double>(n), min_size);
    return static_cast<std::size_t>(std::ceil(m - 1e-9));
}

namespace {

using detail::draw_index;

// Squared Euclidean distance over the node's min-max-normalized metrics;
// attributes constant within the node are skipped.
struct NodeScale {
    std::array<double, kNumAttributes> lo{};
    std::array<double, kNumAttributes> inv{}; // 1/(hi-lo), 0 when constant

    NodeScale(const Release& data, const std::vector<int>& rows) {
        std::array<double, kNumAttributes> hi{};
        lo.fill(std::numeric_limits<double>::infinity());
        hi.fill(-std::numeric_limits<double>::infinity());
        for (int r : rows) {
            const auto& m = data.instances[r].metrics;
            for (std::size_t a = 0; a < kNumAttributes; ++a) {
                lo[a] = std::min(lo[a], m[a]);
                hi[a] = std::max(hi[a], m[a]);
            }
        }
        for (std::size_t a = 0; a < kNumAttributes; ++a) {
            inv[a] = hi[a] > lo[a] ? 1.0 / (hi[a] - lo[a]) : 0.0;
        }
    }

    double dist2(const Instance& x, const Instance& y) const {
        double d2 = 0.0;
        for (std::size_t a = 0; a < kNumAttributes; ++a) {
            const double d = (x.metrics[a] - y.metrics[a]) * inv[a];
            d2 += d * d;
        }
        return d2;
    }
};

double defect_rate(const Release& data, const std::vector<int>& rows) {
    int defective = 0;
    for (int r : rows) defective += data.instances[r].label ? 1 : 0;
    return static_cast<double>(defective) / static_cast<double>(rows.size());
}

struct ClusterBuilder {
    const Release& data;
    std::size_t m;
    int depth_min, depth_max;
    double wriggle;
    std::mt19937_64 rng;

    std::vector<ClusterNode> nodes;
    std::vector<std::vector<int>> rows_of;

    int build(std::vector<int> rows, int depth) {
        const int id = static_cast<int>(nodes.size());
        ClusterNode node;
        node.count = static_cast<int>(rows.size());
        node.defect_rate = defect_rate(data, rows);
        nodes.push_back(node);
        rows_of.push_back(rows);

        if (rows.size() <= m || depth >= depth_max) return id;

        const NodeScale scale(data, rows);
        auto farthest_from = [&](int pivot) {
            int best = rows.front();
            double best_d = -1.0;
            for (int r : rows) {
                const double d = scale.dist2(data.instances[pivot],
                                             data.instances[r]);
                if (d > best_d) {
                    best_d = d;
                    best = r;
                }
            }
            return best;
        };

        const int z = rows[draw_index(rng, rows.size())];
        const int east = farthest_from(z);
        const int west = farthest_from(east);
        const double d2_ew =
            scale.dist2(data.instances[east], data.instances[west]);
        if (d2_ew <= 0.0) return id; // identical points, nothing to project

        const double d_ew = std::sqrt(d2_ew);
        std::vector<double> proj(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& inst = data.instances[rows[i]];
            const double de2 = scale.dist2(inst, data.instances[east]);
            const double dw2 = scale.dist2(inst, data.instances[west]);
            proj[i] = (de2 + d2_ew - dw2) / (2.0 * d_ew);
        }
        std::vector<int> perm(rows.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::stable_sort(perm.begin(), perm.end(),
                         [&](int i, int j) { return proj[i] < proj[j]; });

        const std::size_t n_left = (rows.size() + 1) / 2; // halves differ <= 1
        std::vector<int> left_rows, right_rows;
        left_rows.reserve(n_left);
        right_rows.reserve(rows.size() - n_left);
        for (std::size_t i = 0; i < perm.size(); ++i) {
            (i < n_left ? left_rows : right_rows).push_back(rows[perm[i]]);
        }

        if (depth >= depth_min) {
            const double gap = std::abs(defect_rate(data, left_rows) -
                                        defect_rate(data, right_rows));
            if (gap <= wriggle) return id; // split too timid to keep
        }

        rows.clear();
        rows.shrink_to_fit();
        const int left = build(std::move(left_rows), depth + 1);
        const int right = build(std::move(right_rows), depth + 1);
        nodes[id].left = left;
        nodes[id].right = right;
        return id;
    }

    // Collapses any split whose halves' defect rates sit within wriggle.
    void prune(int id) {
        ClusterNode& node = nodes[id];
        if (node.is_leaf()) return;
        prune(node.left);
        prune(node.right);
        const double gap =
            std::abs(nodes[node.left].defect_rate - nodes[node.right].defect_rate);
        if (gap <= wriggle) {
            node.left = -1;
            node.right = -1;
        }
    }
};

// Rebuilds the node pool keeping only nodes reachable from the root, in
// preorder, so pruned subtrees do not linger in the serialized model.
void compact_cluster_tree(std::vector<ClusterNode>& nodes,
                          std::vector<std::vector<int>>& rows_of) {
    std::vector<ClusterNode> out_nodes;
    std::vector<std::vector<int>> out_rows;
    const std::function<int(int)> copy = [&](int id) {
        const int nid = static_cast<int>(out_nodes.size());
        out_nodes.push_back(nodes[id]);
        out_rows.push_back(std::move(rows_of[id]));
        if (!nodes[id].is_leaf()) {
            const int l = copy(nodes[id].left);
            const int r = copy(nodes[id].right);
            out_nodes[nid].left = l;
            out_nodes[nid].right = r;
        }
        return nid;
    };
    copy(0);
    nodes = std::move(out_nodes);
    rows_of = std::move(out_rows);
}

} // namespace

ClusterTree where_cluster_tree(const Release& data, const Config& config,
                               std::uint64_t seed) {
    if (data.instances.empty()) {
        throw std::invalid_argument("where_cluster_tree: empty data");
    }
    ClusterBuilder b{data,
                     where_min_leaf_size(data.size(), config.at("min_Size")),
                     static_cast<int>(config.at("depthMin")),
                     static_cast<int>(config.at("depthMax")),
                     config.at("wriggle"),
                     std::mt19937_64(seed),
                     {},
                     {}};
    std::vector<int> all(data.size());
    std::iota(all.begin(), all.end(), 0);
    b.build(std::move(all), 0);
    if (config.flag("wherePrune")) b.prune(0);
    compact_cluster_tree(b.nodes, b.rows_of);

    ClusterTree tree;
    tree.nodes = std::move(b.nodes);
    tree.leaf_of_row.assign(data.size(), -1);
    for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
        if (!tree.nodes[id].is_leaf()) continue;
        tree.nodes[id].cluster_id = tree.n_clusters++;
        for (int r : b.rows_of[id]) {
            tree.leaf_of_row[r] = tree.nodes[id].cluster_id;
        }
    }
    return tree;
}

namespace {

double entropy(const std::vector<int>& counts, int total) {
    if (total == 0) return 0.0;
    double h = 0.0;
    for (int c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / total;
        h -= p * std::log2(p);
    }
    return h;
}

struct GainSearch {
    double gain = -1.0;
    double cut = 0.0;
};

// Best binary entropy cut of one attribute against the cluster labels.
GainSearch best_entropy_cut(const Release& data, const std::vector<int>& labels,
                    int n_clusters, const std::vector<int>& rows,
                    std::size_t attr) {
    std::vector<int> idx(rows);
    std::sort(idx.begin(), idx.end(), [&](int i, int j) {
        const double a = data.instances[i].metrics[attr];
        const double b = data.instances[j].metrics[attr];
        return a < b || (a == b && i < j);
    });

    std::vector<int> total_counts(n_clusters, 0);
    for (int r : idx) ++total_counts[labels[r]];
    const int n = static_cast<int>(idx.size());
    const double h_all = entropy(total_counts, n);

    GainSearch best;
    best.gain = -1.0;
    std::vector<int> left_counts(n_clusters, 0);
    std::vector<int> right_counts(total_counts);
    for (int i = 0; i + 1 < n; ++i) {
        const int lab = labels[idx[i]];
        ++left_counts[lab];
        --right_counts[lab];
        const double v = data.instances[idx[i]].metrics[attr];
        const double nv = data.instances[idx[i + 1]].metrics[attr];
        if (v == nv) continue;
        const int nl = i + 1;
        const int nr = n - nl;
        const double h = (nl * entropy(left_counts, nl) +
                          nr * entropy(right_counts, nr)) /
                         n;
        const double gain = h_all - h;
        if (gain > best.gain) {
            best.gain = gain;
            best.cut = (v + nv) / 2.0;
        }
    }
    return best;
}

struct DecisionBuilder {
    const Release& data;
    const std::vector<int>& labels;
    int n_clusters;
    int min_sample_split;
    std::vector<std::size_t> eligible; // ascending attribute index

    Tree tree;

    int majority_of(const std::vector<int>& rows) const {
        std::vector<int> counts(n_clusters, 0);
        for (int r : rows) ++counts[labels[r]];
        return static_cast<int>(
            std::max_element(counts.begin(), counts.end()) - counts.begin());
    }

    int build(const std::vector<int>& rows) {
        const int id = static_cast<int>(tree.nodes.size());
        TreeNode node;
        node.count = static_cast<int>(rows.size());
        int defective = 0;
        for (int r : rows) defective += data.instances[r].label ? 1 : 0;
        node.fraction = static_cast<double>(defective) / rows.size();
        node.majority = majority_of(rows);
        tree.nodes.push_back(node);

        if (static_cast<int>(rows.size()) <= min_sample_split) return id;

        double best_gain = 0.0;
        int best_attr = -1;
        double best_cut = 0.0;
        for (std::size_t a : eligible) {
            const GainSearch g = best_entropy_cut(data, labels, n_clusters, rows, a);
            if (g.gain > best_gain) {
                best_gain = g.gain;
                best_attr = static_cast<int>(a);
                best_cut = g.cut;
            }
        }
        if (best_attr < 0) return id; // no cut improves on the node's entropy

        std::vector<int> left_rows, right_rows;
        for (int r : rows) {
            (data.instances[r].metrics[best_attr] <= best_cut ? left_rows
                                                              : right_rows)
                .push_back(r);
        }
        const int left = build(left_rows);
        const int right = build(right_rows);
        tree.nodes[id].attribute = best_attr;
        tree.nodes[id].cut = best_cut;
        tree.nodes[id].left = left;
        tree.nodes[id].right = right;
        return id;
    }

    // A child subtree that predicts its parent's majority cluster carries
    // no extra information; collapse it to a leaf.
    void prune(int id) {
        TreeNode& node = tree.nodes[id];
        if (node.attribute < 0) return;
        prune(node.left);
        prune(node.right);
        for (int child : {node.left, node.right}) {
            TreeNode& c = tree.nodes[child];
            if (c.attribute >= 0 && c.majority == node.majority) {
                c.attribute = -1;
                c.left = -1;
                c.right = -1;
            }
        }
    }
};

void compact_tree(Tree& tree) {
    Tree out;
    const std::function<int(int)> copy = [&](int id) {
        const int nid = static_cast<int>(out.nodes.size());
        out.nodes.push_back(tree.nodes[id]);
        if (tree.nodes[id].attribute >= 0) {
            const int l = copy(tree.nodes[id].left);
            const int r = copy(tree.nodes[id].right);
            out.nodes[nid].left = l;
            out.nodes[nid].right = r;
        }
        return nid;
    };
    copy(0);
    tree = std::move(out);
}

std::size_t eligible_attribute_count(double info_prune) {
    const auto k = static_cast<std::size_t>(
        std::ceil(info_prune * kNumAttributes - 1e-9));
    return std::clamp<std::size_t>(k, 1, kNumAttributes);
}

} // namespace

std::vector<std::size_t> where_rank_attributes(const ClusterTree& clusters,
                                               const Release& data) {
    std::vector<int> all(data.size());
    std::iota(all.begin(), all.end(), 0);
    std::vector<double> gains(kNumAttributes, 0.0);
    for (std::size_t a = 0; a < kNumAttributes; ++a) {
        const GainSearch g = best_entropy_cut(data, clusters.leaf_of_row,
                                      clusters.n_clusters, all, a);
        gains[a] = std::max(0.0, g.gain);
    }
    std::vector<std::size_t> ranked(kNumAttributes);
    std::iota(ranked.begin(), ranked.end(), 0);
    std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t i, std::size_t j) {
        return gains[i] > gains[j]; // ties keep name order
    });
    return ranked;
}

Tree where_decision_tree(const ClusterTree& clusters, const Release& data,
                         const Config& config) {
    const auto ranked = where_rank_attributes(clusters, data);
    std::vector<std::size_t> eligible(
        ranked.begin(),
        ranked.begin() + eligible_attribute_count(config.at("infoPrune")));
    std::sort(eligible.begin(), eligible.end());

    DecisionBuilder b{data, clusters.leaf_of_row, clusters.n_clusters,
                      static_cast<int>(config.at("min_sample_split")),
                      std::move(eligible),
                      {}};
    std::vector<int> all(data.size());
    std::iota(all.begin(), all.end(), 0);
    b.build(all);
    if (config.flag("treePrune")) b.prune(0);
    compact_tree(b.tree);
    return b.tree;
}

namespace detail {

WhereModel train_where(const Config& config, const Release& data,
                       std::uint64_t seed) {
    WhereModel model;
    model.clusters = where_cluster_tree(data, config, seed);
    model.ranked_attributes = where_rank_attributes(model.clusters, data);
    model.eligible_count = eligible_attribute_count(config.at("infoPrune"));
    model.decision = where_decision_tree(model.clusters, data, config);
    return model;
}

} // namespace detail

} // namespace tunedp
