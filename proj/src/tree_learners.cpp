#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "learner_internal.hpp"

namespace tunedp::detail {
namespace {

// Column-major view of a release plus per-row integer weights (bootstrap
// multiplicities; all ones for plain training).
struct Columns {
    std::size_t n = 0;
    std::array<std::vector<double>, kNumAttributes> col;
    std::vector<double> y; // defect counts, the regression target
    std::vector<char> defective;
};

Columns make_columns(const Release& data) {
    Columns c;
    c.n = data.size();
    for (auto& v : c.col) v.resize(c.n);
    c.y.resize(c.n);
    c.defective.resize(c.n);
    for (std::size_t r = 0; r < c.n; ++r) {
        const Instance& inst = data.instances[r];
        for (std::size_t a = 0; a < kNumAttributes; ++a) {
            c.col[a][r] = inst.metrics[a];
        }
        c.y[r] = inst.defect_count;
        c.defective[r] = inst.label ? 1 : 0;
    }
    return c;
}

using Order = std::array<std::vector<int>, kNumAttributes>;

Order argsort_columns(const Columns& cols) {
    Order order;
    for (std::size_t a = 0; a < kNumAttributes; ++a) {
        auto& idx = order[a];
        idx.resize(cols.n);
        std::iota(idx.begin(), idx.end(), 0);
        const auto& v = cols.col[a];
        std::sort(idx.begin(), idx.end(), [&](int i, int j) {
            return v[i] < v[j] || (v[i] == v[j] && i < j);
        });
    }
    return order;
}

struct NodeStats {
    long long wn = 0; // weighted row count
    double sum = 0.0;
    double sumsq = 0.0;
    long long wdef = 0; // weighted defective count

    double variance() const {
        const double mean = sum / static_cast<double>(wn);
        return std::max(0.0, sumsq / static_cast<double>(wn) - mean * mean);
    }
    double fraction() const {
        return static_cast<double>(wdef) / static_cast<double>(wn);
    }
};

struct BuildNode {
    Order order; // node's rows, sorted per attribute
    NodeStats stats;
    int depth = 0;
    int tree_index = -1; // slot in Tree::nodes
};

NodeStats stats_of(const Columns& cols, const std::vector<int>& w,
                   const std::vector<int>& rows) {
    NodeStats s;
    for (int r : rows) {
        const double yw = w[r] * cols.y[r];
        s.wn += w[r];
        s.sum += yw;
        s.sumsq += yw * cols.y[r];
        s.wdef += cols.defective[r] ? w[r] : 0;
    }
    return s;
}

struct GrowSettings {
    int min_sample_split = 2;
    int min_samples_leaf = 1;
    int max_depth = -1;      // -1 = unlimited
    int max_leaf_nodes = -1; // -1 = unlimited
    int features_per_split = kNumAttributes;
    bool sample_per_split = false;      // forest mode
    std::vector<int> fixed_features;    // ascending; used otherwise
};

struct SplitChoice {
    bool found = false;
    int attr = -1;
    double cut = 0.0;
    double score = std::numeric_limits<double>::infinity(); // weighted sd sum / wn
    NodeStats left, right;
};

std::vector<int> sample_features(int k, std::mt19937_64& rng) {
    std::vector<int> all(kNumAttributes);
    std::iota(all.begin(), all.end(), 0);
    if (k >= static_cast<int>(kNumAttributes)) return all;
    for (int i = 0; i < k; ++i) {
        const std::size_t j = i + draw_index(rng, all.size() - i);
        std::swap(all[i], all[j]);
    }
    all.resize(k);
    std::sort(all.begin(), all.end());
    return all;
}

// Scans sorted rows once per attribute with running (count, sum, sum of
// squares); candidate cuts are midpoints between distinct consecutive
// values with at least min_samples_leaf weighted rows on each side. Best
// score wins; ties keep the earlier attribute (name order) and lower cut.
SplitChoice find_split(const Columns& cols, const std::vector<int>& w,
                       const BuildNode& node, const GrowSettings& gs,
                       const std::vector<int>& features) {
    SplitChoice best;
    const NodeStats& total = node.stats;
    const double wn = static_cast<double>(total.wn);
    for (int a : features) {
        const auto& rows = node.order[a];
        const auto& v = cols.col[a];
        NodeStats left;
        for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
            const int r = rows[i];
            const double yw = w[r] * cols.y[r];
            left.wn += w[r];
            left.sum += yw;
            left.sumsq += yw * cols.y[r];
            left.wdef += cols.defective[r] ? w[r] : 0;
            if (v[r] == v[rows[i + 1]]) continue;
            if (left.wn < gs.min_samples_leaf) continue;
            if (total.wn - left.wn < gs.min_samples_leaf) break;
            NodeStats right;
            right.wn = total.wn - left.wn;
            right.sum = total.sum - left.sum;
            right.sumsq = total.sumsq - left.sumsq;
            right.wdef = total.wdef - left.wdef;
            const double score = (left.wn * std::sqrt(left.variance()) +
                                  right.wn * std::sqrt(right.variance())) /
                                 wn;
            if (score < best.score) {
                best.found = true;
                best.attr = a;
                best.cut = (v[r] + v[rows[i + 1]]) / 2.0;
                best.score = score;
                best.left = left;
                best.right = right;
            }
        }
    }
    return best;
}

// Routes every per-attribute sorted row list into the two children,
// preserving order, so no re-sorting is ever needed.
void partition(const Columns& cols, const BuildNode& node, int attr, double cut,
               BuildNode& left, BuildNode& right) {
    const auto& sv = cols.col[attr];
    for (std::size_t a = 0; a < kNumAttributes; ++a) {
        const auto& rows = node.order[a];
        auto& lo = left.order[a];
        auto& ro = right.order[a];
        lo.reserve(rows.size());
        ro.reserve(rows.size());
        for (int r : rows) {
            (sv[r] <= cut ? lo : ro).push_back(r);
        }
    }
    left.depth = right.depth = node.depth + 1;
}

bool may_split(const BuildNode& node, const GrowSettings& gs) {
    if (node.stats.wn <= gs.min_sample_split) return false;
    if (gs.max_depth >= 0 && node.depth >= gs.max_depth) return false;
    return node.stats.variance() > 1e-12;
}

TreeNode make_leaf(const NodeStats& s) {
    TreeNode t;
    t.count = static_cast<int>(s.wn);
    t.fraction = s.fraction();
    return t;
}

// Depth-first growth (unlimited leaf count); used by CART.
void grow_depth_first(const Columns& cols, const std::vector<int>& w,
                      const GrowSettings& gs, Tree& tree, BuildNode node) {
    tree.nodes[node.tree_index] = make_leaf(node.stats);
    if (!may_split(node, gs)) return;
    const SplitChoice split = find_split(cols, w, node, gs, gs.fixed_features);
    if (!split.found) return;

    BuildNode left, right;
    partition(cols, node, split.attr, split.cut, left, right);
    left.stats = split.left;
    right.stats = split.right;
    node.order = Order{}; // release before recursing

    left.tree_index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    right.tree_index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    TreeNode& t = tree.nodes[node.tree_index];
    t.attribute = split.attr;
    t.cut = split.cut;
    t.left = left.tree_index;
    t.right = right.tree_index;

    grow_depth_first(cols, w, gs, tree, std::move(left));
    grow_depth_first(cols, w, gs, tree, std::move(right));
}

// Best-first growth under a leaf budget: the frontier split with the
// largest weighted sd reduction is applied next (ties: earliest node).
// Used by forest member trees, whose cap is max_leaf_nodes.
struct Pending {
    double gain = 0.0;
    int seq = 0;
    BuildNode node;
    SplitChoice split;
};

struct PendingWorse {
    bool operator()(const Pending& a, const Pending& b) const {
        if (a.gain != b.gain) return a.gain < b.gain;
        return a.seq > b.seq;
    }
};

void grow_best_first(const Columns& cols, const std::vector<int>& w,
                     const GrowSettings& gs, Tree& tree, BuildNode root,
                     std::mt19937_64& rng) {
    std::vector<Pending> frontier; // heap, best on top
    int seq = 0;

    auto consider = [&](BuildNode&& node) {
        tree.nodes[node.tree_index] = make_leaf(node.stats);
        if (!may_split(node, gs)) return;
        const auto features = gs.sample_per_split
                                  ? sample_features(gs.features_per_split, rng)
                                  : gs.fixed_features;
        SplitChoice split = find_split(cols, w, node, gs, features);
        if (!split.found) return;
        Pending p;
        p.gain = node.stats.wn * std::sqrt(node.stats.variance()) -
                 (split.left.wn * std::sqrt(split.left.variance()) +
                  split.right.wn * std::sqrt(split.right.variance()));
        p.seq = seq++;
        p.node = std::move(node);
        p.split = split;
        frontier.push_back(std::move(p));
        std::push_heap(frontier.begin(), frontier.end(), PendingWorse{});
    };

    int leaves = 1;
    consider(std::move(root));
    while (!frontier.empty() &&
           (gs.max_leaf_nodes < 0 || leaves < gs.max_leaf_nodes)) {
        std::pop_heap(frontier.begin(), frontier.end(), PendingWorse{});
        Pending p = std::move(frontier.back());
        frontier.pop_back();

        BuildNode left, right;
        partition(cols, p.node, p.split.attr, p.split.cut, left, right);
        left.stats = p.split.left;
        right.stats = p.split.right;
        p.node.order = Order{};

        left.tree_index = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        right.tree_index = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();

        TreeNode& t = tree.nodes[p.node.tree_index];
        t.attribute = p.split.attr;
        t.cut = p.split.cut;
        t.left = left.tree_index;
        t.right = right.tree_index;
        ++leaves;

        consider(std::move(left));
        consider(std::move(right));
    }
}

int feature_count(double max_feature) {
    const int k = static_cast<int>(
        std::ceil(max_feature * kNumAttributes - 1e-9));
    return std::clamp(k, 1, static_cast<int>(kNumAttributes));
}

BuildNode make_root(const Columns& cols, const std::vector<int>& w,
                    const Order& base_order, Tree& tree) {
    BuildNode root;
    for (std::size_t a = 0; a < kNumAttributes; ++a) {
        auto& rows = root.order[a];
        rows.reserve(cols.n);
        for (int r : base_order[a]) {
            if (w[r] > 0) rows.push_back(r);
        }
    }
    root.stats = stats_of(cols, w, root.order[0]);
    root.tree_index = 0;
    tree.nodes.emplace_back();
    return root;
}

} // namespace

CartModel train_cart(const Config& config, const Release& data,
                     std::uint64_t seed) {
    const Columns cols = make_columns(data);
    const std::vector<int> w(cols.n, 1);
    const Order base = argsort_columns(cols);
    std::mt19937_64 rng(seed);

    GrowSettings gs;
    gs.min_sample_split = static_cast<int>(config.at("min_sample_split"));
    gs.min_samples_leaf = static_cast<int>(config.at("min_samples_leaf"));
    gs.max_depth = static_cast<int>(config.at("max_depth"));
    gs.features_per_split = feature_count(config.at("max_feature"));
    gs.fixed_features = sample_features(gs.features_per_split, rng);

    CartModel model;
    grow_depth_first(cols, w, gs, model.tree,
                     make_root(cols, w, base, model.tree));
    return model;
}

ForestModel train_forest(const Config& config, const Release& data,
                         std::uint64_t seed) {
    const Columns cols = make_columns(data);
    const Order base = argsort_columns(cols);
    std::mt19937_64 rng(seed);

    GrowSettings gs;
    gs.min_sample_split = static_cast<int>(config.at("min_sample_split"));
    gs.min_samples_leaf = static_cast<int>(config.at("min_samples_leaf"));
    gs.max_leaf_nodes = static_cast<int>(config.at("max_leaf_nodes"));
    gs.features_per_split = feature_count(config.at("max_feature"));
    gs.sample_per_split = true;

    const int n_estimators = static_cast<int>(config.at("n_estimators"));
    ForestModel model;
    model.trees.reserve(n_estimators);
    std::vector<int> w(cols.n);
    for (int t = 0; t < n_estimators; ++t) {
        std::fill(w.begin(), w.end(), 0);
        for (std::size_t i = 0; i < cols.n; ++i) {
            ++w[draw_index(rng, cols.n)];
        }
        Tree tree;
        grow_best_first(cols, w, gs, tree, make_root(cols, w, base, tree), rng);
        model.trees.push_back(std::move(tree));
    }
    return model;
}

} // namespace tunedp::detail

namespace tunedp {

double cart_split_score(const std::vector<Instance>& rows, std::size_t attribute,
                        double cut) {
    if (rows.size() < 2) {
        throw std::invalid_argument("cart_split_score: need at least 2 rows");
    }
    double sum[2] = {0, 0}, sumsq[2] = {0, 0};
    std::size_t n[2] = {0, 0};
    for (const auto& inst : rows) {
        const int side = inst.metrics[attribute] <= cut ? 0 : 1;
        const double y = inst.defect_count;
        sum[side] += y;
        sumsq[side] += y * y;
        ++n[side];
    }
    if (n[0] == 0 || n[1] == 0) {
        throw std::invalid_argument("cart_split_score: cut leaves a side empty");
    }
    double total = 0.0;
    for (int s = 0; s < 2; ++s) {
        const double mean = sum[s] / n[s];
        const double var = std::max(0.0, sumsq[s] / n[s] - mean * mean);
        total += n[s] * std::sqrt(var);
    }
    return total / static_cast<double>(rows.size());
}

} // namespace tunedp
