#ifndef TUNEDP_LEARNERS_HPP
#define TUNEDP_LEARNERS_HPP

#include <cstdint>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tunedp/dataset.hpp"
#include "tunedp/params.hpp"

namespace tunedp {

/// Binary tree stored as a node pool; nodes[0] is the root. Leaves carry
/// the defective fraction of their training rows, which is the numeric
/// output thresholded at predict time. `majority` is the majority cluster
/// id for WHERE decision trees (-1 elsewhere).
struct TreeNode {
    int attribute = -1; // -1 marks a leaf
    double cut = 0.0;   // value <= cut goes left
    int left = -1;
    int right = -1;
    int count = 0;
    double fraction = 0.0;
    int majority = -1;
};

struct Tree {
    std::vector<TreeNode> nodes;

    bool empty() const { return nodes.empty(); }
    const TreeNode& leaf_for(const Instance& x) const;
    double output(const Instance& x) const { return leaf_for(x).fraction; }
    int depth() const;
    int leaf_count() const;
};

/// The recursive median-split clustering tree WHERE builds first. Kept on
/// the fitted model so cluster assignments stay inspectable.
struct ClusterNode {
    int left = -1;
    int right = -1;
    int count = 0;
    double defect_rate = 0.0;
    int cluster_id = -1; // leaves only

    bool is_leaf() const { return left < 0; }
};

struct ClusterTree {
    std::vector<ClusterNode> nodes;
    std::vector<int> leaf_of_row; // training row -> cluster_id
    int n_clusters = 0;
};

struct CartModel {
    Tree tree;
};

struct ForestModel {
    std::vector<Tree> trees;
};

struct WhereModel {
    ClusterTree clusters;
    Tree decision;
    std::vector<std::size_t> ranked_attributes; // info-gain order, best first
    std::size_t eligible_count = 0;             // ceil(infoPrune * 20)
};

/// Plain logistic model on standardized attributes:
/// f = beta0 + sum_i beta_i * (x_i - mean_i) / sd_i,  g = 1/(1+exp(-f)).
struct LogisticModel {
    std::vector<double> beta; // beta[0] intercept, then one per attribute
    std::vector<double> mean;
    std::vector<double> sd;   // 0 marks a constant (skipped) attribute
    std::vector<double> loss_history;
};

struct Model {
    Learner learner = Learner::CART;
    Config config;
    double threshold = 0.5;
    std::uint64_t seed = 0;
    std::variant<CartModel, ForestModel, WhereModel, LogisticModel> impl;
};

/// Fits a model. Pure function of (config, data, seed): identical inputs
/// give structurally identical models. Throws on empty data or invalid
/// config; single-class data yields a constant model.
Model train(const Config& config, const Release& data, std::uint64_t seed);

/// Numeric model output in [0,1]: leaf defective fraction for trees,
/// mean of member-tree fractions for forests, g for logistic regression.
double predict_value(const Model& model, const Instance& x);

/// predict_value(model, x) >= model.threshold.
bool predict(const Model& model, const Instance& x);

std::vector<bool> predict_all(const Model& model, const Release& data);

/// Attributes appearing in any split, or with |beta| above a small
/// reporting epsilon for logistic regression.
std::set<std::string> features_used(const Model& model);

/// Deterministic JSON text form of the fitted structure (split
/// attributes, cuts, leaf fractions) for golden and reproducibility tests.
std::string model_to_json_text(const Model& model);

/// Sum over the two sides of sqrt(variance of defect_count) weighted by
/// the side's fraction of rows. Rows with metric value <= cut form the
/// left side. Throws if either side is empty or rows.size() < 2.
double cart_split_score(const std::vector<Instance>& rows, std::size_t attribute,
                        double cut);

/// Cluster-tree leaf size floor: m = ceil(n ^ min_size).
std::size_t where_min_leaf_size(std::size_t n, double min_size);

/// The two WHERE construction stages, exposed for inspection and tests.
ClusterTree where_cluster_tree(const Release& data, const Config& config,
                               std::uint64_t seed);
Tree where_decision_tree(const ClusterTree& clusters, const Release& data,
                         const Config& config);

/// Attributes ordered by the information gain of their best binary
/// entropy cut against the cluster labels (best first, ties by name).
std::vector<std::size_t> where_rank_attributes(const ClusterTree& clusters,
                                               const Release& data);

} // namespace tunedp

#endif
