#include <algorithm>
#include <cmath>
#include <functional>

#include <json.hpp>

#include "learner_internal.hpp"

namespace tunedp {

const TreeNode& Tree::leaf_for(const Instance& x) const {
    const TreeNode* node = &nodes.at(0);
    while (node->attribute >= 0) {
        node = x.metrics[node->attribute] <= node->cut ? &nodes[node->left]
                                                       : &nodes[node->right];
    }
    return *node;
}

int Tree::depth() const {
    if (nodes.empty()) return 0;
    const std::function<int(int)> walk = [&](int id) {
        const TreeNode& n = nodes[id];
        if (n.attribute < 0) return 0;
        return 1 + std::max(walk(n.left), walk(n.right));
    };
    return walk(0);
}

int Tree::leaf_count() const {
    if (nodes.empty()) return 0;
    const std::function<int(int)> walk = [&](int id) {
        const TreeNode& n = nodes[id];
        if (n.attribute < 0) return 1;
        return walk(n.left) + walk(n.right);
    };
    return walk(0);
}

Model train(const Config& config, const Release& data, std::uint64_t seed) {
    validate_config(config);
    if (data.instances.empty()) {
        throw std::invalid_argument("train: empty data");
    }
    Model model;
    model.learner = config.learner;
    model.config = config;
    model.seed = seed;
    const auto threshold_it = config.values.find("threshold");
    model.threshold =
        threshold_it != config.values.end() ? threshold_it->second : 0.5;

    switch (config.learner) {
    case Learner::CART:
        model.impl = detail::train_cart(config, data, seed);
        break;
    case Learner::RANDOM_FOREST:
        model.impl = detail::train_forest(config, data, seed);
        break;
    case Learner::WHERE:
        model.impl = detail::train_where(config, data, seed);
        break;
    case Learner::LOGISTIC_REGRESSION:
        model.impl = detail::train_logistic(data);
        break;
    }
    return model;
}

double predict_value(const Model& model, const Instance& x) {
    struct Visitor {
        const Instance& x;
        double operator()(const CartModel& m) const { return m.tree.output(x); }
        double operator()(const ForestModel& m) const {
            double sum = 0.0;
            for (const Tree& t : m.trees) sum += t.output(x);
            return m.trees.empty() ? 0.0 : sum / m.trees.size();
        }
        double operator()(const WhereModel& m) const {
            return m.decision.output(x);
        }
        double operator()(const LogisticModel& m) const {
            double f = m.beta[0];
            for (std::size_t a = 0; a < kNumAttributes; ++a) {
                if (m.sd[a] > 0.0) {
                    f += m.beta[a + 1] * (x.metrics[a] - m.mean[a]) / m.sd[a];
                }
            }
            return 1.0 / (1.0 + std::exp(-std::clamp(f, -36.0, 36.0)));
        }
    };
    return std::visit(Visitor{x}, model.impl);
}

bool predict(const Model& model, const Instance& x) {
    return predict_value(model, x) >= model.threshold;
}

std::vector<bool> predict_all(const Model& model, const Release& data) {
    std::vector<bool> out;
    out.reserve(data.size());
    for (const Instance& inst : data.instances) {
        out.push_back(predict(model, inst));
    }
    return out;
}

namespace {

void collect_tree_attrs(const Tree& tree, std::set<std::string>& out) {
    for (const TreeNode& n : tree.nodes) {
        if (n.attribute >= 0) {
            out.insert(std::string(kAttributeNames[n.attribute]));
        }
    }
}

} // namespace

std::set<std::string> features_used(const Model& model) {
    std::set<std::string> out;
    struct Visitor {
        std::set<std::string>& out;
        void operator()(const CartModel& m) const {
            collect_tree_attrs(m.tree, out);
        }
        void operator()(const ForestModel& m) const {
            for (const Tree& t : m.trees) collect_tree_attrs(t, out);
        }
        void operator()(const WhereModel& m) const {
            collect_tree_attrs(m.decision, out);
        }
        void operator()(const LogisticModel& m) const {
            for (std::size_t a = 0; a < kNumAttributes; ++a) {
                if (std::abs(m.beta[a + 1]) > 1e-6) {
                    out.insert(std::string(kAttributeNames[a]));
                }
            }
        }
    };
    std::visit(Visitor{out}, model.impl);
    return out;
}

namespace {

nlohmann::json tree_to_json(const Tree& tree) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const TreeNode& n : tree.nodes) {
        nlohmann::json j;
        if (n.attribute >= 0) {
            j["split"] = kAttributeNames[n.attribute];
            j["cut"] = n.cut;
            j["left"] = n.left;
            j["right"] = n.right;
        }
        j["count"] = n.count;
        j["fraction"] = n.fraction;
        if (n.majority >= 0) j["majority"] = n.majority;
        nodes.push_back(std::move(j));
    }
    return nodes;
}

nlohmann::json cluster_tree_to_json(const ClusterTree& tree) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const ClusterNode& n : tree.nodes) {
        nlohmann::json j;
        j["count"] = n.count;
        j["defect_rate"] = n.defect_rate;
        if (n.is_leaf()) {
            j["cluster"] = n.cluster_id;
        } else {
            j["left"] = n.left;
            j["right"] = n.right;
        }
        nodes.push_back(std::move(j));
    }
    return nodes;
}

} // namespace

std::string model_to_json_text(const Model& model) {
    nlohmann::json j;
    j["learner"] = learner_name(model.learner);
    j["threshold"] = model.threshold;
    j["seed"] = model.seed;
    j["config"] = nlohmann::json::object();
    for (const auto& [name, value] : model.config.values) {
        j["config"][name] = value;
    }
    struct Visitor {
        nlohmann::json& j;
        void operator()(const CartModel& m) const {
            j["tree"] = tree_to_json(m.tree);
        }
        void operator()(const ForestModel& m) const {
            nlohmann::json trees = nlohmann::json::array();
            for (const Tree& t : m.trees) trees.push_back(tree_to_json(t));
            j["trees"] = std::move(trees);
        }
        void operator()(const WhereModel& m) const {
            j["clusters"] = cluster_tree_to_json(m.clusters);
            j["decision"] = tree_to_json(m.decision);
            nlohmann::json ranked = nlohmann::json::array();
            for (std::size_t a : m.ranked_attributes) {
                ranked.push_back(kAttributeNames[a]);
            }
            j["ranked_attributes"] = std::move(ranked);
            j["eligible_count"] = m.eligible_count;
        }
        void operator()(const LogisticModel& m) const {
            j["beta"] = m.beta;
            j["mean"] = m.mean;
            j["sd"] = m.sd;
        }
    };
    std::visit(Visitor{j}, model.impl);
    return j.dump();
}

} // namespace tunedp
