#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "sel/core/csv.hpp"
#include "sel/learn/predict.hpp"

// Model file schema (JSON):
//   tree node   {"value": v} or {"feature": i, "threshold": t, "left": node, "right": node}
//               where i indexes feature_names
//   tree        {"type": "tree", "feature_names": [...], "root": node}
//   forest      {"type": "forest", "feature_names": [...], "mtry": k, "bootstrap_seed": s, "trees": [node...]}
//   gbt         {"type": "gbt", "feature_names": [...], "init_value": v, "learning_rate": r, "trees": [node...]}
//   lasso       {"type": "lasso", "feature_names": [...], "lambda": l, "intercept": b,
//                "coefficients": [...], "means": [...], "sds": [...]}
// Lasso coefficients are on the standardised scale.

namespace sel::learn {

using json = nlohmann::json;

namespace detail {

inline json node_to_json(const std::vector<TreeNode>& nodes, std::size_t i) {
  const auto& n = nodes[i];
  if (n.is_leaf()) return json{{"value", n.value}};
  return json{{"feature", n.feature},
              {"threshold", n.threshold},
              {"left", node_to_json(nodes, n.left)},
              {"right", node_to_json(nodes, n.right)}};
}

inline std::uint32_t node_from_json(const json& j, std::vector<TreeNode>& nodes, std::size_t n_features) {
  const auto id = static_cast<std::uint32_t>(nodes.size());
  nodes.emplace_back();
  if (j.contains("value") && !j.contains("feature")) {
    nodes[id].value = j.at("value").get<double>();
    return id;
  }
  const int feature = j.at("feature").get<int>();
  if (feature < 0 || static_cast<std::size_t>(feature) >= n_features)
    fail(ErrorCode::ParseError, "tree node feature index out of range");
  const double threshold = j.at("threshold").get<double>();
  const auto left = node_from_json(j.at("left"), nodes, n_features);
  const auto right = node_from_json(j.at("right"), nodes, n_features);
  nodes[id].feature = feature;
  nodes[id].threshold = threshold;
  nodes[id].left = left;
  nodes[id].right = right;
  return id;
}

inline RegressionTree tree_from_json(const json& root, const std::vector<std::string>& names) {
  std::vector<TreeNode> nodes;
  node_from_json(root, nodes, names.size());
  return RegressionTree(names, std::move(nodes));
}

}  // namespace detail

inline json to_json(const RegressionTree& t) {
  return json{{"type", "tree"}, {"feature_names", t.feature_names()}, {"root", detail::node_to_json(t.nodes(), 0)}};
}

inline json to_json(const ForestModel& f) {
  json trees = json::array();
  for (const auto& t : f.trees()) trees.push_back(detail::node_to_json(t.nodes(), 0));
  return json{{"type", "forest"},
              {"feature_names", f.feature_names()},
              {"mtry", f.mtry()},
              {"bootstrap_seed", f.bootstrap_seed()},
              {"trees", trees}};
}

inline json to_json(const GbtModel& g) {
  json trees = json::array();
  for (const auto& t : g.trees()) trees.push_back(detail::node_to_json(t.nodes(), 0));
  return json{{"type", "gbt"},
              {"feature_names", g.feature_names()},
              {"init_value", g.init_value()},
              {"learning_rate", g.learning_rate()},
              {"trees", trees}};
}

inline json to_json(const LassoModel& m) {
  return json{{"type", "lasso"},
              {"feature_names", m.feature_names()},
              {"lambda", m.lambda()},
              {"intercept", m.intercept()},
              {"coefficients", m.coefficients()},
              {"means", m.means()},
              {"sds", m.sds()}};
}

inline json to_json(const AnyModel& model) {
  return std::visit([](const auto& m) { return to_json(m); }, model);
}

inline AnyModel model_from_json(const json& j) {
  try {
    const auto type = j.at("type").get<std::string>();
    const auto names = j.at("feature_names").get<std::vector<std::string>>();
    if (type == "tree") return detail::tree_from_json(j.at("root"), names);
    if (type == "forest") {
      std::vector<RegressionTree> trees;
      for (const auto& t : j.at("trees")) trees.push_back(detail::tree_from_json(t, names));
      if (trees.empty()) fail(ErrorCode::ParseError, "forest has no trees");
      return ForestModel(names, std::move(trees), j.at("mtry").get<std::size_t>(),
                         j.at("bootstrap_seed").get<std::uint64_t>());
    }
    if (type == "gbt") {
      std::vector<RegressionTree> trees;
      for (const auto& t : j.at("trees")) trees.push_back(detail::tree_from_json(t, names));
      return GbtModel(names, j.at("init_value").get<double>(), j.at("learning_rate").get<double>(), std::move(trees));
    }
    if (type == "lasso") {
      auto coef = j.at("coefficients").get<std::vector<double>>();
      auto means = j.at("means").get<std::vector<double>>();
      auto sds = j.at("sds").get<std::vector<double>>();
      if (coef.size() != names.size() || means.size() != names.size() || sds.size() != names.size())
        fail(ErrorCode::ParseError, "lasso arrays do not match feature_names");
      return LassoModel(names, std::move(coef), j.at("intercept").get<double>(), j.at("lambda").get<double>(),
                        std::move(means), std::move(sds));
    }
    fail(ErrorCode::ParseError, "unknown model type '" + type + "'");
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("malformed model file: ") + e.what());
  }
}

inline void save_model(const AnyModel& model, const std::filesystem::path& path) {
  core::write_text(path, to_json(model).dump(1) + "\n");
}

inline AnyModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::MissingFile, path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("model file is not JSON: ") + e.what());
  }
  return model_from_json(j);
}

}  // namespace sel::learn
