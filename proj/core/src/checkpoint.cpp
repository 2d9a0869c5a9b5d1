#include "irad/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "irad/errors.hpp"

namespace irad {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json payload = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) payload.push_back(m.data()[i]);
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(payload)}};
}

Matrix matrix_from_json(const json& j) {
  const std::size_t rows = j.at("rows").get<std::size_t>();
  const std::size_t cols = j.at("cols").get<std::size_t>();
  const auto& data = j.at("data");
  if (data.size() != rows * cols) {
    throw ParseError("checkpoint: matrix payload has " + std::to_string(data.size()) +
                     " entries, expected " + std::to_string(rows * cols));
  }
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = data[i].get<double>();
  return m;
}

json mlp_to_json(const Mlp& net) {
  json layers = json::array();
  for (const Layer& layer : net.layers) {
    layers.push_back(json{{"activation", activation_name(layer.act)},
                          {"weight", matrix_to_json(layer.weight)},
                          {"bias", matrix_to_json(layer.bias)}});
  }
  return json{{"layers", std::move(layers)}};
}

Mlp mlp_from_json(const json& j) {
  Mlp net;
  for (const json& lj : j.at("layers")) {
    Layer layer;
    layer.act = activation_from_name(lj.at("activation").get<std::string>());
    layer.weight = matrix_from_json(lj.at("weight"));
    layer.bias = matrix_from_json(lj.at("bias"));
    net.layers.push_back(std::move(layer));
  }
  return net;
}

json forest_to_json(const IsolationForest& forest) {
  json trees = json::array();
  for (const ITree& tree : forest.trees) {
    json nodes = json::array();
    for (const ITreeNode& n : tree.nodes) {
      nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right, n.size}));
    }
    trees.push_back(
        json{{"height_limit", tree.height_limit}, {"nodes", std::move(nodes)}});
  }
  return json{{"psi", forest.psi},
              {"dim", forest.dim},
              {"c_norm", forest.c_norm},
              {"trees", std::move(trees)}};
}

IsolationForest forest_from_json(const json& j) {
  IsolationForest forest;
  forest.psi = j.at("psi").get<std::size_t>();
  forest.dim = j.at("dim").get<std::size_t>();
  forest.c_norm = j.at("c_norm").get<double>();
  for (const json& tj : j.at("trees")) {
    ITree tree;
    tree.height_limit = tj.at("height_limit").get<int>();
    for (const json& nj : tj.at("nodes")) {
      ITreeNode n;
      n.feature = nj.at(0).get<int>();
      n.threshold = nj.at(1).get<double>();
      n.left = nj.at(2).get<int>();
      n.right = nj.at(3).get<int>();
      n.size = nj.at(4).get<int>();
      tree.nodes.push_back(n);
    }
    forest.trees.push_back(std::move(tree));
  }
  return forest;
}

constexpr const char* kFormatTag = "irad-checkpoint-v1";

}  // namespace

std::string checkpoint_to_json(const Checkpoint& cp) {
  json j;
  j["format"] = kFormatTag;
  j["seed"] = cp.seed;
  j["d_x"] = cp.model.d_x;
  j["d_z"] = cp.model.d_z;
  j["d_p"] = cp.model.d_p;
  j["adv_mode"] = adv_mode_name(cp.model.adv_mode);
  j["combine"] = combine_name(cp.model.combine);
  j["networks"] = json{{"e_sh", mlp_to_json(cp.model.e_sh)},
                       {"e_pv", mlp_to_json(cp.model.e_pv)},
                       {"g_src", mlp_to_json(cp.model.g_src)},
                       {"d_src", mlp_to_json(cp.model.d_src)}};
  if (cp.forest) j["forest"] = forest_to_json(*cp.forest);
  return j.dump(2);
}

Checkpoint checkpoint_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("checkpoint: invalid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kFormatTag) {
      throw ParseError("checkpoint: unsupported format tag");
    }
    Checkpoint cp;
    cp.seed = j.at("seed").get<std::uint64_t>();
    cp.model.d_x = j.at("d_x").get<std::size_t>();
    cp.model.d_z = j.at("d_z").get<std::size_t>();
    cp.model.d_p = j.at("d_p").get<std::size_t>();
    cp.model.adv_mode = adv_mode_from_name(j.at("adv_mode").get<std::string>());
    cp.model.combine = combine_from_name(j.at("combine").get<std::string>());
    const json& nets = j.at("networks");
    cp.model.e_sh = mlp_from_json(nets.at("e_sh"));
    cp.model.e_pv = mlp_from_json(nets.at("e_pv"));
    cp.model.g_src = mlp_from_json(nets.at("g_src"));
    cp.model.d_src = mlp_from_json(nets.at("d_src"));
    if (j.contains("forest")) cp.forest = forest_from_json(j.at("forest"));
    return cp;
  } catch (const json::exception& e) {
    throw ParseError(std::string("checkpoint: missing or malformed field: ") + e.what());
  }
}

void save_checkpoint(const std::string& path, const Checkpoint& cp) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << checkpoint_to_json(cp) << '\n';
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open checkpoint file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return checkpoint_from_json(buffer.str());
}

}  // namespace irad
