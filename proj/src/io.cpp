#include "lol/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace lol {

using nlohmann::json;

int LoadedClass::num_labels() const {
  return is_hypothesis() ? hypothesis->num_labels : pattern->num_labels;
}

ClassState LoadedClass::state() const {
  if (is_hypothesis()) return ClassState::version_space(hypothesis);
  return ClassState::explicit_class(*pattern);
}

LoadedClass parse_class_json(const std::string& text) {
  json j = json::parse(text);
  const std::string kind = j.at("kind").get<std::string>();
  LoadedClass out;
  if (kind == "hypothesis") {
    auto cls = std::make_shared<HypothesisClass>();
    cls->domain_size = j.at("domain_size").get<int>();
    cls->num_labels = j.at("labels").get<int>();
    cls->list_width = j.at("kprime").get<int>();
    for (const auto& hj : j.at("hypotheses")) {
      MultiHypothesis h;
      for (const auto& ls : hj) {
        std::vector<Label> labels = ls.get<std::vector<Label>>();
        std::sort(labels.begin(), labels.end());
        h.labels_for.push_back(std::move(labels));
      }
      cls->hypotheses.push_back(std::move(h));
    }
    cls->validate();
    out.hypothesis = std::move(cls);
  } else if (kind == "pattern") {
    const int domain_size = j.at("domain_size").get<int>();
    const int num_labels = j.at("labels").get<int>();
    std::vector<Pattern> seeds;
    for (const auto& pj : j.at("patterns")) {
      Pattern s;
      for (const auto& ej : pj) {
        const int x = ej.at(0).get<int>();
        const Label y = ej.at(1).get<Label>();
        if (x < 0 || x >= domain_size) throw std::invalid_argument("pattern point out of range");
        if (y < 0 || y >= num_labels) throw std::invalid_argument("pattern label out of range");
        s.push(DomainPoint{x}, y);
      }
      seeds.push_back(std::move(s));
    }
    out.pattern = std::make_shared<PatternClassExplicit>(
        downward_closure(seeds, domain_size, num_labels));
  } else {
    throw std::invalid_argument("unknown class kind: " + kind);
  }
  return out;
}

LoadedClass load_class_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open class file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_class_json(buf.str());
}

std::string class_to_json(const HypothesisClass& cls) {
  json j;
  j["kind"] = "hypothesis";
  j["domain_size"] = cls.domain_size;
  j["labels"] = cls.num_labels;
  j["kprime"] = cls.list_width;
  json hs = json::array();
  for (const auto& h : cls.hypotheses) {
    json hj = json::array();
    for (const auto& ls : h.labels_for) hj.push_back(ls);
    hs.push_back(std::move(hj));
  }
  j["hypotheses"] = std::move(hs);
  return j.dump();
}

namespace {

json node_to_json(const MistakeTreeNode* n) {
  if (!n) return nullptr;
  json j;
  j["x"] = n->x;
  json edges = json::array();
  for (const auto& [y, child] : n->edges) {
    json e;
    e["y"] = y;
    e["child"] = node_to_json(child.get());
    edges.push_back(std::move(e));
  }
  j["edges"] = std::move(edges);
  return j;
}

std::unique_ptr<MistakeTreeNode> node_from_json(const json& j, int* depth, int* out_degree) {
  if (j.is_null()) {
    *depth = 0;
    return nullptr;
  }
  auto node = std::make_unique<MistakeTreeNode>();
  node->x = j.at("x").get<int>();
  int child_depth = 0;
  for (const auto& e : j.at("edges")) {
    int d = 0;
    auto child = node_from_json(e.at("child"), &d, out_degree);
    node->edges.emplace_back(e.at("y").get<Label>(), std::move(child));
    child_depth = d;
  }
  if (*out_degree == 0) *out_degree = static_cast<int>(node->edges.size());
  *depth = child_depth + 1;
  return node;
}

}  // namespace

std::string tree_to_json(const MistakeTree& tree) { return node_to_json(tree.root.get()).dump(); }

MistakeTree tree_from_json(const std::string& text) {
  json j = json::parse(text);
  MistakeTree t;
  int depth = 0;
  int out_degree = 0;
  t.root = node_from_json(j, &depth, &out_degree);
  t.depth = depth;
  t.out_degree = out_degree;
  t.validate();
  return t;
}

std::string certificate_to_json(const SeparatorCertificate& cert) {
  json j;
  j["w"] = cert.w;
  j["gamma"] = cert.gamma;
  j["k"] = cert.k;
  return j.dump();
}

SeparatorCertificate certificate_from_json(const std::string& text) {
  json j = json::parse(text);
  SeparatorCertificate cert;
  cert.w = j.at("w").get<std::vector<FeatureVec>>();
  cert.gamma = j.at("gamma").get<double>();
  cert.k = j.at("k").get<int>();
  return cert;
}

void write_dataset_csv(std::ostream& os, const Pattern& data, int feature_dim) {
  for (int i = 1; i <= feature_dim; ++i) os << "x_" << i << ",";
  os << "y\n";
  char buf[40];
  for (const Example& e : data.examples) {
    for (double c : point_vec(e.x)) {
      std::snprintf(buf, sizeof buf, "%.12g", c);
      os << buf << ",";
    }
    os << e.y << "\n";
  }
}

}  // namespace lol
