#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "regdec/classifier.hpp"
#include "regdec/codelength.hpp"
#include "regdec/graph.hpp"
#include "regdec/solver.hpp"

namespace regdec {

using json = nlohmann::json;

inline json to_json(const CodeLengthReport& r) {
  return json{{"k", r.k},
              {"data_bits", r.data_bits},
              {"model_bits", r.model_bits},
              {"total_bits", r.total_bits},
              {"L1", r.l1},
              {"L2", r.l2},
              {"L3", r.l3},
              {"L4", r.l4},
              {"L5", r.l5}};
}

inline json to_json(const FitResult& f, const std::vector<std::vector<double>>& density) {
  json per_k = json::array();
  for (const auto& [k, total] : f.per_k_totals)
    per_k.push_back(json{{"k", k}, {"total_bits", total}});
  return json{{"k_star", f.k_star},
              {"assignment", f.partition.assignment},
              {"density", density},
              {"report", to_json(f.report)},
              {"per_k_totals", per_k},
              {"restart_costs", f.restart_costs},
              {"iterations_used", f.iterations_used},
              {"seed", f.seed}};
}

inline json to_json(const ClassifierModel& m) {
  return json{{"k", m.k},
              {"block_sizes", m.block_sizes},
              {"rel_sizes", m.rel_sizes},
              {"density", m.d},
              {"sample_ids", m.sample_ids},
              {"sample_labels", m.sample_labels},
              {"epsilon", m.epsilon}};
}

inline ClassifierModel model_from_json(const json& j) {
  ClassifierModel m;
  m.k = j.at("k").get<int>();
  m.block_sizes = j.at("block_sizes").get<std::vector<long long>>();
  m.rel_sizes = j.at("rel_sizes").get<std::vector<double>>();
  m.d = j.at("density").get<std::vector<std::vector<double>>>();
  m.sample_ids = j.at("sample_ids").get<std::vector<int>>();
  m.sample_labels = j.at("sample_labels").get<std::vector<int>>();
  m.epsilon = j.at("epsilon").get<double>();
  if (m.sample_ids.size() != m.sample_labels.size())
    throw std::runtime_error("model: sample id/label length mismatch");
  return m;
}

// Label file: "node_id,block" per line.
inline void write_labels(std::ostream& os, const Partition& part) {
  for (int i = 0; i < part.n; ++i) os << i << "," << part.assignment[i] << "\n";
}

inline Partition read_labels(std::istream& in) {
  std::vector<std::pair<int, int>> rows;
  std::string line;
  int k = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    int id, b;
    char comma;
    if (!(ls >> id >> comma >> b) || comma != ',')
      throw std::runtime_error("labels: malformed line '" + line + "'");
    rows.emplace_back(id, b);
    k = std::max(k, b + 1);
  }
  std::vector<int> a(rows.size(), -1);
  for (auto [id, b] : rows) {
    if (id < 0 || id >= static_cast<int>(rows.size()) || a[id] != -1)
      throw std::runtime_error("labels: bad or duplicate node id");
    a[id] = b;
  }
  return Partition(k, std::move(a));
}

inline void write_edge_list(std::ostream& os, const Graph& g) {
  for (int i = 0; i < g.num_nodes(); ++i)
    for (int j = i + 1; j < g.num_nodes(); ++j)
      if (g.edge(i, j)) os << i << " " << j << "\n";
}

inline void write_ternary_matrix(std::ostream& os, const MaskedGraph& g) {
  for (int i = 0; i < g.num_nodes(); ++i) {
    for (int j = 0; j < g.num_nodes(); ++j) {
      if (j) os << ",";
      os << g.raw(i, j);
    }
    os << "\n";
  }
}

inline void write_success_csv(std::ostream& os, const std::vector<SuccessPoint>& pts) {
  os << "n0,trials,success_fraction\n";
  for (const auto& p : pts)
    os << p.n0 << "," << p.trials << "," << p.success << "\n";
}

} // namespace regdec
