// Apache License, Version 2.0, refer to LICENSE.txt

#include "srr/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace srr {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::runtime_error(what); }

const json& require(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing field \"") + key + "\"");
  return *it;
}

Eigen::VectorXd vector_field(const json& j, const char* key) {
  const json& arr = require(j, key);
  if (!arr.is_array()) fail(std::string("field \"") + key + "\" must be an array");
  Eigen::VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) fail(std::string("field \"") + key + "\" must hold numbers");
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return v;
}

json to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

}  // namespace

std::string kind_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Rationing: return "rationing";
    case ProblemKind::Hiring: return "hiring";
    case ProblemKind::ProbeTopK: return "probetopk";
    case ProblemKind::Knapsack: return "knapsack";
    case ProblemKind::Matching: return "matching";
    case ProblemKind::GraphProbing: return "graph-probing";
  }
  fail("unknown problem kind");
}

AnyInstance parse_instance_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("instance must be a JSON object");
  const std::string kind = require(j, "kind").get<std::string>();

  AnyInstance any;
  if (kind == "rationing") {
    RationingInstance inst;
    inst.k = require(j, "k").get<int>();
    inst.x = vector_field(j, "x");
    inst.validate();
    any = {ProblemKind::Rationing, inst};
  } else if (kind == "hiring") {
    HiringInstance inst;
    inst.k = require(j, "k").get<int>();
    inst.T = require(j, "T").get<int>();
    inst.w = vector_field(j, "w");
    inst.p = vector_field(j, "p");
    inst.validate();
    any = {ProblemKind::Hiring, inst};
  } else if (kind == "probetopk") {
    ProbeInstance inst;
    inst.k = require(j, "k").get<int>();
    inst.T = require(j, "T").get<int>();
    for (const json& d : require(j, "dists")) {
      DiscreteDistribution dist;
      dist.support = vector_field(d, "support");
      dist.mass = vector_field(d, "mass");
      inst.dists.push_back(std::move(dist));
    }
    inst.validate();
    any = {ProblemKind::ProbeTopK, inst};
  } else if (kind == "knapsack") {
    KnapsackInstance inst;
    inst.horizon = require(j, "T").get<int>();
    for (const json& job : require(j, "jobs")) {
      std::vector<JobOutcome> outcomes;
      for (const json& triple : job) {
        if (!triple.is_array() || triple.size() != 3) {
          fail("field \"jobs\" must hold [weight, duration, prob] triples");
        }
        outcomes.push_back({triple[0].get<double>(), triple[1].get<int>(),
                            triple[2].get<double>()});
      }
      inst.jobs.push_back(std::move(outcomes));
    }
    inst.validate();
    any = {ProblemKind::Knapsack, inst};
  } else if (kind == "matching") {
    MatchingInstance inst;
    inst.p = vector_field(j, "p");
    const json& rows = require(j, "w");
    if (!rows.is_array() || rows.empty()) fail("field \"w\" must be a nonempty matrix");
    inst.w.resize(static_cast<Eigen::Index>(rows.size()), inst.p.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!rows[r].is_array() || rows[r].size() != static_cast<std::size_t>(inst.p.size())) {
        fail("field \"w\" rows must match the number of agents");
      }
      for (std::size_t c = 0; c < rows[r].size(); ++c) {
        inst.w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            rows[r][c].get<double>();
      }
    }
    inst.validate();
    any = {ProblemKind::Matching, inst};
  } else if (kind == "graph-probing") {
    GraphProbingInstance inst;
    inst.num_vertices = require(j, "vertices").get<int>();
    for (const json& e : require(j, "edges")) {
      inst.edges.push_back({require(e, "u").get<int>(), require(e, "v").get<int>(),
                            require(e, "weight").get<double>(),
                            require(e, "prob").get<double>()});
    }
    inst.patience.assign(inst.num_vertices, std::nullopt);
    if (j.contains("patience")) {
      const json& pat = j["patience"];
      if (!pat.is_array() || pat.size() != static_cast<std::size_t>(inst.num_vertices)) {
        fail("field \"patience\" must list one entry per vertex");
      }
      for (std::size_t v = 0; v < pat.size(); ++v) {
        const int t = pat[v].get<int>();
        if (t >= 0) inst.patience[v] = t;
      }
    }
    inst.validate();
    any = {ProblemKind::GraphProbing, inst};
  } else {
    fail("unknown \"kind\": " + kind);
  }
  return any;
}

GraphProbingInstance parse_edge_list(std::istream& in) {
  GraphProbingInstance inst;
  std::string line;
  int max_vertex = -1;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    GraphEdge edge;
    if (!(row >> edge.u >> edge.v >> edge.weight >> edge.prob)) {
      fail("edge list line " + std::to_string(line_no) + ": expected \"u v weight prob\"");
    }
    max_vertex = std::max({max_vertex, edge.u, edge.v});
    inst.edges.push_back(edge);
  }
  if (max_vertex < 0) fail("edge list holds no edges");
  inst.num_vertices = max_vertex + 1;
  inst.patience.assign(inst.num_vertices, std::nullopt);
  inst.validate();
  return inst;
}

AnyInstance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open instance file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) fail("instance file is empty: " + path);
  if (text[first] != '{') {
    std::istringstream stream(text);
    return {ProblemKind::GraphProbing, parse_edge_list(stream)};
  }
  return parse_instance_json(text);
}

std::string instance_to_json(const AnyInstance& any) {
  json j;
  j["kind"] = kind_name(any.kind);
  switch (any.kind) {
    case ProblemKind::Rationing: {
      const auto& inst = std::get<RationingInstance>(any.value);
      j["k"] = inst.k;
      j["x"] = to_json(inst.x);
      break;
    }
    case ProblemKind::Hiring: {
      const auto& inst = std::get<HiringInstance>(any.value);
      j["k"] = inst.k;
      j["T"] = inst.T;
      j["w"] = to_json(inst.w);
      j["p"] = to_json(inst.p);
      break;
    }
    case ProblemKind::ProbeTopK: {
      const auto& inst = std::get<ProbeInstance>(any.value);
      j["k"] = inst.k;
      j["T"] = inst.T;
      json dists = json::array();
      for (const auto& dist : inst.dists) {
        dists.push_back({{"support", to_json(dist.support)}, {"mass", to_json(dist.mass)}});
      }
      j["dists"] = std::move(dists);
      break;
    }
    case ProblemKind::Knapsack: {
      const auto& inst = std::get<KnapsackInstance>(any.value);
      j["T"] = inst.horizon;
      json jobs = json::array();
      for (const auto& job : inst.jobs) {
        json outcomes = json::array();
        for (const auto& o : job) outcomes.push_back({o.weight, o.duration, o.prob});
        jobs.push_back(std::move(outcomes));
      }
      j["jobs"] = std::move(jobs);
      break;
    }
    case ProblemKind::Matching: {
      const auto& inst = std::get<MatchingInstance>(any.value);
      j["p"] = to_json(inst.p);
      json rows = json::array();
      for (Eigen::Index r = 0; r < inst.m(); ++r) {
        rows.push_back(to_json(inst.w.row(r).transpose()));
      }
      j["w"] = std::move(rows);
      break;
    }
    case ProblemKind::GraphProbing: {
      const auto& inst = std::get<GraphProbingInstance>(any.value);
      j["vertices"] = inst.num_vertices;
      json edges = json::array();
      for (const auto& e : inst.edges) {
        edges.push_back({{"u", e.u}, {"v", e.v}, {"weight", e.weight}, {"prob", e.prob}});
      }
      j["edges"] = std::move(edges);
      json pat = json::array();
      for (const auto& t : inst.patience) pat.push_back(t ? *t : -1);
      j["patience"] = std::move(pat);
      break;
    }
  }
  return j.dump(2);
}

void write_instance(const AnyInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("cannot open output file: " + path);
  out << instance_to_json(inst) << '\n';
}

void write_report_csv(const SimulationReport& report, std::ostream& out) {
  out << "record,label,value,extra\n";
  out << "summary,mean," << report.mean << ",\n";
  out << "summary,std_error," << report.std_error << ",\n";
  out << "summary,replications," << report.replications << ",\n";
  out << "summary,seed," << report.seed << ",\n";
  out << "summary,wall_seconds," << report.wall_seconds << ",\n";
  for (std::size_t e = 0; e < report.labels.size(); ++e) {
    out << "event," << report.labels[e] << ',' << report.events[e].frequency << ','
        << report.events[e].half_width << '\n';
  }
}

void append_free_table_csv(const FreeTable& table, std::ostream& out) {
  const std::string tag = table.source == FreeSource::Exact
                              ? "exact"
                              : "sampled:" + std::to_string(table.replications);
  for (Eigen::Index i = 0; i < table.free.rows(); ++i) {
    for (Eigen::Index t = 0; t < table.free.cols(); ++t) {
      out << "free," << i << '_' << (t + 1) << ',' << table.free(i, t) << ',' << tag << '\n';
    }
  }
}

}  // namespace srr
