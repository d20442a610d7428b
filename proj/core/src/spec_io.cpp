#include "zerocap/spec_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace zerocap {

namespace {

using nlohmann::json;

json complex_entry(const Complex& c) { return json::array({c.real(), c.imag()}); }

json matrix_entry(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_entry(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix parse_matrix(const json& j) {
  if (!j.is_array() || j.empty()) throw spec_error("spec: matrix must be a non-empty array");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (j[i].size() != cols) throw spec_error("spec: ragged matrix rows");
    for (std::size_t k = 0; k < cols; ++k) {
      const json& e = j[i][k];
      if (e.is_number()) {
        m(i, k) = e.get<double>();
      } else if (e.is_array() && e.size() == 2) {
        m(i, k) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        throw spec_error("spec: matrix entries are numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

RMatrix parse_real_matrix(const json& j) {
  const CMatrix m = parse_matrix(j);
  if (m.imag().cwiseAbs().maxCoeff() > 0.0) throw spec_error("spec: expected a real matrix");
  return m.real();
}

double number_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    std::ostringstream os;
    os << "spec: missing numeric field '" << key << "'";
    throw spec_error(os.str());
  }
  return j[key].get<double>();
}

ParsedSpec parse_json(const json& j);

ParsedSpec parse_tensor(const json& j) {
  if (!j.contains("parts") || !j["parts"].is_array() || j["parts"].empty())
    throw spec_error("spec: tensor needs a non-empty 'parts' array");
  std::vector<ParsedSpec> parts;
  for (const auto& pj : j["parts"]) parts.push_back(parse_json(pj));

  ParsedSpec out = parts[0];
  out.type = "tensor";
  for (std::size_t i = 1; i < parts.size(); ++i) {
    out.graph = tensor(out.graph, parts[i].graph);
    if (out.channel && parts[i].channel)
      out.channel = tensor(*out.channel, *parts[i].channel);
    else
      out.channel.reset();
    out.transition.reset();
    out.classical_graph.reset();
  }
  if (j.contains("power")) {
    const int n = j["power"].get<int>();
    if (n < 1) throw spec_error("spec: tensor power must be positive");
    ParsedSpec base = out;
    for (int i = 1; i < n; ++i) {
      out.graph = tensor(out.graph, base.graph);
      if (out.channel && base.channel)
        out.channel = tensor(*out.channel, *base.channel);
      else
        out.channel.reset();
    }
  }
  return out;
}

ParsedSpec parse_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw spec_error("spec: top level must be an object with a 'type' string");
  const std::string type = j["type"].get<std::string>();

  ParsedSpec out;
  out.type = type;
  if (type == "two_state") {
    const double a2 = j.contains("alpha_sq") ? number_field(j, "alpha_sq")
                                             : [&] {
                                                 const double a = number_field(j, "alpha");
                                                 return a * a;
                                               }();
    const double alpha = std::sqrt(a2);
    out.graph = two_state_graph(alpha);
    out.channel = two_state_channel(alpha);
  } else if (type == "amplitude_damping") {
    const double r = number_field(j, "r");
    out.graph = amplitude_damping_graph(r);
    out.channel = amplitude_damping_channel(r);
  } else if (type == "noiseless_classical") {
    const int l = static_cast<int>(number_field(j, "l"));
    out.graph = noiseless_classical_graph(l);
    out.channel = classical_identity_channel(l);
  } else if (type == "noiseless_quantum") {
    const int l = static_cast<int>(number_field(j, "l"));
    out.graph = noiseless_quantum_graph(l);
    out.channel = identity_channel(l);
  } else if (type == "kraus") {
    const int d_in = static_cast<int>(number_field(j, "d_in"));
    const int d_out = static_cast<int>(number_field(j, "d_out"));
    if (!j.contains("matrices") || !j["matrices"].is_array())
      throw spec_error("spec: kraus needs a 'matrices' array");
    std::vector<CMatrix> kraus;
    for (const auto& mj : j["matrices"]) kraus.push_back(parse_matrix(mj));
    out.graph = graph_from_kraus(kraus, d_in, d_out);
    Channel n = channel_from_kraus(kraus, d_in, d_out);
    if (n.trace_preserving)
      out.channel = std::move(n);
    else
      out.channel = canonical_channel(out.graph);
  } else if (type == "cq") {
    if (!j.contains("projectors") || !j["projectors"].is_array())
      throw spec_error("spec: cq needs a 'projectors' array");
    std::vector<CMatrix> proj;
    for (const auto& pj : j["projectors"]) proj.push_back(parse_matrix(pj));
    out.graph = graph_from_cq(proj);
    out.channel = canonical_channel(out.graph);
  } else if (type == "classical") {
    if (!j.contains("transition")) throw spec_error("spec: classical needs a 'transition' matrix");
    const RMatrix t = parse_real_matrix(j["transition"]);
    out.graph = graph_from_classical(t);
    out.channel = channel_from_classical(t);
    out.transition = t;
  } else if (type == "graph") {
    const int n = static_cast<int>(number_field(j, "n"));
    Graph g{n, {}};
    if (j.contains("edges"))
      for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 2) throw spec_error("spec: edges are [i, j] pairs");
        g.add_edge(e[0].get<int>(), e[1].get<int>());
      }
    out.classical_graph = std::move(g);
  } else if (type == "tensor") {
    return parse_tensor(j);
  } else {
    throw spec_error("spec: unknown type '" + type + "'");
  }
  return out;
}

}  // namespace

ParsedSpec parse_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw spec_error(std::string("spec: ") + e.what());
  }
  return parse_json(j);
}

ParsedSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw spec_error("spec: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

std::string spec_to_json(const NCGraph& k) {
  json j;
  if (k.is_cq()) {
    j["type"] = "cq";
    json proj = json::array();
    for (const auto& p : *k.cq) proj.push_back(matrix_entry(p));
    j["projectors"] = std::move(proj);
  } else {
    j["type"] = "kraus";
    j["d_in"] = k.d_A;
    j["d_out"] = k.d_B;
    json mats = json::array();
    for (const auto& e : k.kraus_basis) mats.push_back(matrix_entry(e));
    j["matrices"] = std::move(mats);
  }
  return j.dump(2);
}

std::string matrix_to_json(const CMatrix& m) { return matrix_entry(m).dump(); }

CMatrix matrix_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw spec_error(std::string("matrix: ") + e.what());
  }
  return parse_matrix(j);
}

std::string to_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream os;
  os << "quantity,value,integer_part,bits,gap,status,seconds\n";
  os.precision(12);
  for (const auto& r : rows)
    os << r.quantity << "," << r.value << "," << r.integer_part << "," << r.bits << "," << r.gap
       << "," << r.status << "," << r.seconds << "\n";
  return os.str();
}

std::string to_json(const std::vector<ReportRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json o;
    o["quantity"] = r.quantity;
    o["value"] = r.value;
    o["integer_part"] = r.integer_part;
    o["bits"] = r.bits;
    o["gap"] = r.gap;
    o["status"] = r.status;
    o["seconds"] = r.seconds;
    if (!r.witness_file.empty()) o["witness_file"] = r.witness_file;
    arr.push_back(std::move(o));
  }
  return arr.dump(2);
}

}  // namespace zerocap
