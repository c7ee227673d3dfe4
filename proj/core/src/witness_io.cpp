#include "heatstab/witness_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace heatstab {

namespace {

using json = nlohmann::ordered_json;

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, const char* field) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw std::invalid_argument(std::string("witness: field '") + field +
                                "' must be a nested array");
  }
  const auto rows = j.size();
  const auto cols = j[0].size();
  Eigen::MatrixXd m(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw std::invalid_argument(std::string("witness: field '") + field +
                                  "' has ragged rows");
    }
    for (size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) {
        throw std::invalid_argument(std::string("witness: field '") + field +
                                    "' has a non-numeric entry");
      }
      m(r, c) = j[r][c].get<double>();
    }
  }
  return m;
}

SolveStatus status_from_string(const std::string& s) {
  if (s == "Optimal") return SolveStatus::Optimal;
  if (s == "Infeasible") return SolveStatus::Infeasible;
  if (s == "NumericalTrouble") return SolveStatus::NumericalTrouble;
  throw std::invalid_argument("witness: unknown solver_status '" + s + "'");
}

double require_number(const json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_number()) {
    throw std::invalid_argument(std::string("witness: missing numeric field '") +
                                field + "'");
  }
  return j[field].get<double>();
}

}  // namespace

std::string witness_to_json_text(const Witness& w, int order) {
  json j;
  j["order"] = order;
  j["n"] = w.P.rows();
  j["P"] = matrix_to_json(w.P);
  j["Q"] = matrix_to_json(w.Q);
  j["T"] = matrix_to_json(w.T);
  j["alpha"] = w.alpha;
  j["beta"] = w.beta;
  j["margin"] = w.margin;
  j["solver_status"] = to_string(w.solver_status);
  return j.dump(2);
}

Witness witness_from_json_text(const std::string& text, int* order_out) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("witness: invalid JSON: ") + e.what());
  }
  Witness w;
  w.P = matrix_from_json(j.value("P", json()), "P");
  w.Q = matrix_from_json(j.value("Q", json()), "Q");
  w.T = matrix_from_json(j.value("T", json()), "T");
  w.alpha = require_number(j, "alpha");
  w.beta = require_number(j, "beta");
  w.margin = require_number(j, "margin");
  if (!j.contains("solver_status") || !j["solver_status"].is_string()) {
    throw std::invalid_argument("witness: missing string field 'solver_status'");
  }
  w.solver_status = status_from_string(j["solver_status"].get<std::string>());
  if (order_out) {
    if (!j.contains("order") || !j["order"].is_number_integer()) {
      throw std::invalid_argument("witness: missing integer field 'order'");
    }
    *order_out = j["order"].get<int>();
  }
  return w;
}

void save_witness(const std::filesystem::path& path, const Witness& w, int order) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_witness: cannot open " + path.string());
  os << witness_to_json_text(w, order) << '\n';
}

Witness load_witness(const std::filesystem::path& path, int* order_out) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("load_witness: cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(is)),
                   std::istreambuf_iterator<char>());
  return witness_from_json_text(text, order_out);
}

}  // namespace heatstab
