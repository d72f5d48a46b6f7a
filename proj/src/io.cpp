#include "fgw/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fgw {

namespace {

using nlohmann::json;

Matrix parse_matrix(const json& rows, const char* name) {
  if (!rows.is_array() || rows.empty()) throw ParseError(std::string(name) + " must be a non-empty array");
  const Index n = static_cast<Index>(rows.size());
  const Index m = static_cast<Index>(rows[0].size());
  Matrix out(n, m);
  for (Index i = 0; i < n; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || static_cast<Index>(row.size()) != m) {
      throw ParseError(std::string(name) + " rows have inconsistent lengths");
    }
    for (Index j = 0; j < m; ++j) {
      if (!row[j].is_number()) throw ParseError(std::string(name) + " entries must be numbers");
      out(i, j) = row[j].get<double>();
    }
  }
  return out;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

StructuredObject read_object_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }

  try {
    if (!doc.contains("n") || !doc.contains("features") || !doc.contains("structure") ||
        !doc.contains("weights")) {
      throw ParseError("object file needs n, features, structure and weights");
    }
    const Index n = doc["n"].get<Index>();
    Matrix features = parse_matrix(doc["features"], "features");
    if (features.rows() != n) throw ParseError("features row count does not match n");
    if (doc.contains("d") && doc["d"].get<Index>() != features.cols()) {
      throw ParseError("d does not match the feature columns");
    }

    Vector weights;
    if (doc["weights"].is_string() && doc["weights"].get<std::string>() == "uniform") {
      weights = Vector::Constant(n, 1.0 / static_cast<double>(n));
    } else if (doc["weights"].is_array()) {
      const auto& w = doc["weights"];
      if (static_cast<Index>(w.size()) != n) throw ParseError("weights length does not match n");
      weights.resize(n);
      for (Index i = 0; i < n; ++i) weights[i] = w[i].get<double>();
    } else {
      throw ParseError("weights must be an array or \"uniform\"");
    }

    const auto& st = doc["structure"];
    const std::string kind = st.value("kind", "");
    if (kind == "matrix") {
      Matrix structure = parse_matrix(st.at("matrix"), "structure.matrix");
      if (structure.rows() != n || structure.cols() != n) {
        throw ParseError("structure matrix must be n x n");
      }
      return StructuredObject(std::move(structure), std::move(features),
                              Histogram(std::move(weights)));
    }
    if (kind == "graph") {
      std::vector<std::tuple<Index, Index, double>> edges;
      for (const auto& e : st.at("edges")) {
        if (!e.is_array() || e.size() != 3) throw ParseError("edges must be [i, j, w] triples");
        edges.emplace_back(e[0].get<Index>(), e[1].get<Index>(), e[2].get<double>());
      }
      GraphSpec g{n, std::move(edges), std::move(features), Histogram(std::move(weights))};
      return shortest_path_structure(g);
    }
    throw ParseError("structure.kind must be \"matrix\" or \"graph\"");
  } catch (const ParseError&) {
    throw;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const std::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_object_file(const std::filesystem::path& path, const StructuredObject& obj) {
  json doc;
  doc["version"] = "fgwkit/1";
  doc["n"] = obj.size();
  doc["d"] = obj.feature_dim();
  doc["features"] = matrix_to_json(obj.features());
  doc["structure"] = {{"kind", "matrix"}, {"matrix", matrix_to_json(obj.structure())}};
  json w = json::array();
  for (Index i = 0; i < obj.size(); ++i) w.push_back(obj.weights()[i]);
  doc["weights"] = std::move(w);

  std::ofstream out(path);
  if (!out) throw Error("io_error", "cannot write " + path.string());
  out << doc.dump(2) << "\n";
}

std::string matrix_to_csv(const Matrix& m) {
  std::string out;
  char buf[40];
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      if (j) out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw Error("io_error", "cannot write " + path.string());
  out << matrix_to_csv(m);
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path.string() + " is empty");
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(rows[0].size()));
  for (Index i = 0; i < out.rows(); ++i) {
    if (static_cast<Index>(rows[i].size()) != out.cols()) {
      throw ParseError(path.string() + " has ragged rows");
    }
    for (Index j = 0; j < out.cols(); ++j) out(i, j) = rows[i][j];
  }
  return out;
}

}  // namespace fgw
