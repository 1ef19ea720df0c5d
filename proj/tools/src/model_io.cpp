#include "model_io.hpp"

#include <fstream>

namespace ridge_equiv::cli {

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Matrix matrix_from_json(const json& j, Index rows, Index cols,
                        const std::string& key) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows) {
    throw ModelFileError("\"" + key + "\" must be an array of " +
                         std::to_string(rows) + " rows");
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw ModelFileError("\"" + key + "\" row " + std::to_string(i) +
                           " must have " + std::to_string(cols) + " entries");
    }
    for (Index c = 0; c < cols; ++c) {
      const json& entry = row[static_cast<std::size_t>(c)];
      if (!entry.is_number()) {
        throw ModelFileError("\"" + key + "\" entries must be numbers");
      }
      m(i, c) = entry.get<double>();
    }
  }
  return m;
}

Vector vector_from_json(const json& j, Index size, const std::string& key) {
  if (!j.is_array() || static_cast<Index>(j.size()) != size) {
    throw ModelFileError("\"" + key + "\" must be an array of length " +
                         std::to_string(size));
  }
  Vector v(size);
  for (Index i = 0; i < size; ++i) {
    const json& entry = j[static_cast<std::size_t>(i)];
    if (!entry.is_number()) {
      throw ModelFileError("\"" + key + "\" entries must be numbers");
    }
    v(i) = entry.get<double>();
  }
  return v;
}

ModelInstance model_from_json(const json& j) {
  if (!j.is_object()) throw ModelFileError("model document must be an object");
  for (const char* key : {"n", "k", "X", "Omega", "K1", "K2"}) {
    if (!j.contains(key)) {
      throw ModelFileError(std::string("missing required key \"") + key + "\"");
    }
  }
  if (!j["n"].is_number_integer() || !j["k"].is_number_integer()) {
    throw ModelFileError("\"n\" and \"k\" must be integers");
  }
  ModelInstance m;
  m.n = j["n"].get<Index>();
  m.k = j["k"].get<Index>();
  if (m.n <= 0 || m.k <= 0 || m.k >= m.n) {
    throw ModelFileError("requires n > k >= 1");
  }
  m.X = matrix_from_json(j["X"], m.n, m.k, "X");
  m.Omega = matrix_from_json(j["Omega"], m.n, m.n, "Omega");
  m.K1 = matrix_from_json(j["K1"], m.k, m.k, "K1");
  m.K2 = matrix_from_json(j["K2"], m.k, m.k, "K2");
  if (j.contains("y")) m.y = vector_from_json(j["y"], m.n, "y");
  if (j.contains("beta")) m.beta = vector_from_json(j["beta"], m.k, "beta");
  if (j.contains("sigma2")) {
    if (!j["sigma2"].is_number()) {
      throw ModelFileError("\"sigma2\" must be a number");
    }
    m.sigma2 = j["sigma2"].get<double>();
  }
  if (j.contains("Z")) {
    m.Z = matrix_from_json(j["Z"], m.n, m.n - m.k, "Z");
  }
  return m;
}

json model_to_json(const ModelInstance& instance) {
  json j;
  j["n"] = instance.n;
  j["k"] = instance.k;
  j["X"] = matrix_to_json(instance.X);
  j["Omega"] = matrix_to_json(instance.Omega);
  j["K1"] = matrix_to_json(instance.K1);
  j["K2"] = matrix_to_json(instance.K2);
  if (instance.y) j["y"] = vector_to_json(*instance.y);
  if (instance.beta) j["beta"] = vector_to_json(*instance.beta);
  if (instance.sigma2) j["sigma2"] = *instance.sigma2;
  if (instance.Z) j["Z"] = matrix_to_json(*instance.Z);
  return j;
}

ModelInstance load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ModelFileError("cannot open model file: " + path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ModelFileError("model file is not valid JSON: " +
                         std::string(e.what()));
  }
  return model_from_json(j);
}

void save_model_file(const std::filesystem::path& path,
                     const ModelInstance& instance) {
  std::ofstream out(path);
  if (!out) {
    throw ModelFileError("cannot write model file: " + path.string());
  }
  out << model_to_json(instance).dump(2) << "\n";
}

json tolerance_to_json(const ToleranceConfig& tol) {
  return json{{"rel_eq", tol.rel_eq},
              {"abs_eq", tol.abs_eq},
              {"rank_rel", tol.rank_rel},
              {"psd_floor", tol.psd_floor}};
}

json conditions_to_json(const std::vector<Condition>& conditions) {
  json arr = json::array();
  for (const auto& c : conditions) {
    arr.push_back(json{{"name", c.name},
                       {"residual", c.residual},
                       {"holds", c.holds}});
  }
  return arr;
}

}  // namespace ridge_equiv::cli
