#pragma once

#include "ridge_equiv/model.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>

namespace ridge_equiv::cli {

using nlohmann::json;

/// The file does not parse to a well-formed model document (bad JSON, missing
/// keys, or array shapes inconsistent with n and k).
struct ModelFileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json matrix_to_json(const Matrix& m);
json vector_to_json(const Vector& v);
Matrix matrix_from_json(const json& j, Index rows, Index cols,
                        const std::string& key);
Vector vector_from_json(const json& j, Index size, const std::string& key);

/// Keys: "n", "k", "X", "Omega", "K1", "K2"; optional "y", "beta", "sigma2",
/// "Z". Matrices are row-major nested arrays of numbers.
ModelInstance model_from_json(const json& j);
json model_to_json(const ModelInstance& instance);

ModelInstance load_model_file(const std::filesystem::path& path);
void save_model_file(const std::filesystem::path& path,
                     const ModelInstance& instance);

json tolerance_to_json(const ToleranceConfig& tol);
json conditions_to_json(const std::vector<Condition>& conditions);

}  // namespace ridge_equiv::cli
