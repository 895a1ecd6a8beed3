#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <json.hpp>
#include <string>

namespace memmo {

/// Row-major flattening used by every on-disk matrix payload.
nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, Eigen::Index rows, Eigen::Index cols);

nlohmann::json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const nlohmann::json& j);

/// FNV-1a over a byte string; stable content hashing for manifests and
/// model/codec compatibility checks.
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace memmo
