#include "memmo/json_io.hpp"

#include <stdexcept>

namespace memmo {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      arr.push_back(m(i, j));
    }
  }
  return arr;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows * cols) {
    throw std::invalid_argument("matrix payload has wrong length");
  }
  Eigen::MatrixXd m(rows, cols);
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index jj = 0; jj < cols; ++jj) {
      m(i, jj) = j[idx++].get<double>();
    }
  }
  return m;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("vector payload must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace memmo
