#include "memmo/trajectory.hpp"

#include <stdexcept>

namespace memmo {

Trajectory::Trajectory(Eigen::MatrixXd values_, double dt_) : values(std::move(values_)), dt(dt_) {
  if (values.cols() < 1) throw std::invalid_argument("trajectory needs at least one knot");
  if (dt <= 0.0) throw std::invalid_argument("trajectory dt must be positive");
  if (!values.allFinite()) throw std::invalid_argument("trajectory values must be finite");
}

}  // namespace memmo
