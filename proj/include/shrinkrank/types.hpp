#pragma once

#include <Eigen/Dense>

namespace shrinkrank {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace shrinkrank
