#pragma once

#include <Eigen/Dense>

namespace shrinklearn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

}  // namespace shrinklearn
