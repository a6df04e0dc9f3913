#pragma once

#include <Eigen/Dense>

namespace gpr {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Measurement rows are accessed one a_i at a time, so the ensemble is
// stored row-major and kernels walk contiguous memory.
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

} // namespace gpr
