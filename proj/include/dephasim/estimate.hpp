#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace dephasim {

/// Monte Carlo estimate: sample mean, standard error (sample standard
/// deviation / sqrt(n_paths), entrywise for matrices), and the path count.
template <typename MeanT, typename ErrT>
struct Estimate {
  MeanT mean;
  ErrT std_err;
  std::int64_t n_paths;
};

using ScalarEstimate = Estimate<double, double>;
using MatrixEstimate = Estimate<Eigen::MatrixXcd, Eigen::MatrixXd>;

}  // namespace dephasim
