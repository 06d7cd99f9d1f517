#ifndef MPK_TYPES_HPP
#define MPK_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mpk {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularBlock : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IllConditioned : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mpk

#endif
