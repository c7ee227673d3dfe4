#include "heatstab/system.hpp"

#include <stdexcept>

namespace heatstab {

void SystemData::validate() const {
  const auto rows = A.rows();
  if (rows == 0 || A.cols() != rows) {
    throw std::invalid_argument("SystemData: A must be square and nonempty");
  }
  if (B.rows() != rows || B.cols() != 1) {
    throw std::invalid_argument("SystemData: B must be n x 1");
  }
  if (C.rows() != 1 || C.cols() != rows) {
    throw std::invalid_argument("SystemData: C must be 1 x n");
  }
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("SystemData: gamma must be positive");
  }
}

SystemData paper_example(double K, double gamma) {
  SystemData sys;
  sys.A.resize(4, 4);
  sys.A << 0, 0, 1, 0,
           0, 0, 0, 1,
           -10 - K, 10, 0, 0,
           5, -15, 0, -0.25;
  sys.B.resize(4, 1);
  sys.B << 0, 0, 1, 0;
  sys.C.resize(1, 4);
  sys.C << K, 0, 0, 0;
  sys.gamma = 2.0 * gamma;  // half-diffusivity convention of the family
  sys.validate();
  return sys;
}

}  // namespace heatstab
