#include "irad/gradcheck.hpp"

#include <cmath>
#include <string>

#include "irad/errors.hpp"

namespace irad {

double grad_check(const std::function<double()>& eval, std::span<Matrix* const> params,
                  std::span<const Matrix> analytic, double eps) {
  if (eps <= 0.0) throw ContractError("grad_check: eps must be positive");
  if (params.size() != analytic.size()) {
    throw ContractError("grad_check: " + std::to_string(params.size()) + " params vs " +
                        std::to_string(analytic.size()) + " analytic gradients");
  }
  double worst = 0.0;
  for (std::size_t p = 0; p < params.size(); ++p) {
    Matrix& theta = *params[p];
    if (!theta.same_shape(analytic[p])) {
      throw ShapeError("grad_check: param " + shape_string(theta) +
                       " vs gradient " + shape_string(analytic[p]));
    }
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const double saved = theta.data()[i];
      theta.data()[i] = saved + eps;
      const double up = eval();
      theta.data()[i] = saved - eps;
      const double down = eval();
      theta.data()[i] = saved;
      const double fd = (up - down) / (2.0 * eps);
      const double rel = std::abs(analytic[p].data()[i] - fd) / (std::abs(fd) + 1e-8);
      if (rel > worst) worst = rel;
    }
  }
  return worst;
}

}  // namespace irad
