#pragma once

#include <functional>
#include <span>

#include "irad/matrix.hpp"

namespace irad {

// Central-difference gradient check. `eval` recomputes the scalar objective
// from the current parameter values; `params` are perturbed in place and
// restored. Returns max over all parameter entries of
//   |analytic - central_difference| / (|central_difference| + 1e-8).
double grad_check(const std::function<double()>& eval, std::span<Matrix* const> params,
                  std::span<const Matrix> analytic, double eps = 1e-5);

}  // namespace irad
