// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <string>

#include "saccade/param_store.hpp"

namespace saccade {

struct GradCheckReport {
  /// Max relative error per parameter path.
  std::map<std::string, double> max_rel_error;
  double worst = 0.0;
  std::string worst_param;
  bool passed = false;
};

/// Compares reverse-mode gradients of `loss_fn` against central finite
/// differences, element by element, for every parameter in `params`.
/// Relative error is |ad - fd| / max(1e-8, |ad| + |fd|).
/// `loss_fn` must be deterministic and return a scalar.
GradCheckReport grad_check(const std::function<Tensor()>& loss_fn, ParamStore& params,
                           double h = 1e-5, double tol = 1e-4);

}  // namespace saccade
