// SPDX-License-Identifier: Apache-2.0
#include "saccade/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace saccade {

GradCheckReport grad_check(const std::function<Tensor()>& loss_fn, ParamStore& params, double h,
                           double tol) {
  params.zero_grads();
  loss_fn().backward();

  GradCheckReport report;
  for (auto& [path, tensor] : params.params()) {
    Tensor t = tensor;
    const std::vector<double> analytic(t.grad().begin(), t.grad().end());
    double worst = 0.0;
    auto values = t.mutable_data();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      double plus, minus;
      {
        NoGradGuard guard;
        values[i] = saved + h;
        plus = loss_fn().item();
        values[i] = saved - h;
        minus = loss_fn().item();
      }
      values[i] = saved;
      const double fd = (plus - minus) / (2.0 * h);
      const double err = std::abs(analytic[i] - fd) / std::max(1e-8, std::abs(analytic[i]) + std::abs(fd));
      worst = std::max(worst, err);
    }
    report.max_rel_error[path] = worst;
    if (worst >= report.worst) {
      report.worst = worst;
      report.worst_param = path;
    }
  }
  report.passed = report.worst < tol;
  params.zero_grads();
  return report;
}

}  // namespace saccade
