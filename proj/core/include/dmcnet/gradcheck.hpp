#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dmcnet/rng.hpp"
#include "dmcnet/tensor.hpp"

namespace dmcnet {

struct GradCheckItem {
  std::string name;
  double max_rel_err = 0.0;
  std::size_t elements_checked = 0;
};

struct GradCheckReport {
  double max_rel_err = 0.0;
  std::vector<GradCheckItem> items;

  bool passes(double tol) const { return max_rel_err < tol; }
};

// Compares analytic gradients (already stored in each tensor's .grad) against
// central finite differences of `loss`. Relative error uses a denominator
// floored at 1e-6, which turns the comparison into an absolute one for
// near-zero gradient pairs; finite differences cannot resolve below that with
// eps around 1e-5. max_elems_per_tensor > 0 spot-checks a seeded random
// subset instead of every element (needed for whole-network checks).
inline GradCheckReport grad_check(
    const std::function<double()>& loss,
    const std::vector<std::pair<std::string, Tensor4<double>*>>& tensors,
    double eps = 1e-5, std::size_t max_elems_per_tensor = 0,
    std::uint64_t select_seed = 0) {
  GradCheckReport report;
  Rng pick(select_seed ^ 0xA5A5A5A5ull);
  for (const auto& [name, t] : tensors) {
    GradCheckItem item;
    item.name = name;
    const std::size_t total = t->numel();
    std::vector<std::size_t> idx;
    if (max_elems_per_tensor == 0 || max_elems_per_tensor >= total) {
      idx.resize(total);
      for (std::size_t i = 0; i < total; ++i) idx[i] = i;
    } else {
      for (std::size_t k = 0; k < max_elems_per_tensor; ++k)
        idx.push_back(std::size_t(pick.below(total)));
    }
    for (std::size_t i : idx) {
      const double saved = t->data[i];
      t->data[i] = saved + eps;
      const double lp = loss();
      t->data[i] = saved - eps;
      const double lm = loss();
      t->data[i] = saved;
      const double numeric = (lp - lm) / (2.0 * eps);
      const double analytic = t->grad[i];
      const double denom = std::max({std::fabs(analytic), std::fabs(numeric), 1e-6});
      const double rel = std::fabs(analytic - numeric) / denom;
      item.max_rel_err = std::max(item.max_rel_err, rel);
      ++item.elements_checked;
    }
    report.max_rel_err = std::max(report.max_rel_err, item.max_rel_err);
    report.items.push_back(std::move(item));
  }
  return report;
}

}  // namespace dmcnet
