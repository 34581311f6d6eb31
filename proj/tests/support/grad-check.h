// tests/support/grad-check.h

// Copyright 2026  The latent-tta Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef TTA_TESTS_SUPPORT_GRAD_CHECK_H_
#define TTA_TESTS_SUPPORT_GRAD_CHECK_H_

// Central-difference gradient checks for functions built on the tape.

#include <algorithm>
#include <functional>
#include <random>
#include <vector>


#include "support/test-util.h"
#include "tta/autodiff/tape.h"

namespace tta::testing {

/// Builds a scalar from the given leaf variables.
using ScalarFn = std::function<ad::Var(ad::Tape &, const std::vector<ad::Var> &)>;

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
};

inline double EvalScalar(const ScalarFn &f, const std::vector<Tensor> &inputs) {
  ad::Tape tape(false);
  std::vector<ad::Var> vars;
  for (const auto &t : inputs) vars.push_back(tape.Constant(t));
  return f(tape, vars).value()[0];
}

/// Compares analytic gradients with central differences on every element
/// (or on `max_checks` randomly chosen elements per input).  Elements whose
/// two estimates are both below `abs_floor` count as agreeing.
inline GradCheckResult CheckGradients(const ScalarFn &f,
                                      std::vector<Tensor> inputs,
                                      double step = 1e-5,
                                      std::size_t max_checks = 0,
                                      std::uint64_t seed = 1,
                                      double abs_floor = 1e-8) {
  ad::Tape tape;
  std::vector<ad::Var> vars;
  for (const auto &t : inputs) vars.push_back(tape.Variable(t));
  ad::Var out = f(tape, vars);
  tape.Backward(out);
  std::vector<Tensor> grads;
  for (const auto &v : vars) grads.push_back(tape.Grad(v));

  GradCheckResult r;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    std::vector<std::size_t> idx(inputs[i].size());
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
    if (max_checks > 0 && idx.size() > max_checks) {
      std::shuffle(idx.begin(), idx.end(), rng);
      idx.resize(max_checks);
    }
    for (std::size_t k : idx) {
      const double orig = inputs[i][k];
      inputs[i][k] = orig + step;
      const double up = EvalScalar(f, inputs);
      inputs[i][k] = orig - step;
      const double down = EvalScalar(f, inputs);
      inputs[i][k] = orig;
      const double numeric = (up - down) / (2.0 * step);
      const double analytic = grads[i][k];
      ++r.checked;
      if (std::abs(numeric) < abs_floor && std::abs(analytic) < abs_floor)
        continue;
      r.max_rel_error =
          std::max(r.max_rel_error, RelativeError(numeric, analytic, abs_floor));
    }
  }
  return r;
}

}  // namespace tta::testing

#endif  // TTA_TESTS_SUPPORT_GRAD_CHECK_H_
