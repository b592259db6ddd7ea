/* Copyright 2026 The ShardGNN Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef SHARDGNN_POWER_LAW_H_
#define SHARDGNN_POWER_LAW_H_

#include <cstddef>
#include <span>

namespace shardgnn {

struct TailFitReport {
  double alpha_hat = 0.0;   // power-law exponent of the density
  double x_min = 0.0;
  double ks_distance = 1.0;
  size_t n_tail = 0;
  bool discrete = false;
};

// Exponential (geometric, for integer data) tail fitted the same way.
struct ExponentialFitReport {
  double rate = 0.0;
  double x_min = 0.0;
  double ks_distance = 1.0;
  size_t n_tail = 0;
  bool discrete = false;
};

// Maximum-likelihood tail exponent with x_min chosen by minimizing the
// Kolmogorov-Smirnov distance. Integer-valued samples use the discrete
// approximation. Tails shorter than max(50, 5% of the samples) are not
// considered. Samples must be positive; throws kDegenerateSample when fewer
// than 100 are given or all are equal.
TailFitReport FitPowerLawTail(std::span<const double> samples);

ExponentialFitReport FitExponentialTail(std::span<const double> samples);

// Exponential fitted on the fixed tail x >= x_min, for comparing against a
// power-law fit on the same tail.
ExponentialFitReport FitExponentialTail(std::span<const double> samples, double x_min);

}  // namespace shardgnn

#endif  // SHARDGNN_POWER_LAW_H_
