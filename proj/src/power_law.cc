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

#include "shardgnn/power_law.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <fmt/format.h>

#include "shardgnn/common.h"

namespace shardgnn {
namespace {

constexpr size_t kMinSamples = 100;
constexpr size_t kMaxCandidates = 256;

struct Prepared {
  std::vector<double> sorted;
  bool discrete = true;
  std::vector<size_t> candidates;  // start offsets into `sorted`
};

Prepared Prepare(std::span<const double> samples) {
  if (samples.size() < kMinSamples) {
    throw Error(ErrorCode::kDegenerateSample,
                fmt::format("need >= {} samples, got {}", kMinSamples, samples.size()));
  }
  Prepared p;
  p.sorted.assign(samples.begin(), samples.end());
  std::sort(p.sorted.begin(), p.sorted.end());
  if (!(p.sorted.front() > 0) || !std::isfinite(p.sorted.back())) {
    throw Error(ErrorCode::kDegenerateSample, "samples must be positive and finite");
  }
  if (p.sorted.front() == p.sorted.back()) {
    throw Error(ErrorCode::kDegenerateSample, "all samples are equal");
  }
  for (double x : p.sorted) {
    if (x != std::floor(x)) {
      p.discrete = false;
      break;
    }
  }
  const size_t n = p.sorted.size();
  const size_t min_tail = std::max<size_t>(50, (n + 19) / 20);
  std::vector<size_t> starts;
  for (size_t i = 0; i + min_tail <= n; ++i) {
    if (i == 0 || p.sorted[i] != p.sorted[i - 1]) starts.push_back(i);
  }
  // The tail must still hold two distinct values.
  while (!starts.empty() && p.sorted[starts.back()] == p.sorted.back()) starts.pop_back();
  if (starts.empty()) starts.push_back(0);
  if (starts.size() > kMaxCandidates) {
    std::vector<size_t> thinned;
    for (size_t j = 0; j < kMaxCandidates; ++j) {
      thinned.push_back(starts[j * (starts.size() - 1) / (kMaxCandidates - 1)]);
    }
    thinned.erase(std::unique(thinned.begin(), thinned.end()), thinned.end());
    starts = std::move(thinned);
  }
  p.candidates = std::move(starts);
  return p;
}

// KS distance between the empirical tail sorted[start..] and `cdf`. For
// discrete data the comparison is made at each distinct value only.
template <typename Cdf>
double KsDistance(const std::vector<double>& sorted, size_t start, bool discrete, Cdf cdf) {
  const size_t n = sorted.size() - start;
  double d = 0.0;
  for (size_t i = start; i < sorted.size();) {
    size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    double below = static_cast<double>(i - start) / static_cast<double>(n);
    double upto = static_cast<double>(j - start) / static_cast<double>(n);
    double f = cdf(sorted[i]);
    d = std::max(d, std::abs(upto - f));
    if (!discrete) d = std::max(d, std::abs(below - f));
    i = j;
  }
  return d;
}

}  // namespace

TailFitReport FitPowerLawTail(std::span<const double> samples) {
  Prepared p = Prepare(samples);
  TailFitReport best;
  best.discrete = p.discrete;
  for (size_t start : p.candidates) {
    const double x_min = p.sorted[start];
    const double base = p.discrete ? x_min - 0.5 : x_min;
    if (!(base > 0)) continue;
    double log_sum = 0.0;
    for (size_t i = start; i < p.sorted.size(); ++i) log_sum += std::log(p.sorted[i] / base);
    if (!(log_sum > 0)) continue;
    const double n_tail = static_cast<double>(p.sorted.size() - start);
    const double alpha = 1.0 + n_tail / log_sum;
    auto cdf = [&](double x) {
      double edge = p.discrete ? x + 0.5 : x;
      return 1.0 - std::pow(edge / base, 1.0 - alpha);
    };
    double ks = KsDistance(p.sorted, start, p.discrete, cdf);
    if (best.n_tail == 0 || ks < best.ks_distance) {
      best.alpha_hat = alpha;
      best.x_min = x_min;
      best.ks_distance = ks;
      best.n_tail = p.sorted.size() - start;
    }
  }
  if (best.n_tail == 0) throw Error(ErrorCode::kDegenerateSample, "no usable tail");
  return best;
}

namespace {

ExponentialFitReport FitExponentialAt(const Prepared& p, std::span<const size_t> starts) {
  ExponentialFitReport best;
  best.discrete = p.discrete;
  for (size_t start : starts) {
    const double x_min = p.sorted[start];
    double excess = 0.0;
    for (size_t i = start; i < p.sorted.size(); ++i) excess += p.sorted[i] - x_min;
    const double n_tail = static_cast<double>(p.sorted.size() - start);
    const double mean = excess / n_tail;
    if (!(mean > 0)) continue;
    double rate;
    std::function<double(double)> cdf;
    if (p.discrete) {
      // Geometric on {x_min, x_min + 1, ...}: P(X >= x) = q^(x - x_min).
      const double q = mean / (1.0 + mean);
      rate = -std::log(q);
      cdf = [=](double x) { return 1.0 - std::pow(q, x - x_min + 1.0); };
    } else {
      rate = 1.0 / mean;
      cdf = [=](double x) { return 1.0 - std::exp(-rate * (x - x_min)); };
    }
    double ks = KsDistance(p.sorted, start, p.discrete, cdf);
    if (best.n_tail == 0 || ks < best.ks_distance) {
      best.rate = rate;
      best.x_min = x_min;
      best.ks_distance = ks;
      best.n_tail = p.sorted.size() - start;
    }
  }
  if (best.n_tail == 0) throw Error(ErrorCode::kDegenerateSample, "no usable tail");
  return best;
}

}  // namespace

ExponentialFitReport FitExponentialTail(std::span<const double> samples) {
  Prepared p = Prepare(samples);
  return FitExponentialAt(p, p.candidates);
}

ExponentialFitReport FitExponentialTail(std::span<const double> samples, double x_min) {
  Prepared p = Prepare(samples);
  auto it = std::lower_bound(p.sorted.begin(), p.sorted.end(), x_min);
  if (it == p.sorted.end()) throw Error(ErrorCode::kDegenerateSample, "empty tail");
  size_t start = static_cast<size_t>(it - p.sorted.begin());
  return FitExponentialAt(p, std::span<const size_t>(&start, 1));
}

}  // namespace shardgnn
