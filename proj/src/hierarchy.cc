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

#include "shardgnn/hierarchy.h"

#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "shardgnn/random.h"

namespace shardgnn {

CoarsenResult Coarsen(const Matrix& a, const Matrix& s, const Matrix& z) {
  const size_t n = a.rows();
  if (a.cols() != n) throw Error(ErrorCode::kSchema, "adjacency must be square");
  if (s.rows() != n) {
    throw Error(ErrorCode::kSchema,
                fmt::format("assignment has {} rows, adjacency has {}", s.rows(), n));
  }
  if (z.rows() != n) {
    throw Error(ErrorCode::kSchema,
                fmt::format("embedding has {} rows, adjacency has {}", z.rows(), n));
  }
  for (size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (size_t j = 0; j < s.cols(); ++j) {
      if (!(s(i, j) >= 0)) throw Error(ErrorCode::kSchema, "assignment has a negative entry");
      sum += s(i, j);
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw Error(ErrorCode::kSchema, fmt::format("assignment row {} sums to {}", i, sum));
    }
  }
  const size_t c = s.cols();
  // A S first, then S^T (A S).
  Matrix as(n, c);
  for (size_t i = 0; i < n; ++i) {
    for (size_t k = 0; k < n; ++k) {
      double aik = a(i, k);
      if (aik == 0.0) continue;
      for (size_t j = 0; j < c; ++j) as(i, j) += aik * s(k, j);
    }
  }
  CoarsenResult out{Matrix(c, c), Matrix(c, z.cols())};
  for (size_t k = 0; k < n; ++k) {
    for (size_t i = 0; i < c; ++i) {
      double ski = s(k, i);
      if (ski == 0.0) continue;
      for (size_t j = 0; j < c; ++j) out.a(i, j) += ski * as(k, j);
      for (size_t j = 0; j < z.cols(); ++j) out.x(i, j) += ski * z(k, j);
    }
  }
  return out;
}

Matrix SpectralAssignment(const Matrix& a, size_t clusters, uint64_t seed) {
  const size_t n = a.rows();
  if (a.cols() != n) throw Error(ErrorCode::kSchema, "adjacency must be square");
  if (clusters == 0 || clusters > n) {
    throw Error(ErrorCode::kUsage, fmt::format("cluster count {} outside 1..{}", clusters, n));
  }
  Eigen::MatrixXd m(n, n);
  Eigen::VectorXd deg = Eigen::VectorXd::Zero(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      m(i, j) = 0.5 * (a(i, j) + a(j, i));
      deg(i) += m(i, j);
    }
  }
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      double norm = std::sqrt(deg(i) * deg(j));
      m(i, j) = norm > 0 ? m(i, j) / norm : 0.0;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  // Eigenvalues ascend; take the largest `clusters` of D^-1/2 A D^-1/2.
  Eigen::MatrixXd emb = solver.eigenvectors().rightCols(clusters);
  for (size_t i = 0; i < n; ++i) {
    double len = emb.row(i).norm();
    if (len > 0) emb.row(i) /= len;
  }

  // Farthest-point seeding from a seeded first center, then Lloyd steps.
  Rng rng(seed);
  std::vector<size_t> centers{static_cast<size_t>(rng.Below(n))};
  while (centers.size() < clusters) {
    size_t best = 0;
    double best_d = -1;
    for (size_t i = 0; i < n; ++i) {
      double dmin = std::numeric_limits<double>::infinity();
      for (size_t c : centers) dmin = std::min(dmin, (emb.row(i) - emb.row(c)).squaredNorm());
      if (dmin > best_d) {
        best_d = dmin;
        best = i;
      }
    }
    centers.push_back(best);
  }
  Eigen::MatrixXd mu(clusters, emb.cols());
  for (size_t c = 0; c < clusters; ++c) mu.row(c) = emb.row(centers[c]);
  std::vector<size_t> label(n, 0);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (size_t i = 0; i < n; ++i) {
      size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (size_t c = 0; c < clusters; ++c) {
        double dist = (emb.row(i) - mu.row(c)).squaredNorm();
        if (dist < best_d) {
          best_d = dist;
          best = c;
        }
      }
      changed |= label[i] != best;
      label[i] = best;
    }
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(clusters, emb.cols());
    std::vector<size_t> count(clusters, 0);
    for (size_t i = 0; i < n; ++i) {
      sum.row(label[i]) += emb.row(i);
      ++count[label[i]];
    }
    for (size_t c = 0; c < clusters; ++c) {
      if (count[c]) mu.row(c) = sum.row(c) / static_cast<double>(count[c]);
    }
    if (!changed && iter > 0) break;
  }
  Matrix s(n, clusters);
  for (size_t i = 0; i < n; ++i) s(i, label[i]) = 1.0;
  return s;
}

}  // namespace shardgnn
