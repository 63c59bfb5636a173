#pragma once

#include <random>
#include <string>
#include <vector>

#include "itn/ingest.hpp"

namespace itn::testing {

inline std::string code(int i) { return "C" + std::to_string(1000 + i); }

inline std::vector<std::string> codes(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(code(i));
  return out;
}

/// Snapshot with log-uniform GDPs and a random fraction of positive flows.
inline Snapshot random_snapshot(int n, std::uint64_t seed, double density = 0.5, int year = 2000) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = std::exp(std::log(1e2) + unit(rng) * std::log(1e5));
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && unit(rng) < density) t.emplace_back(i, j, std::exp(unit(rng) * 10.0) * 1e-3);
  if (t.empty() && n > 1) t.emplace_back(0, 1, 1.0);
  WeightMatrix w(n, n);
  w.setFromTriplets(t.begin(), t.end());
  return Snapshot(year, codes(n), std::move(w), std::move(x));
}

/// Snapshot from a dense weight matrix.
inline Snapshot dense_snapshot(const Eigen::MatrixXd& w, const Eigen::VectorXd& x, int year = 2000) {
  WeightMatrix sw = w.sparseView();
  return Snapshot(year, codes(static_cast<int>(x.size())), std::move(sw), x);
}

}  // namespace itn::testing
