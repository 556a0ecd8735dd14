#pragma once

// Random test data: structures moved by a random change of basis, null
// vectors, small helpers shared by the test executables.

#include "phinull/curvature.hpp"
#include "phinull/gff.hpp"
#include "phinull/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace support {

using namespace phinull;

inline Matrix random_matrix(Index rows, Index cols, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

inline Vector random_vector(Index n, std::mt19937_64& rng) { return random_matrix(n, 1, rng); }

/// Canonical structure pushed through y = T x for a well-conditioned random T.
inline GffStructure random_structure(int n, int s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const GffStructure c = canonical_structure(n, s);
  const Index m = c.dim();
  const Matrix T = Matrix::Identity(m, m) + random_matrix(m, m, rng, 0.3);
  const Matrix Ti = T.inverse();
  return GffStructure(n, s, ScalarProduct(Ti.transpose() * c.g().components() * Ti),
                      T * c.phi() * Ti, T * c.xi(), c.eta() * Ti, c.epsilon());
}

/// Null vector r (e0 + w) in a g-orthonormal frame with timelike e0 first.
inline Vector random_null(const ScalarProduct& g, std::mt19937_64& rng) {
  const SubspaceBasis frame = orthonormal_frame(g);
  const Index m = g.dim();
  Vector w = random_vector(m - 1, rng);
  w /= w.norm();
  std::uniform_real_distribution<double> scale(0.5, 2.0);
  Vector u = frame.vector(0);
  for (Index i = 1; i < m; ++i) u += w(i - 1) * frame.vector(i);
  return scale(rng) * u;
}

/// Spectrum values expanded by multiplicity.
inline std::vector<double> expand(const std::vector<std::pair<double, int>>& groups) {
  std::vector<double> out;
  for (const auto& [v, k] : groups) out.insert(out.end(), static_cast<std::size_t>(k), v);
  return out;
}

/// The groups of a SpectralData as (value, multiplicity) pairs.
inline std::vector<std::pair<double, int>> groups(const SpectralData& s) {
  std::vector<std::pair<double, int>> out;
  for (std::size_t i = 0; i < s.multiplicities.size(); ++i) {
    out.emplace_back(s.group_values[i], s.multiplicities[i]);
  }
  return out;
}

inline bool same_groups(const SpectralData& s, const std::vector<std::pair<double, int>>& expected,
                        double tol) {
  const auto got = groups(s);
  if (got.size() != expected.size()) return false;
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (got[i].second != expected[i].second) return false;
    if (std::abs(got[i].first - expected[i].first) > tol) return false;
  }
  return true;
}

}  // namespace support
