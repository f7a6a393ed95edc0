#pragma once

#include "hkpr/error.hpp"
#include "hkpr/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace hkpr {

/// Dense symmetric matrix stored row-major.
class SymmetricMatrix {
public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }

  double max_asymmetry() const noexcept {
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
    return worst;
  }

private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct EigenDecomposition {
  std::vector<double> values;               // ascending
  std::vector<std::vector<double>> vectors; // vectors[k] pairs with values[k]
  std::size_t sweeps = 0;
};

/// Cyclic Jacobi eigensolver. Rotations are applied until the off-diagonal
/// Frobenius norm is negligible relative to the matrix norm.
inline EigenDecomposition jacobi_eigen(SymmetricMatrix a, std::size_t max_sweeps = 100) {
  const std::size_t n = a.size();
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) total += a(i, j) * a(i, j);
  total = std::sqrt(total);

  EigenDecomposition out;
  for (; out.sweeps < max_sweeps; ++out.sweeps) {
    if (off_norm() <= 1e-15 * std::max(total, 1e-300)) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
  for (std::size_t i : idx) {
    out.values.push_back(a(i, i));
    std::vector<double> col(n);
    for (std::size_t k = 0; k < n; ++k) col[k] = v[k * n + i];
    out.vectors.push_back(std::move(col));
  }
  return out;
}

/// ||A x - lambda x||_2 for unit x.
inline double eigen_residual(const SymmetricMatrix& a, const std::vector<double>& x, double lambda) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) row += a(i, j) * x[j];
    s += (row - lambda * x[i]) * (row - lambda * x[i]);
  }
  return std::sqrt(s);
}

/// L_S = I - D_S^{-1/2} A_S D_S^{-1/2}, rows and columns indexed by the sorted
/// members of S. Degrees are those of the full graph.
struct RestrictedLaplacian {
  std::vector<Vertex> index;
  SymmetricMatrix matrix;
};

inline constexpr std::size_t kMaxDirichletSize = 500;

inline RestrictedLaplacian restricted_laplacian(const Graph& g, const VertexSet& s) {
  detail::require(!s.empty(), "Dirichlet eigenvalue of an empty set");
  if (s.size() > kMaxDirichletSize) {
    throw InvalidArgument("dense Dirichlet eigensolve limited to " + std::to_string(kMaxDirichletSize) +
                          " vertices, got " + std::to_string(s.size()));
  }
  RestrictedLaplacian lap;
  lap.index.assign(s.members().begin(), s.members().end());
  const std::size_t k = lap.index.size();
  lap.matrix = SymmetricMatrix(k);
  for (std::size_t i = 0; i < k; ++i) {
    const Vertex u = lap.index[i];
    if (g.degree(u) == 0) throw InvalidArgument("vertex " + std::to_string(u) + " in S has degree 0");
    lap.matrix(i, i) = 1.0;
  }
  for (std::size_t i = 0; i < k; ++i) {
    const Vertex u = lap.index[i];
    for (std::size_t j = i + 1; j < k; ++j) {
      const Vertex w = lap.index[j];
      if (g.has_edge(u, w)) {
        const double x = -1.0 / std::sqrt(static_cast<double>(g.degree(u)) * static_cast<double>(g.degree(w)));
        lap.matrix(i, j) = lap.matrix(j, i) = x;
      }
    }
  }
  return lap;
}

struct DirichletEigen {
  double lambda = 0.0;
  std::vector<double> vector;
  double residual = 0.0;
};

/// Smallest Dirichlet eigenvalue lambda_S of S with its eigenvector and the
/// achieved residual ||L_S x - lambda x||.
inline DirichletEigen dirichlet_eigen(const Graph& g, const VertexSet& s) {
  const RestrictedLaplacian lap = restricted_laplacian(g, s);
  EigenDecomposition eig = jacobi_eigen(lap.matrix);
  DirichletEigen out;
  out.lambda = eig.values.front();
  out.vector = std::move(eig.vectors.front());
  out.residual = eigen_residual(lap.matrix, out.vector, out.lambda);
  return out;
}

inline double dirichlet_lambda(const Graph& g, const VertexSet& s) { return dirichlet_eigen(g, s).lambda; }

} // namespace hkpr
