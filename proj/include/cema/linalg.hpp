#pragma once

#include <vector>

#include "cema/graph.hpp"

namespace cema {

// Dense symmetric matrix, row-major.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int order) : n_(order), a_(static_cast<std::size_t>(order) * static_cast<std::size_t>(order), 0.0) {}

  int order() const { return n_; }
  double operator()(int i, int j) const { return a_[index(i, j)]; }
  // Writes both (i,j) and (j,i).
  void set(int i, int j, double value) {
    a_[index(i, j)] = value;
    a_[index(j, i)] = value;
  }
  double trace() const;
  double frobenius_squared() const;

  const std::vector<double>& data() const { return a_; }

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }

  int n_ = 0;
  std::vector<double> a_;
};

inline constexpr double kDefaultEigenTolerance = 1e-12;
inline constexpr int kMaxJacobiSweeps = 50;

// L = D - A.
SymMatrix laplacian(const Graph& g);

// Eigenvalues in non-decreasing order by cyclic Jacobi rotations. Sweeps
// stop once the off-diagonal Frobenius norm drops below
// tol * max(1, ||M||_F); NumericalFailure after kMaxJacobiSweeps sweeps.
std::vector<double> sym_eigenvalues(const SymMatrix& m, double tol = kDefaultEigenTolerance);

// Largest Laplacian eigenvalue.
double lap_spectral_radius(const Graph& g);

}  // namespace cema
