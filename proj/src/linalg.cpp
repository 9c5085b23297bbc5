#include "cema/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cema/errors.hpp"

namespace cema {

double SymMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double SymMatrix::frobenius_squared() const {
  double s = 0.0;
  for (double x : a_) s += x * x;
  return s;
}

SymMatrix laplacian(const Graph& g) {
  const int n = g.order();
  SymMatrix l(n);
  for (int i = 0; i < n; ++i) {
    l.set(i, i, static_cast<double>(g.degree(i)));
    for (Row r = g.row(i) >> i; r != 0; r &= r - 1) {
      const int j = i + std::countr_zero(r);
      if (j != i) l.set(i, j, -1.0);
    }
  }
  return l;
}

std::vector<double> sym_eigenvalues(const SymMatrix& m, double tol) {
  const int n = m.order();
  if (!(tol > 0.0)) throw InvalidInput("eigenvalue tolerance must be positive");
  std::vector<double> a = m.data();
  auto at = [&](int i, int j) -> double& {
    return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
  };
  const double threshold = tol * std::max(1.0, std::sqrt(m.frobenius_squared()));

  for (int sweep = 0;; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
    }
    off = std::sqrt(2.0 * off);
    if (!std::isfinite(off)) throw NumericalFailure("non-finite entries in Jacobi iteration");
    if (off < threshold) break;
    if (sweep == kMaxJacobiSweeps) {
      throw NumericalFailure("Jacobi eigensolver did not converge in " + std::to_string(kMaxJacobiSweeps) +
                             " sweeps (off-diagonal norm " + std::to_string(off) + ")");
    }
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double app = at(p, p);
        const double aqq = at(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        at(p, p) = app - t * apq;
        at(q, q) = aqq + t * apq;
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = at(r, p);
          const double arq = at(r, q);
          const double new_rp = arp - s * (arq + tau * arp);
          const double new_rq = arq + s * (arp - tau * arq);
          at(r, p) = new_rp;
          at(p, r) = new_rp;
          at(r, q) = new_rq;
          at(q, r) = new_rq;
        }
      }
    }
  }

  std::vector<double> eig(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

double lap_spectral_radius(const Graph& g) {
  if (g.order() < 1) throw InvalidInput("spectral radius needs at least one vertex");
  return sym_eigenvalues(laplacian(g)).back();
}

}  // namespace cema
