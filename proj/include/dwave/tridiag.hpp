#pragma once

#include <stdexcept>
#include <vector>

namespace dwave {

// Thomas solve of a tridiagonal system. `lower`, `diag`, `upper` have sizes n-1, n, n-1.
// Factorization is cached so that systems with a fixed matrix amortize to one backsolve.
class TridiagSolver {
 public:
  TridiagSolver() = default;
  TridiagSolver(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper);

  void factor(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper);

  // Solves in place.
  void solve(std::vector<double>& rhs) const;

  int size() const { return static_cast<int>(diag_.size()); }

 private:
  std::vector<double> lower_, diag_, upper_;  // diag_ holds the eliminated pivots
  mutable std::vector<double> scratch_;
};

}  // namespace dwave
