#include "dwave/tridiag.hpp"

#include <cmath>

namespace dwave {

TridiagSolver::TridiagSolver(std::vector<double> lower, std::vector<double> diag,
                             std::vector<double> upper) {
  factor(std::move(lower), std::move(diag), std::move(upper));
}

void TridiagSolver::factor(std::vector<double> lower, std::vector<double> diag,
                           std::vector<double> upper) {
  const size_t n = diag.size();
  if (lower.size() + 1 != n || upper.size() + 1 != n)
    throw std::invalid_argument("TridiagSolver: band sizes must be n-1, n, n-1");
  lower_ = std::move(lower);
  diag_ = std::move(diag);
  upper_ = std::move(upper);
  // forward elimination of the lower band; store multipliers in lower_
  for (size_t j = 1; j < n; ++j) {
    if (diag_[j - 1] == 0.0) throw std::runtime_error("TridiagSolver: zero pivot");
    const double m = lower_[j - 1] / diag_[j - 1];
    lower_[j - 1] = m;
    diag_[j] -= m * upper_[j - 1];
  }
  if (n > 0 && diag_[n - 1] == 0.0) throw std::runtime_error("TridiagSolver: zero pivot");
}

void TridiagSolver::solve(std::vector<double>& rhs) const {
  const size_t n = diag_.size();
  if (rhs.size() != n) throw std::invalid_argument("TridiagSolver: rhs size mismatch");
  for (size_t j = 1; j < n; ++j) rhs[j] -= lower_[j - 1] * rhs[j - 1];
  rhs[n - 1] /= diag_[n - 1];
  for (size_t j = n - 1; j-- > 0;) rhs[j] = (rhs[j] - upper_[j] * rhs[j + 1]) / diag_[j];
}

}  // namespace dwave
