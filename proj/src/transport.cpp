#include "qrms/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qrms/errors.hpp"

namespace qrms {

double w2(const DiscreteDist& p, const DiscreteDist& q, const Tolerances& tol) {
  const auto& a = p.atoms();
  const auto& b = q.atoms();
  std::size_t i = 0, j = 0;
  double ca = a.empty() ? 0.0 : a[0].prob;
  double cb = b.empty() ? 0.0 : b[0].prob;
  double u = 0.0;
  double sum = 0.0;
  while (i < a.size() && j < b.size()) {
    const double next = std::min(ca, cb);
    const double d = a[i].value - b[j].value;
    // Breakpoints within the snap are one breakpoint: such segments have no width.
    if (next - u > tol.cumulative_snap) sum += (next - u) * d * d;
    u = std::max(u, next);
    // Snapping keeps round-off slivers from pairing the wrong atoms.
    const bool step_a = ca - next <= tol.cumulative_snap;
    const bool step_b = cb - next <= tol.cumulative_snap;
    if (step_a && ++i < a.size()) ca += a[i].prob;
    if (step_b && ++j < b.size()) cb += b[j].prob;
  }
  return std::sqrt(std::max(0.0, sum));
}

namespace {

// Dense tableau simplex for min c.x, A x = b, x >= 0 with b >= 0. Bland's
// rule guarantees termination on the degenerate transport polytope.
class Simplex {
 public:
  Simplex(std::vector<std::vector<double>> a, std::vector<double> b) : rows_(a.size()), vars_(a[0].size()) {
    const std::size_t cols = vars_ + rows_ + 1;
    t_.assign(rows_, std::vector<double>(cols, 0.0));
    basis_.resize(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      std::copy(a[r].begin(), a[r].end(), t_[r].begin());
      t_[r][vars_ + r] = 1.0;
      t_[r][cols - 1] = b[r];
      basis_[r] = vars_ + r;
    }
  }

  std::vector<double> solve(const std::vector<double>& cost) {
    std::vector<double> phase1(vars_ + rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) phase1[vars_ + r] = 1.0;
    run(phase1, vars_ + rows_);
    drive_out_artificials();
    std::vector<double> full(vars_ + rows_, 0.0);
    std::copy(cost.begin(), cost.end(), full.begin());
    run(full, vars_);
    std::vector<double> x(vars_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r)
      if (basis_[r] < vars_) x[basis_[r]] = t_[r].back();
    return x;
  }

 private:
  static constexpr double kEps = 1e-12;

  void pivot(std::size_t row, std::size_t col) {
    const double pv = t_[row][col];
    for (auto& v : t_[row]) v /= pv;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == row) continue;
      const double f = t_[r][col];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < t_[r].size(); ++c) t_[r][c] -= f * t_[row][c];
    }
    basis_[row] = col;
  }

  void run(const std::vector<double>& cost, std::size_t allowed) {
    for (int iter = 0; iter < 100000; ++iter) {
      std::size_t enter = allowed;
      for (std::size_t c = 0; c < allowed; ++c) {
        double z = 0.0;
        for (std::size_t r = 0; r < rows_; ++r) z += cost[basis_[r]] * t_[r][c];
        if (cost[c] - z < -kEps) {
          enter = c;
          break;
        }
      }
      if (enter == allowed) return;
      std::size_t leave = rows_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows_; ++r) {
        if (t_[r][enter] <= kEps) continue;
        const double ratio = t_[r].back() / t_[r][enter];
        if (ratio < best - kEps || (ratio <= best + kEps && leave < rows_ && basis_[r] < basis_[leave])) {
          best = std::min(best, ratio);
          leave = r;
        }
      }
      if (leave == rows_) throw Error(ErrorCode::InvalidArgument, "transport program unbounded");
      pivot(leave, enter);
    }
    throw Error(ErrorCode::InvalidArgument, "simplex iteration limit");
  }

  void drive_out_artificials() {
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < vars_) continue;
      for (std::size_t c = 0; c < vars_; ++c) {
        if (std::abs(t_[r][c]) > 1e-9) {
          pivot(r, c);
          break;
        }
      }
    }
  }

  std::size_t rows_, vars_;
  std::vector<std::vector<double>> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace

double w2_oracle(const DiscreteDist& p, const DiscreteDist& q) {
  constexpr std::size_t kMaxAtoms = 8;
  const auto& a = p.atoms();
  const auto& b = q.atoms();
  if (a.size() > kMaxAtoms || b.size() > kMaxAtoms) {
    throw Error(ErrorCode::TooLarge,
                "LP oracle limited to " + std::to_string(kMaxAtoms) + " atoms per distribution",
                static_cast<double>(std::max(a.size(), b.size())));
  }
  const std::size_t m = a.size(), n = b.size();
  std::vector<std::vector<double>> rows(m + n, std::vector<double>(m * n, 0.0));
  std::vector<double> rhs(m + n), cost(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      rows[i][i * n + j] = 1.0;
      rows[m + j][i * n + j] = 1.0;
      const double d = a[i].value - b[j].value;
      cost[i * n + j] = d * d;
    }
  }
  for (std::size_t i = 0; i < m; ++i) rhs[i] = a[i].prob;
  for (std::size_t j = 0; j < n; ++j) rhs[m + j] = b[j].prob;
  const auto x = Simplex(std::move(rows), std::move(rhs)).solve(cost);
  double sum = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (x[k] > 1e-14) sum += x[k] * cost[k];
  return std::sqrt(sum);
}

}  // namespace qrms
