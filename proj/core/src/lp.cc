#include "hubspoke/lp.h"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hubspoke::lp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPrimalTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kRatioTieTol = 1e-12;

}  // namespace

int Problem::add_var(double c, double lo, double hi) {
  cost.push_back(c);
  lower.push_back(lo);
  upper.push_back(hi);
  return num_vars() - 1;
}

DualSimplex::DualSimplex(const Problem& problem)
    : m_(static_cast<int>(problem.rows.size())),
      n_struct_(problem.num_vars()),
      cols_(n_struct_ + m_) {
  for (int j = 0; j < n_struct_; ++j) {
    if (!std::isfinite(problem.lower[j]) || !std::isfinite(problem.upper[j])) {
      throw std::invalid_argument("structural variables need finite bounds");
    }
  }
  tableau_.assign(static_cast<std::size_t>(m_) * cols_, 0.0);
  beta_.resize(m_);
  cost_.assign(cols_, 0.0);
  lower_.assign(cols_, 0.0);
  upper_.assign(cols_, 0.0);
  x_.assign(cols_, 0.0);
  basis_.resize(m_);
  position_.assign(cols_, -1);

  for (int j = 0; j < n_struct_; ++j) {
    cost_[j] = problem.cost[j];
    lower_[j] = problem.lower[j];
    upper_[j] = problem.upper[j];
    x_[j] = cost_[j] >= 0.0 ? lower_[j] : upper_[j];
  }
  for (int i = 0; i < m_; ++i) {
    const Row& row = problem.rows[i];
    for (const auto& [var, coef] : row.terms) t(i, var) += coef;
    const int slack = n_struct_ + i;
    t(i, slack) = 1.0;
    beta_[i] = row.rhs;
    switch (row.sense) {
      case RowSense::kLe:
        lower_[slack] = 0.0;
        upper_[slack] = kInf;
        break;
      case RowSense::kGe:
        lower_[slack] = -kInf;
        upper_[slack] = 0.0;
        break;
      case RowSense::kEq:
        break;
    }
    basis_[i] = slack;
    position_[slack] = i;
  }
  reduced_ = cost_;
  recompute_basic_values();
}

void DualSimplex::recompute_basic_values() {
  for (int i = 0; i < m_; ++i) {
    double v = beta_[i];
    const double* row = &tableau_[static_cast<std::size_t>(i) * cols_];
    for (int j = 0; j < cols_; ++j) {
      if (position_[j] < 0 && x_[j] != 0.0) v -= row[j] * x_[j];
    }
    x_[basis_[i]] = v;
  }
}

double DualSimplex::infeasibility(int row) const {
  const int b = basis_[row];
  const double v = x_[b];
  if (v < lower_[b] - kPrimalTol * (1.0 + std::abs(lower_[b]))) return lower_[b] - v;
  if (v > upper_[b] + kPrimalTol * (1.0 + std::abs(upper_[b]))) return v - upper_[b];
  return 0.0;
}

int DualSimplex::choose_leaving(bool bland) const {
  int best = -1;
  double best_val = 0.0;
  for (int i = 0; i < m_; ++i) {
    const double inf = infeasibility(i);
    if (inf <= 0.0) continue;
    if (bland) {
      if (best < 0 || basis_[i] < basis_[best]) best = i;
    } else if (inf > best_val) {
      best = i;
      best_val = inf;
    }
  }
  return best;
}

int DualSimplex::choose_entering(int row, bool bland) const {
  const int b = basis_[row];
  const bool increase = x_[b] < lower_[b];
  int best = -1;
  double best_ratio = kInf;
  double best_alpha = 0.0;
  const double* trow = &tableau_[static_cast<std::size_t>(row) * cols_];
  for (int j = 0; j < cols_; ++j) {
    if (position_[j] >= 0) continue;
    if (upper_[j] - lower_[j] <= 0.0) continue;
    const double alpha = trow[j];
    if (std::abs(alpha) < kPivotTol) continue;
    const bool at_upper = std::isfinite(upper_[j]) && x_[j] >= upper_[j];
    const bool at_lower = !at_upper;
    bool eligible;
    if (increase) {
      eligible = (at_lower && alpha < 0.0) || (at_upper && alpha > 0.0);
    } else {
      eligible = (at_lower && alpha > 0.0) || (at_upper && alpha < 0.0);
    }
    if (!eligible) continue;
    const double ratio = std::abs(reduced_[j]) / std::abs(alpha);
    if (best < 0 || ratio < best_ratio - kRatioTieTol) {
      best = j;
      best_ratio = ratio;
      best_alpha = std::abs(alpha);
    } else if (ratio <= best_ratio + kRatioTieTol && !bland &&
               std::abs(alpha) > best_alpha) {
      best = j;
      best_ratio = std::min(best_ratio, ratio);
      best_alpha = std::abs(alpha);
    }
  }
  return best;
}

void DualSimplex::pivot(int r, int q) {
  double* prow = &tableau_[static_cast<std::size_t>(r) * cols_];
  const double inv = 1.0 / prow[q];
  std::vector<int> nz;
  nz.reserve(static_cast<std::size_t>(cols_));
  for (int k = 0; k < cols_; ++k) {
    if (prow[k] != 0.0) {
      prow[k] *= inv;
      nz.push_back(k);
    }
  }
  prow[q] = 1.0;
  beta_[r] *= inv;
  for (int i = 0; i < m_; ++i) {
    if (i == r) continue;
    double* irow = &tableau_[static_cast<std::size_t>(i) * cols_];
    const double f = irow[q];
    if (f == 0.0) continue;
    for (int k : nz) irow[k] -= f * prow[k];
    irow[q] = 0.0;
    beta_[i] -= f * beta_[r];
  }
  const double f = reduced_[q];
  if (f != 0.0) {
    for (int k : nz) reduced_[k] -= f * prow[k];
  }
  reduced_[q] = 0.0;
  const int leaving = basis_[r];
  position_[leaving] = -1;
  basis_[r] = q;
  position_[q] = r;
}

Status DualSimplex::solve(std::int64_t max_iterations) {
  std::int64_t local = 0;
  const std::int64_t bland_after = 20LL * (m_ + cols_);
  int refreshes = 0;
  for (;;) {
    const bool bland = local > bland_after;
    const int r = choose_leaving(bland);
    if (r < 0) {
      // Guard against drift in the incrementally updated basic values.
      recompute_basic_values();
      if (choose_leaving(false) < 0 || ++refreshes > 3) return Status::kOptimal;
      continue;
    }
    const int q = choose_entering(r, bland);
    if (q < 0) return Status::kInfeasible;
    if (local >= max_iterations) return Status::kIterationLimit;

    const int b = basis_[r];
    const double target = x_[b] < lower_[b] ? lower_[b] : upper_[b];
    const double alpha = t(r, q);
    const double delta = (x_[b] - target) / alpha;
    if (delta != 0.0) {
      for (int i = 0; i < m_; ++i) {
        const double a = t(i, q);
        if (a != 0.0) x_[basis_[i]] -= a * delta;
      }
      x_[q] += delta;
    }
    x_[b] = target;
    pivot(r, q);
    ++local;
    ++iterations_;
  }
}

void DualSimplex::set_bounds(int var, double lower, double upper) {
  lower_[var] = lower;
  upper_[var] = upper;
  if (position_[var] >= 0) return;
  double next;
  if (lower == upper) {
    next = lower;
  } else if (reduced_[var] >= 0.0 && std::isfinite(lower)) {
    next = lower;
  } else if (std::isfinite(upper)) {
    next = upper;
  } else {
    next = lower;
  }
  const double delta = next - x_[var];
  if (delta == 0.0) return;
  for (int i = 0; i < m_; ++i) {
    const double a = t(i, var);
    if (a != 0.0) x_[basis_[i]] -= a * delta;
  }
  x_[var] = next;
}

double DualSimplex::objective() const {
  double obj = 0.0;
  for (int j = 0; j < n_struct_; ++j) obj += cost_[j] * x_[j];
  return obj;
}

std::vector<double> DualSimplex::values() const {
  return {x_.begin(), x_.begin() + n_struct_};
}

}  // namespace hubspoke::lp
