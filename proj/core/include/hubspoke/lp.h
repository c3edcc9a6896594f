#ifndef HUBSPOKE_LP_H_
#define HUBSPOKE_LP_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace hubspoke::lp {

enum class RowSense { kLe, kGe, kEq };

struct Row {
  std::vector<std::pair<int, double>> terms;
  RowSense sense = RowSense::kLe;
  double rhs = 0.0;
};

// min cost'x subject to rows and lower <= x <= upper. Structural bounds must
// be finite.
struct Problem {
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<Row> rows;

  int num_vars() const { return static_cast<int>(cost.size()); }
  int add_var(double c, double lo, double hi);
};

enum class Status { kOptimal, kInfeasible, kIterationLimit };

// Bounded dual simplex on a dense tableau. The all-slack starting basis is
// dual feasible because every structural sits at the bound its cost prefers,
// so no phase one is needed. Bound changes keep the current basis, which
// makes the object cheap to copy and re-solve inside branch-and-bound.
class DualSimplex {
 public:
  explicit DualSimplex(const Problem& problem);

  Status solve(std::int64_t max_iterations = 200000);

  void set_bounds(int var, double lower, double upper);
  void fix(int var, double value) { set_bounds(var, value, value); }

  double objective() const;
  std::vector<double> values() const;
  double value(int var) const { return x_[static_cast<std::size_t>(var)]; }
  std::int64_t iterations() const { return iterations_; }
  int rows() const { return m_; }
  int structural_count() const { return n_struct_; }

 private:
  double& t(int row, int col) { return tableau_[static_cast<std::size_t>(row) * cols_ + col]; }
  double t(int row, int col) const {
    return tableau_[static_cast<std::size_t>(row) * cols_ + col];
  }
  double infeasibility(int row) const;
  void pivot(int row, int col);
  void recompute_basic_values();
  int choose_leaving(bool bland) const;
  int choose_entering(int row, bool bland) const;

  int m_ = 0;
  int n_struct_ = 0;
  int cols_ = 0;
  std::vector<double> tableau_;  // B^-1 [A | I], row-major
  std::vector<double> beta_;     // B^-1 b
  std::vector<double> reduced_;  // reduced costs
  std::vector<double> cost_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> x_;
  std::vector<int> basis_;     // column basic in each row
  std::vector<int> position_;  // row of a basic column, -1 when nonbasic
  std::int64_t iterations_ = 0;
};

}  // namespace hubspoke::lp

#endif  // HUBSPOKE_LP_H_
