#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace lralp {

/**
 * Inequality-form linear program
 *
 *     minimize    objective' x
 *     subject to  constraints x >= rhs,   x free.
 *
 * Every linear program in this project is solved in this form.
 */
struct LpProblem {
  Eigen::MatrixXd constraints;  // u x v
  Eigen::VectorXd rhs;          // u
  Eigen::VectorXd objective;    // v

  void validate() const;
  Eigen::Index n_rows() const { return constraints.rows(); }
  Eigen::Index n_cols() const { return constraints.cols(); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus status);

/**
 * Solver outcome. Exactly one of the three statuses, each with its witness:
 *  - Optimal:    x, objective value, and a dual vector y >= 0 with
 *                A'y = objective and b'y = value (up to tolerances);
 *  - Infeasible: certificate y >= 0 with A'y = 0 and b'y > 0;
 *  - Unbounded:  certificate ray d with A d >= 0 and objective' d < 0.
 */
struct LpOutcome {
  LpStatus status = LpStatus::Optimal;
  Eigen::VectorXd x;
  double objective = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd dual;
  Eigen::VectorXd certificate;
};

/// Raised when the pivot budget is exhausted or a claimed status fails its
/// certificate check. Callers never receive a wrong status silently.
class NumericallyStalled : public std::runtime_error {
 public:
  explicit NumericallyStalled(const std::string& what)
      : std::runtime_error(what) {}
};

struct SimplexOptions {
  double feasibility_tol = 1e-7;  // relative primal feasibility
  double reduced_cost_tol = 1e-9;
  int max_pivots = 0;  // 0 = automatic bound from the problem size
};

/**
 * Revised simplex over the standard-form embedding of LpProblem.
 *
 * Free variables are split as x = x+ - x-, inequality rows get slacks and a
 * two-phase start with artificial columns. Pricing is most-negative reduced
 * cost; Bland's rule engages after 2(u+v) consecutive degenerate pivots and
 * disengages once the objective strictly improves.
 *
 * A solver instance owns its workspace: distinct instances may run
 * concurrently, a single instance must not.
 */
class SimplexSolver {
 public:
  explicit SimplexSolver(SimplexOptions options = {});

  LpOutcome solve(const LpProblem& problem);

  /**
   * Solves a family of programs sharing (constraints, rhs) and differing only
   * in the objective (one per column of `objectives`). The optimal basis of
   * each solve warm-starts the next, which skips phase one. Results are
   * identical to solving each problem independently in column order.
   */
  std::vector<LpOutcome> solve_batch(const Eigen::MatrixXd& constraints,
                                     const Eigen::VectorXd& rhs,
                                     const Eigen::MatrixXd& objectives);

 private:
  struct Standard;  // standard-form workspace, defined in lp.cpp
  LpOutcome solve_with_start(const LpProblem& problem,
                             std::vector<int>* basis_in_out);
  SimplexOptions options_;
};

/// One-shot convenience wrapper around SimplexSolver.
LpOutcome solve_lp(const LpProblem& problem, SimplexOptions options = {});

/**
 * Decides whether the cone {A'y : y >= 0} contains d, i.e. whether the dual
 * of min{d'x : Ax >= b} is feasible. Primal boundedness for every rhs is
 * equivalent to this.
 */
bool check_dual_feasibility(const Eigen::MatrixXd& constraints,
                            const Eigen::VectorXd& objective);

}  // namespace lralp
