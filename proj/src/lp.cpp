#include "lralp/lp.hpp"

#include "lralp/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lralp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_abs(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

}  // namespace

void LpProblem::validate() const {
  require(constraints.rows() >= 1 && constraints.cols() >= 1,
          "LpProblem: constraint matrix must be at least 1x1");
  require(rhs.size() == constraints.rows(),
          "LpProblem: rhs length does not match row count");
  require(objective.size() == constraints.cols(),
          "LpProblem: objective length does not match column count");
  require(constraints.allFinite() && rhs.allFinite() && objective.allFinite(),
          "LpProblem: entries must be finite");
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

/**
 * Standard-form workspace for
 *     min cost' z   s.t.  G z = b,  z >= 0
 * with column layout [x+ | x- | slack | artificial] of sizes [v, v, u, u].
 */
struct SimplexSolver::Standard {
  int u = 0, v = 0;
  int n_real = 0;   // 2v + u, columns eligible in phase 2
  int n_total = 0;  // n_real + u
  Eigen::MatrixXd G;
  Eigen::VectorXd b;
  Eigen::VectorXd phase1_cost;
  Eigen::VectorXd phase2_cost;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  Eigen::VectorXd x_basic;
  Eigen::VectorXd dual;

  void assemble(const Eigen::MatrixXd& A, const Eigen::VectorXd& rhs) {
    u = static_cast<int>(A.rows());
    v = static_cast<int>(A.cols());
    n_real = 2 * v + u;
    n_total = n_real + u;
    G.setZero(u, n_total);
    G.leftCols(v) = A;
    G.middleCols(v, v) = -A;
    G.middleCols(2 * v, u) = -Eigen::MatrixXd::Identity(u, u);
    for (int i = 0; i < u; ++i)
      G(i, n_real + i) = rhs(i) >= 0.0 ? 1.0 : -1.0;
    b = rhs;
    phase1_cost.setZero(n_total);
    phase1_cost.tail(u).setConstant(1.0);
    phase2_cost.setZero(n_total);
  }

  void set_objective(const Eigen::VectorXd& d) {
    phase2_cost.head(v) = d;
    phase2_cost.segment(v, v) = -d;
  }

  void factorize(const std::vector<int>& basis) {
    Eigen::MatrixXd B(u, u);
    for (int i = 0; i < u; ++i) B.col(i) = G.col(basis[i]);
    lu.compute(B);
    x_basic = lu.solve(b);
  }

  void price(const Eigen::VectorXd& cost, const std::vector<int>& basis) {
    Eigen::VectorXd cost_basic(u);
    for (int i = 0; i < u; ++i) cost_basic(i) = cost(basis[i]);
    dual = lu.transpose().solve(cost_basic);
  }

  Eigen::VectorXd primal_x(const std::vector<int>& basis) const {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n_total);
    for (int i = 0; i < u; ++i) z(basis[i]) = std::max(x_basic(i), 0.0);
    return z.head(v) - z.segment(v, v);
  }
};

SimplexSolver::SimplexSolver(SimplexOptions options) : options_(options) {}

namespace {

enum class CoreStatus { Converged, Unbounded, OutOfPivots, LostFeasibility };

struct CoreResult {
  CoreStatus status = CoreStatus::Converged;
  int entering = -1;               // set when Unbounded
  Eigen::VectorXd direction;       // basic components of the unbounded ray
};

}  // namespace

LpOutcome SimplexSolver::solve(const LpProblem& problem) {
  std::vector<int> basis;
  return solve_with_start(problem, &basis);
}

std::vector<LpOutcome> SimplexSolver::solve_batch(
    const Eigen::MatrixXd& constraints, const Eigen::VectorXd& rhs,
    const Eigen::MatrixXd& objectives) {
  std::vector<LpOutcome> outcomes;
  outcomes.reserve(objectives.cols());
  std::vector<int> basis;  // carried across objectives
  for (Eigen::Index j = 0; j < objectives.cols(); ++j) {
    LpProblem problem{constraints, rhs, objectives.col(j)};
    outcomes.push_back(solve_with_start(problem, &basis));
  }
  return outcomes;
}

LpOutcome SimplexSolver::solve_with_start(const LpProblem& problem,
                                          std::vector<int>* basis_in_out) {
  problem.validate();
  Standard std_form;
  std_form.assemble(problem.constraints, problem.rhs);
  std_form.set_objective(problem.objective);

  const int u = std_form.u;
  const int v = std_form.v;
  const double b_scale = 1.0 + max_abs(std_form.b);
  const double feas_tol = options_.feasibility_tol * b_scale;
  const int bland_threshold = 2 * (u + v);
  int pivots_left = options_.max_pivots > 0
                        ? options_.max_pivots
                        : 2000 + 200 * (u + v);

  // One pass of the simplex loop on the given cost vector. Columns in
  // [0, enter_limit) may enter; basic artificials leave at ratio zero the
  // moment a direction touches them.
  auto run = [&](const Eigen::VectorXd& cost, int enter_limit,
                 std::vector<int>& basis) -> CoreResult {
    const double cost_scale = 1.0 + max_abs(cost);
    const double enter_tol = options_.reduced_cost_tol * cost_scale;
    int consecutive_degenerate = 0;
    bool bland = false;
    for (;;) {
      if (pivots_left-- <= 0) return {CoreStatus::OutOfPivots, -1, {}};
      std_form.factorize(basis);
      if (!std_form.x_basic.allFinite())
        return {CoreStatus::OutOfPivots, -1, {}};
      if (std_form.x_basic.minCoeff() < -10.0 * feas_tol)
        return {CoreStatus::LostFeasibility, -1, {}};
      std_form.price(cost, basis);

      // Pricing: most negative reduced cost, or first negative under Bland.
      std::vector<char> is_basic(std_form.n_total, 0);
      for (int i = 0; i < u; ++i) is_basic[basis[i]] = 1;
      int entering = -1;
      double best = -enter_tol;
      for (int j = 0; j < enter_limit; ++j) {
        if (is_basic[j]) continue;
        const double reduced = cost(j) - std_form.dual.dot(std_form.G.col(j));
        if (reduced < best) {
          entering = j;
          if (bland) break;
          best = reduced;
        }
      }
      if (entering < 0) return {CoreStatus::Converged, -1, {}};

      const Eigen::VectorXd direction = std_form.lu.solve(std_form.G.col(entering));
      // Ratio test. Any meaningfully positive component blocks; the
      // tolerance is absolute, since the direction's scale says nothing
      // about how fast a row hits zero.
      constexpr double pivot_tol = 1e-9;
      int leaving = -1;
      double best_ratio = kInf;
      for (int i = 0; i < u; ++i) {
        const bool zero_artificial =
            basis[i] >= std_form.n_real &&
            std_form.x_basic(i) <= 1e-9 * b_scale;
        double ratio = kInf;
        if (direction(i) > pivot_tol) {
          ratio = std::max(std_form.x_basic(i), 0.0) / direction(i);
        } else if (zero_artificial && direction(i) < -pivot_tol) {
          ratio = 0.0;  // an artificial cleared by phase 1 may not regrow
        } else {
          continue;
        }
        const double tie = 1e-9 * (1.0 + std::min(best_ratio, ratio));
        if (ratio < best_ratio - tie) {
          best_ratio = ratio;
          leaving = i;
        } else if (ratio <= best_ratio + tie && leaving >= 0) {
          if (bland ? basis[i] < basis[leaving]
                    : std::abs(direction(i)) > std::abs(direction(leaving)))
            leaving = i;
        }
      }
      if (leaving < 0)
        return {CoreStatus::Unbounded, entering, direction};

      basis[leaving] = entering;
      if (best_ratio <= 1e-12 * b_scale) {
        if (++consecutive_degenerate >= bland_threshold) bland = true;
      } else {
        consecutive_degenerate = 0;
        bland = false;
      }
    }
  };

  // Phase one unless the supplied basis is already primal feasible; a lost
  // basis mid-flight falls back to a fresh phase one once.
  std::vector<int>& basis = *basis_in_out;
  CoreResult phase2;
  for (int attempt = 0;; ++attempt) {
    bool warm = attempt == 0 && basis.size() == static_cast<std::size_t>(u);
    if (warm) {
      std_form.factorize(basis);
      warm = std_form.x_basic.allFinite() &&
             (std_form.x_basic.array() >= -feas_tol).all();
      // A basis carrying a positive artificial encodes infeasibility, not a
      // usable phase-2 start.
      for (int i = 0; warm && i < u; ++i)
        if (basis[i] >= std_form.n_real &&
            std_form.x_basic(i) > 1e-9 * b_scale)
          warm = false;
    }
    if (!warm) {
      basis.resize(u);
      for (int i = 0; i < u; ++i) basis[i] = std_form.n_real + i;
      // Artificials start basic and may never re-enter once they leave.
      CoreResult phase1 = run(std_form.phase1_cost, std_form.n_real, basis);
      if (phase1.status != CoreStatus::Converged)
        throw NumericallyStalled("simplex: phase 1 did not converge");
      std_form.factorize(basis);
      double infeasibility = 0.0;
      for (int i = 0; i < u; ++i)
        if (basis[i] >= std_form.n_real)
          infeasibility += std::max(std_form.x_basic(i), 0.0);
      if (infeasibility > feas_tol) {
        std_form.price(std_form.phase1_cost, basis);
        Eigen::VectorXd farkas = std_form.dual;
        const double scale = std::max(1.0, max_abs(farkas));
        farkas /= scale;
        const double eq_err =
            max_abs(problem.constraints.transpose() * farkas);
        const double gain = problem.rhs.dot(farkas);
        if ((farkas.array() < -1e-7).any() || eq_err > 1e-6 || gain <= 0.0)
          throw NumericallyStalled(
              "simplex: infeasibility certificate failed verification");
        LpOutcome outcome;
        outcome.status = LpStatus::Infeasible;
        outcome.certificate = farkas;
        return outcome;
      }
    }

    phase2 = run(std_form.phase2_cost, std_form.n_real, basis);
    if (phase2.status == CoreStatus::OutOfPivots)
      throw NumericallyStalled("simplex: pivot budget exhausted in phase 2");
    if (phase2.status == CoreStatus::LostFeasibility) {
      if (attempt >= 1)
        throw NumericallyStalled("simplex: basis feasibility lost twice");
      basis.clear();
      continue;
    }
    break;
  }

  if (phase2.status == CoreStatus::Unbounded) {
    Eigen::VectorXd z_dir = Eigen::VectorXd::Zero(std_form.n_total);
    z_dir(phase2.entering) = 1.0;
    for (int i = 0; i < u; ++i) z_dir(basis[i]) -= phase2.direction(i);
    Eigen::VectorXd ray = z_dir.head(v) - z_dir.segment(v, v);
    const double scale = std::max(1.0, max_abs(ray));
    ray /= scale;
    const Eigen::VectorXd violation = problem.constraints * ray;
    if ((violation.array() < -1e-6).any() ||
        problem.objective.dot(ray) >= -1e-12)
      throw NumericallyStalled(
          "simplex: unboundedness certificate failed verification");
    LpOutcome outcome;
    outcome.status = LpStatus::Unbounded;
    outcome.certificate = ray;
    return outcome;
  }

  std_form.factorize(basis);
  std_form.price(std_form.phase2_cost, basis);
  LpOutcome outcome;
  outcome.status = LpStatus::Optimal;
  outcome.x = std_form.primal_x(basis);
  outcome.objective = problem.objective.dot(outcome.x);
  outcome.dual = std_form.dual;

  // A claimed optimum must verify; a wrong status is never returned.
  const Eigen::VectorXd slack =
      problem.constraints * outcome.x - problem.rhs;
  for (Eigen::Index i = 0; i < slack.size(); ++i)
    if (slack(i) < -options_.feasibility_tol * (1.0 + std::abs(problem.rhs(i))))
      throw NumericallyStalled("simplex: optimal point violates feasibility");
  const double dual_err =
      max_abs(problem.constraints.transpose() * outcome.dual -
              problem.objective);
  const double gap =
      std::abs(outcome.objective - problem.rhs.dot(outcome.dual));
  const double obj_scale = 1.0 + std::abs(outcome.objective);
  if ((outcome.dual.array() < -1e-7).any() ||
      dual_err > 1e-6 * (1.0 + max_abs(problem.objective)) ||
      gap > 1e-6 * obj_scale)
    throw NumericallyStalled("simplex: dual certificate failed verification");
  return outcome;
}

LpOutcome solve_lp(const LpProblem& problem, SimplexOptions options) {
  return SimplexSolver(options).solve(problem);
}

bool check_dual_feasibility(const Eigen::MatrixXd& constraints,
                            const Eigen::VectorXd& objective) {
  const Eigen::Index u = constraints.rows();
  const Eigen::Index v = constraints.cols();
  require(u >= 1 && v >= 1, "check_dual_feasibility: empty system");
  require(objective.size() == v,
          "check_dual_feasibility: objective length mismatch");
  // Feasibility of {y >= 0 : A'y = d} as an LP over y with zero objective.
  Eigen::MatrixXd rows(2 * v + u, u);
  rows.topRows(v) = constraints.transpose();
  rows.middleRows(v, v) = -constraints.transpose();
  rows.bottomRows(u) = Eigen::MatrixXd::Identity(u, u);
  Eigen::VectorXd rhs(2 * v + u);
  rhs.head(v) = objective;
  rhs.segment(v, v) = -objective;
  rhs.tail(u).setZero();
  LpProblem probe{rows, rhs, Eigen::VectorXd::Zero(u)};
  return solve_lp(probe).status == LpStatus::Optimal;
}

}  // namespace lralp
