// Linear program construction and the solver contract shared by every
// bound computation. Programs are built row-sparse, solved by an internal
// two-phase revised simplex, and can be dumped in LP text format for
// cross-checking with independent solvers.
#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dicap/rational.hpp"

namespace dicap {

// The solver did not converge; callers surface this, never substitute.
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Relation { le, eq };

enum class LPStatus { optimal, infeasible, unbounded };

class LinearProgram {
 public:
  // Variables default to lower bound 0; free variables must say so.
  int add_variable(double objective_coeff = 0.0, bool free = false, std::string name = {});
  int add_row(Relation rel, double rhs, std::string name = {});
  void add_coeff(int row, int var, double coeff);
  void set_objective(int var, double coeff);

  int num_variables() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  std::size_t num_nonzeros() const;
  const std::string& variable_name(int var) const { return vars_[static_cast<std::size_t>(var)].name; }
  const std::string& row_name(int row) const { return rows_[static_cast<std::size_t>(row)].name; }
  Relation row_relation(int row) const { return rows_[static_cast<std::size_t>(row)].rel; }
  double row_rhs(int row) const { return rows_[static_cast<std::size_t>(row)].rhs; }
  const std::vector<std::pair<int, double>>& row_coeffs(int row) const {
    return rows_[static_cast<std::size_t>(row)].coeffs;
  }
  bool variable_free(int var) const { return vars_[static_cast<std::size_t>(var)].free; }
  double objective_coeff(int var) const { return vars_[static_cast<std::size_t>(var)].obj; }

 private:
  struct Var {
    double obj = 0.0;
    bool free = false;
    std::string name;
  };
  struct Row {
    Relation rel = Relation::le;
    double rhs = 0.0;
    std::string name;
    std::vector<std::pair<int, double>> coeffs;
  };
  std::vector<Var> vars_;
  std::vector<Row> rows_;
};

struct LPSolution {
  LPStatus status = LPStatus::optimal;
  double value = 0.0;                     // objective (maximization)
  std::vector<double> primal;             // per declared variable
  std::vector<double> duals;              // per row; >= 0 for binding "<=" rows
  std::optional<Rational> rational_value; // reconstruction with denominator <= 64
};

struct SolverConfig {
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-7;
  // Reads IC_SOLVER_TOL from the environment; when set it overrides both.
  static SolverConfig from_env();
};

// Maximizes the objective. Deterministic for a fixed variable/row order.
LPSolution solve(const LinearProgram& lp);
LPSolution solve(const LinearProgram& lp, const SolverConfig& config);

// CPLEX LP text format.
void dump_lp(const LinearProgram& lp, std::ostream& out);

}  // namespace dicap
