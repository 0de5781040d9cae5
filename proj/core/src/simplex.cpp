// Two-phase revised simplex, maximization, with a dense LU-factorized basis
// and product-form eta updates between refactorizations. Sized for the
// programs this project builds: a few thousand rows, well-scaled +/-1-ish
// coefficients, optima on small rationals.
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <vector>

#include "dicap/lp.hpp"

namespace dicap {

SolverConfig SolverConfig::from_env() {
  SolverConfig config;
  if (const char* env = std::getenv("IC_SOLVER_TOL")) {
    char* end = nullptr;
    double tol = std::strtod(env, &end);
    if (end != env && tol > 0 && tol < 1e-1) {
      config.feasibility_tol = tol;
      config.optimality_tol = tol;
    }
  }
  return config;
}

int LinearProgram::add_variable(double objective_coeff, bool free, std::string name) {
  vars_.push_back({objective_coeff, free, std::move(name)});
  return static_cast<int>(vars_.size()) - 1;
}

int LinearProgram::add_row(Relation rel, double rhs, std::string name) {
  rows_.push_back({rel, rhs, std::move(name), {}});
  return static_cast<int>(rows_.size()) - 1;
}

void LinearProgram::add_coeff(int row, int var, double coeff) {
  if (var < 0 || var >= num_variables()) throw std::invalid_argument("add_coeff: undeclared variable");
  if (coeff == 0.0) return;
  rows_[static_cast<std::size_t>(row)].coeffs.emplace_back(var, coeff);
}

void LinearProgram::set_objective(int var, double coeff) {
  vars_[static_cast<std::size_t>(var)].obj = coeff;
}

std::size_t LinearProgram::num_nonzeros() const {
  std::size_t nnz = 0;
  for (const Row& r : rows_) nnz += r.coeffs.size();
  return nnz;
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr int kMaxEtas = 192;

struct Eta {
  int row;
  std::vector<double> w;  // entering column in basis coordinates at pivot time
};

class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SolverConfig& config) : lp_(lp), config_(config) { build(); }

  LPSolution run() {
    LPSolution out;
    if (need_phase1_) {
      if (iterate(phase1_cost_, /*phase1=*/true) == StepResult::iteration_limit) {
        throw NumericalFailure("simplex: phase 1 iteration limit");
      }
      double infeasibility = 0.0;
      for (int r = 0; r < m_; ++r) {
        if (is_artificial(basic_[static_cast<std::size_t>(r)])) {
          infeasibility += std::max(0.0, xb_[static_cast<std::size_t>(r)]);
        }
      }
      if (infeasibility > config_.feasibility_tol * scale_) {
        out.status = LPStatus::infeasible;
        return out;
      }
      refactorize();
    }
    StepResult result = iterate(cost_, /*phase1=*/false);
    if (result == StepResult::iteration_limit) throw NumericalFailure("simplex: phase 2 iteration limit");
    if (result == StepResult::unbounded) {
      out.status = LPStatus::unbounded;
      return out;
    }
    extract(out);
    return out;
  }

 private:
  enum class StepResult { optimal, unbounded, iteration_limit };

  bool is_artificial(int col) const { return col >= first_artificial_; }

  int add_col() {
    col_entries_.emplace_back();
    return static_cast<int>(col_entries_.size()) - 1;
  }

  void build() {
    const int user_vars = lp_.num_variables();
    m_ = lp_.num_rows();
    col_of_var_.resize(static_cast<std::size_t>(user_vars));
    neg_col_of_var_.assign(static_cast<std::size_t>(user_vars), -1);
    for (int v = 0; v < user_vars; ++v) {
      col_of_var_[static_cast<std::size_t>(v)] = add_col();
      if (lp_.variable_free(v)) neg_col_of_var_[static_cast<std::size_t>(v)] = add_col();
    }
    rhs_.resize(static_cast<std::size_t>(m_));
    row_flip_.assign(static_cast<std::size_t>(m_), false);
    scale_ = 1.0;
    for (int r = 0; r < m_; ++r) {
      double b = lp_.row_rhs(r);
      bool flip = b < 0.0;
      row_flip_[static_cast<std::size_t>(r)] = flip;
      rhs_[static_cast<std::size_t>(r)] = flip ? -b : b;
      scale_ = std::max(scale_, std::fabs(b));
      double sign = flip ? -1.0 : 1.0;
      for (auto [v, c] : lp_.row_coeffs(r)) {
        col_entries_[static_cast<std::size_t>(col_of_var_[static_cast<std::size_t>(v)])].emplace_back(r, sign * c);
        int neg = neg_col_of_var_[static_cast<std::size_t>(v)];
        if (neg >= 0) col_entries_[static_cast<std::size_t>(neg)].emplace_back(r, -sign * c);
      }
    }
    // Logical columns. A "<=" row with negative rhs was flipped to ">=",
    // which takes a surplus column and an artificial; "=" rows take an
    // artificial; plain "<=" rows start with their slack in the basis.
    basic_.assign(static_cast<std::size_t>(m_), -1);
    std::vector<int> artificial_rows;
    for (int r = 0; r < m_; ++r) {
      bool flip = row_flip_[static_cast<std::size_t>(r)];
      if (lp_.row_relation(r) == Relation::le) {
        int s = add_col();
        col_entries_[static_cast<std::size_t>(s)].emplace_back(r, flip ? -1.0 : 1.0);
        if (flip) {
          artificial_rows.push_back(r);
        } else {
          basic_[static_cast<std::size_t>(r)] = s;
        }
      } else {
        artificial_rows.push_back(r);
      }
    }
    first_artificial_ = static_cast<int>(col_entries_.size());
    need_phase1_ = !artificial_rows.empty();
    for (int r : artificial_rows) {
      int a = add_col();
      col_entries_[static_cast<std::size_t>(a)].emplace_back(r, 1.0);
      basic_[static_cast<std::size_t>(r)] = a;
    }
    const int ncols = static_cast<int>(col_entries_.size());
    cost_.assign(static_cast<std::size_t>(ncols), 0.0);
    for (int v = 0; v < user_vars; ++v) {
      cost_[static_cast<std::size_t>(col_of_var_[static_cast<std::size_t>(v)])] = lp_.objective_coeff(v);
      int neg = neg_col_of_var_[static_cast<std::size_t>(v)];
      if (neg >= 0) cost_[static_cast<std::size_t>(neg)] = -lp_.objective_coeff(v);
    }
    phase1_cost_.assign(static_cast<std::size_t>(ncols), 0.0);
    for (int c = first_artificial_; c < ncols; ++c) phase1_cost_[static_cast<std::size_t>(c)] = -1.0;
    in_basis_.assign(static_cast<std::size_t>(ncols), false);
    for (int r = 0; r < m_; ++r) in_basis_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(r)])] = true;
    lu_.assign(static_cast<std::size_t>(m_) * static_cast<std::size_t>(m_), 0.0);
    perm_.resize(static_cast<std::size_t>(m_));
    refactorize();
  }

  void refactorize() {
    std::fill(lu_.begin(), lu_.end(), 0.0);
    for (int k = 0; k < m_; ++k) {
      for (auto [r, v] : col_entries_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(k)])]) {
        lu_[static_cast<std::size_t>(r) * m_ + k] = v;
      }
    }
    for (int i = 0; i < m_; ++i) perm_[static_cast<std::size_t>(i)] = i;
    for (int k = 0; k < m_; ++k) {
      int piv = k;
      double best = std::fabs(lu_[static_cast<std::size_t>(k) * m_ + k]);
      for (int i = k + 1; i < m_; ++i) {
        double a = std::fabs(lu_[static_cast<std::size_t>(i) * m_ + k]);
        if (a > best) {
          best = a;
          piv = i;
        }
      }
      if (best < 1e-12) throw NumericalFailure("simplex: singular basis during refactorization");
      if (piv != k) {
        double* rp = &lu_[static_cast<std::size_t>(piv) * m_];
        double* rk = &lu_[static_cast<std::size_t>(k) * m_];
        for (int j = 0; j < m_; ++j) std::swap(rp[j], rk[j]);
        std::swap(perm_[static_cast<std::size_t>(piv)], perm_[static_cast<std::size_t>(k)]);
      }
      const double d = lu_[static_cast<std::size_t>(k) * m_ + k];
      const double* rk = &lu_[static_cast<std::size_t>(k) * m_];
      for (int i = k + 1; i < m_; ++i) {
        double* ri = &lu_[static_cast<std::size_t>(i) * m_];
        double f = ri[k] / d;
        if (f == 0.0) continue;
        ri[k] = f;
        for (int j = k + 1; j < m_; ++j) ri[j] -= f * rk[j];
      }
    }
    etas_.clear();
    xb_ = rhs_;
    ftran_lu(xb_);
  }

  // Solves B w = v in place; v indexed by row.
  void ftran(std::vector<double>& v) const {
    ftran_lu(v);
    for (const Eta& e : etas_) {
      double t = v[static_cast<std::size_t>(e.row)] / e.w[static_cast<std::size_t>(e.row)];
      if (t != 0.0) {
        for (int i = 0; i < m_; ++i) v[static_cast<std::size_t>(i)] -= e.w[static_cast<std::size_t>(i)] * t;
      }
      v[static_cast<std::size_t>(e.row)] = t;
    }
  }

  void ftran_lu(std::vector<double>& v) const {
    scratch_.resize(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) scratch_[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(perm_[static_cast<std::size_t>(i)])];
    for (int i = 1; i < m_; ++i) {  // L forward solve, unit diagonal
      const double* ri = &lu_[static_cast<std::size_t>(i) * m_];
      double acc = scratch_[static_cast<std::size_t>(i)];
      for (int j = 0; j < i; ++j) acc -= ri[j] * scratch_[static_cast<std::size_t>(j)];
      scratch_[static_cast<std::size_t>(i)] = acc;
    }
    for (int i = m_ - 1; i >= 0; --i) {  // U backward solve
      const double* ri = &lu_[static_cast<std::size_t>(i) * m_];
      double acc = scratch_[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < m_; ++j) acc -= ri[j] * scratch_[static_cast<std::size_t>(j)];
      scratch_[static_cast<std::size_t>(i)] = acc / ri[i];
    }
    v = scratch_;
  }

  // Solves B^T y = v in place.
  void btran(std::vector<double>& v) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      const Eta& e = *it;
      double dot = 0.0;
      for (int i = 0; i < m_; ++i) dot += e.w[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
      double vr = v[static_cast<std::size_t>(e.row)];
      v[static_cast<std::size_t>(e.row)] = (vr - (dot - e.w[static_cast<std::size_t>(e.row)] * vr)) / e.w[static_cast<std::size_t>(e.row)];
    }
    scratch_.resize(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) {  // U^T forward solve
      double acc = v[static_cast<std::size_t>(i)];
      for (int j = 0; j < i; ++j) acc -= lu_[static_cast<std::size_t>(j) * m_ + i] * scratch_[static_cast<std::size_t>(j)];
      scratch_[static_cast<std::size_t>(i)] = acc / lu_[static_cast<std::size_t>(i) * m_ + i];
    }
    for (int i = m_ - 1; i >= 0; --i) {  // L^T backward solve, unit diagonal
      double acc = scratch_[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < m_; ++j) acc -= lu_[static_cast<std::size_t>(j) * m_ + i] * scratch_[static_cast<std::size_t>(j)];
      scratch_[static_cast<std::size_t>(i)] = acc;
    }
    for (int i = 0; i < m_; ++i) v[static_cast<std::size_t>(perm_[static_cast<std::size_t>(i)])] = scratch_[static_cast<std::size_t>(i)];
  }

  StepResult iterate(const std::vector<double>& cc, bool phase1) {
    const int ncols = static_cast<int>(col_entries_.size());
    const long max_iters = 20000L + 200L * (m_ + ncols);
    long degenerate_streak = 0;
    bool bland = false;
    std::vector<double> y(static_cast<std::size_t>(m_));
    std::vector<double> w(static_cast<std::size_t>(m_));
    for (long iter = 0; iter < max_iters; ++iter) {
      for (int r = 0; r < m_; ++r) y[static_cast<std::size_t>(r)] = cc[static_cast<std::size_t>(basic_[static_cast<std::size_t>(r)])];
      btran(y);
      // Pricing. Artificials never re-enter; this is sound for phase 1 (a
      // zero-infeasibility point never needs them) and required in phase 2.
      int entering = -1;
      double best = config_.optimality_tol;
      for (int c = 0; c < ncols; ++c) {
        if (in_basis_[static_cast<std::size_t>(c)] || is_artificial(c)) continue;
        double d = cc[static_cast<std::size_t>(c)];
        for (auto [r, v] : col_entries_[static_cast<std::size_t>(c)]) d -= y[static_cast<std::size_t>(r)] * v;
        if (bland) {
          if (d > config_.optimality_tol) {
            entering = c;
            break;
          }
        } else if (d > best) {
          best = d;
          entering = c;
        }
      }
      if (entering < 0) return StepResult::optimal;
      std::fill(w.begin(), w.end(), 0.0);
      for (auto [r, v] : col_entries_[static_cast<std::size_t>(entering)]) w[static_cast<std::size_t>(r)] = v;
      ftran(w);
      // Ratio test. A row whose basic variable is an artificial pinned at
      // zero blocks in both directions, so artificials never regrow.
      int leave = -1;
      double theta = std::numeric_limits<double>::infinity();
      double leave_pivot = 0.0;
      for (int r = 0; r < m_; ++r) {
        double wr = w[static_cast<std::size_t>(r)];
        bool artificial_row = !phase1 && is_artificial(basic_[static_cast<std::size_t>(r)]);
        double denom = artificial_row ? std::fabs(wr) : wr;
        if (denom <= kPivotTol) continue;
        double ratio = std::max(0.0, xb_[static_cast<std::size_t>(r)]) / denom;
        bool better;
        if (ratio < theta - 1e-12) {
          better = true;
        } else if (ratio <= theta + 1e-12 && leave >= 0) {
          double cur = std::fabs(leave_pivot);
          double cand = std::fabs(wr);
          better = cand > cur * (1.0 + 1e-9) ||
                   (cand >= cur * (1.0 - 1e-9) &&
                    basic_[static_cast<std::size_t>(r)] < basic_[static_cast<std::size_t>(leave)]);
        } else {
          better = false;
        }
        if (better) {
          theta = ratio;
          leave = r;
          leave_pivot = wr;
        }
      }
      if (leave < 0) {
        if (phase1) throw NumericalFailure("simplex: phase 1 unbounded");
        return StepResult::unbounded;
      }
      for (int r = 0; r < m_; ++r) xb_[static_cast<std::size_t>(r)] -= theta * w[static_cast<std::size_t>(r)];
      xb_[static_cast<std::size_t>(leave)] = theta;
      in_basis_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(leave)])] = false;
      in_basis_[static_cast<std::size_t>(entering)] = true;
      basic_[static_cast<std::size_t>(leave)] = entering;
      etas_.push_back({leave, w});
      if (static_cast<int>(etas_.size()) >= kMaxEtas) refactorize();
      degenerate_streak = theta <= 1e-11 ? degenerate_streak + 1 : 0;
      if (!bland && degenerate_streak > 500 + 2L * m_) bland = true;
    }
    return StepResult::iteration_limit;
  }

  void extract(LPSolution& out) {
    refactorize();  // clean factorization for final values and duals
    out.status = LPStatus::optimal;
    out.primal.assign(static_cast<std::size_t>(lp_.num_variables()), 0.0);
    std::vector<double> col_value(col_entries_.size(), 0.0);
    for (int r = 0; r < m_; ++r) col_value[static_cast<std::size_t>(basic_[static_cast<std::size_t>(r)])] = xb_[static_cast<std::size_t>(r)];
    double value = 0.0;
    for (int v = 0; v < lp_.num_variables(); ++v) {
      double x = col_value[static_cast<std::size_t>(col_of_var_[static_cast<std::size_t>(v)])];
      int neg = neg_col_of_var_[static_cast<std::size_t>(v)];
      if (neg >= 0) x -= col_value[static_cast<std::size_t>(neg)];
      out.primal[static_cast<std::size_t>(v)] = x;
      value += lp_.objective_coeff(v) * x;
    }
    out.value = value;
    std::vector<double> y(static_cast<std::size_t>(m_));
    for (int r = 0; r < m_; ++r) y[static_cast<std::size_t>(r)] = cost_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(r)])];
    btran(y);
    out.duals.assign(static_cast<std::size_t>(m_), 0.0);
    for (int r = 0; r < m_; ++r) {
      out.duals[static_cast<std::size_t>(r)] = row_flip_[static_cast<std::size_t>(r)] ? -y[static_cast<std::size_t>(r)] : y[static_cast<std::size_t>(r)];
    }
    out.rational_value = rationalize(out.value, 64);
  }

  const LinearProgram& lp_;
  SolverConfig config_;
  int m_ = 0;
  int first_artificial_ = 0;
  bool need_phase1_ = false;
  double scale_ = 1.0;
  std::vector<int> col_of_var_;
  std::vector<int> neg_col_of_var_;
  std::vector<std::vector<std::pair<int, double>>> col_entries_;
  std::vector<double> rhs_;
  std::vector<bool> row_flip_;
  std::vector<double> cost_;
  std::vector<double> phase1_cost_;
  std::vector<int> basic_;
  std::vector<bool> in_basis_;
  std::vector<double> xb_;
  std::vector<double> lu_;
  std::vector<int> perm_;
  std::vector<Eta> etas_;
  mutable std::vector<double> scratch_;
};

}  // namespace

LPSolution solve(const LinearProgram& lp, const SolverConfig& config) {
  if (lp.num_rows() == 0) {
    // Legal but degenerate: optimum 0 unless a positive-cost variable is
    // unbounded above (every variable has no constraint at all).
    LPSolution out;
    out.primal.assign(static_cast<std::size_t>(lp.num_variables()), 0.0);
    for (int v = 0; v < lp.num_variables(); ++v) {
      double c = lp.objective_coeff(v);
      if (c > config.optimality_tol || (lp.variable_free(v) && c < -config.optimality_tol)) {
        out.status = LPStatus::unbounded;
        return out;
      }
    }
    out.status = LPStatus::optimal;
    out.rational_value = Rational(0);
    return out;
  }
  Simplex simplex(lp, config);
  return simplex.run();
}

LPSolution solve(const LinearProgram& lp) { return solve(lp, SolverConfig::from_env()); }

void dump_lp(const LinearProgram& lp, std::ostream& out) {
  auto var_name = [&](int v) {
    const std::string& n = lp.variable_name(v);
    return n.empty() ? "x" + std::to_string(v) : n;
  };
  out << "Maximize\n obj:";
  bool any = false;
  for (int v = 0; v < lp.num_variables(); ++v) {
    double c = lp.objective_coeff(v);
    if (c == 0.0) continue;
    out << (c < 0 ? " - " : (any ? " + " : " ")) << std::fabs(c) << " " << var_name(v);
    any = true;
  }
  if (!any) out << " 0 " << (lp.num_variables() ? var_name(0) : "x0");
  out << "\nSubject To\n";
  for (int r = 0; r < lp.num_rows(); ++r) {
    const std::string& rn = lp.row_name(r);
    out << " " << (rn.empty() ? "c" + std::to_string(r) : rn) << ":";
    bool first = true;
    for (auto [v, c] : lp.row_coeffs(r)) {
      out << (c < 0 ? " - " : (first ? " " : " + ")) << std::fabs(c) << " " << var_name(v);
      first = false;
    }
    if (first) out << " 0 " << (lp.num_variables() ? var_name(0) : "x0");
    out << (lp.row_relation(r) == Relation::le ? " <= " : " = ") << lp.row_rhs(r) << "\n";
  }
  out << "Bounds\n";
  for (int v = 0; v < lp.num_variables(); ++v) {
    if (lp.variable_free(v)) out << " " << var_name(v) << " free\n";
  }
  out << "End\n";
}

}  // namespace dicap
