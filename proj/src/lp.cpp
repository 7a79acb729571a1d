#include "rvd/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rvd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kPivotFloor = 1e-7;  // below this, re-derive the pivot on a fresh inverse
constexpr double kDegenerateStep = 1e-12;
constexpr int kStallLimit = 200;       // consecutive degenerate steps before Bland's rule
constexpr long kRefreshPeriod = 512;   // basic-value recomputation cadence
constexpr long kRefactorPeriod = 4000; // prophylactic basis reinversion cadence

/**
 * Bounded-variable two-phase revised simplex over the column set
 * [structural | ub-row slacks | artificials], with an explicit basis inverse
 * maintained by rank-one row updates.  All tie-breaking is index-based so a
 * given problem always takes the same pivot path.
 */
class Simplex {
 public:
  Simplex(const LpProblem& p, const LpOptions& opt) : p_(p), opt_(opt) {
    n_s_ = p.num_vars();
    m_ub_ = static_cast<int>(p.b_ub.size());
    m_eq_ = static_cast<int>(p.b_eq.size());
    m_ = m_ub_ + m_eq_;
    n_cols_ = n_s_ + m_ub_;
    max_iter_ = opt.max_iter >= 0 ? opt.max_iter : 50L * (m_ + n_cols_);

    cols_.resize(static_cast<size_t>(n_s_));
    for (int j = 0; j < n_s_; ++j) {
      auto& col = cols_[static_cast<size_t>(j)];
      for (int i = 0; i < m_ub_; ++i) {
        const double v = p.A_ub(i, j);
        if (v != 0.0) col.push_back({i, v});
      }
      for (int i = 0; i < m_eq_; ++i) {
        const double v = p.A_eq(i, j);
        if (v != 0.0) col.push_back({m_ub_ + i, v});
      }
    }
    b_.resize(m_);
    b_.head(m_ub_) = p.b_ub;
    b_.tail(m_eq_) = p.b_eq;
  }

  LpSolution run(bool phase1_only) {
    LpSolution sol;
    for (int j = 0; j < n_s_; ++j) {
      if (p_.lb(j) > p_.ub(j)) {
        sol.status = LpStatus::Infeasible;
        return sol;
      }
    }
    init_point();

    const LpStatus ph1 = iterate(/*phase=*/1);
    phase1_obj_ = artificial_load();
    sol.phase1_objective = phase1_obj_;
    sol.iterations = iters_;
    if (ph1 == LpStatus::IterationLimit) {
      sol.status = LpStatus::IterationLimit;
      return sol;
    }
    if (phase1_obj_ > opt_.feas_tol) {
      sol.status = LpStatus::Infeasible;
      return sol;
    }
    if (phase1_only) {
      sol.status = LpStatus::Optimal;
      return sol;
    }

    phase2_ = true;
    const LpStatus ph2 = iterate(/*phase=*/2);
    sol.iterations = iters_;
    if (ph2 != LpStatus::Optimal) {
      sol.status = ph2;
      return sol;
    }

    sol.status = LpStatus::Optimal;
    sol.z = extract_z();
    sol.objective = p_.c.size() > 0 ? p_.c.dot(sol.z) : 0.0;
    Eigen::VectorXd y = duals(/*phase=*/2);
    sol.y_ub = y.head(m_ub_);
    sol.y_eq = y.tail(m_eq_);
    return sol;
  }

 private:
  struct Entry {
    int row;
    double val;
  };

  // --- variable id helpers --------------------------------------------------
  bool is_slack(int id) const { return id >= n_s_ && id < n_cols_; }
  bool is_artificial(int id) const { return id >= n_cols_; }

  double lo_of(int id) const {
    if (id < n_s_) return p_.lb(id);
    if (is_slack(id)) return 0.0;
    return 0.0;  // artificial
  }
  double hi_of(int id) const {
    if (id < n_s_) return p_.ub(id);
    if (is_slack(id)) return kInf;
    return phase2_ ? 0.0 : kInf;  // artificials are pinned once feasible
  }
  double cost_of(int id, int phase) const {
    if (phase == 1) return is_artificial(id) ? 1.0 : 0.0;
    return id < n_s_ ? p_.c(id) : 0.0;
  }

  // --- setup ----------------------------------------------------------------
  void init_point() {
    xnb_.assign(static_cast<size_t>(n_cols_), 0.0);
    state_.assign(static_cast<size_t>(n_cols_), 0);  // 0 nonbasic, 1 basic
    for (int j = 0; j < n_s_; ++j) {
      double v = 0.0;
      if (p_.lb(j) > 0.0) v = p_.lb(j);
      if (p_.ub(j) < 0.0) v = p_.ub(j);
      xnb_[static_cast<size_t>(j)] = v;
    }

    Eigen::VectorXd r = b_;
    for (int j = 0; j < n_s_; ++j) {
      const double v = xnb_[static_cast<size_t>(j)];
      if (v == 0.0) continue;
      for (const Entry& e : cols_[static_cast<size_t>(j)]) r(e.row) -= e.val * v;
    }

    basis_.resize(static_cast<size_t>(m_));
    art_sign_.assign(static_cast<size_t>(m_), 0);
    xB_.resize(m_);
    Binv_.setZero(m_, m_);
    for (int i = 0; i < m_; ++i) {
      if (i < m_ub_ && r(i) >= 0.0) {
        basis_[static_cast<size_t>(i)] = n_s_ + i;  // slack
        state_[static_cast<size_t>(n_s_ + i)] = 1;
        xB_(i) = r(i);
        Binv_(i, i) = 1.0;
      } else {
        const double s = r(i) >= 0.0 ? 1.0 : -1.0;
        basis_[static_cast<size_t>(i)] = n_cols_ + i;  // artificial
        art_sign_[static_cast<size_t>(i)] = static_cast<int8_t>(s);
        xB_(i) = std::abs(r(i));
        Binv_(i, i) = s;  // inverse of the +/-1 diagonal
      }
    }
  }

  double artificial_load() const {
    double s = 0.0;
    for (int i = 0; i < m_; ++i) {
      if (is_artificial(basis_[static_cast<size_t>(i)])) s += std::max(0.0, xB_(i));
    }
    return s;
  }

  // --- linear algebra against the basis inverse ------------------------------
  Eigen::VectorXd duals(int phase) const {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m_);
    for (int i = 0; i < m_; ++i) {
      const double cb = cost_of(basis_[static_cast<size_t>(i)], phase);
      if (cb != 0.0) y += cb * Binv_.row(i).transpose();
    }
    return y;
  }

  double reduced_cost(int id, const Eigen::VectorXd& y, int phase) const {
    double d = cost_of(id, phase);
    if (id < n_s_) {
      for (const Entry& e : cols_[static_cast<size_t>(id)]) d -= y(e.row) * e.val;
    } else {
      d -= y(id - n_s_);  // slack column is a unit vector
    }
    return d;
  }

  Eigen::VectorXd ftran(int id) const {
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m_);
    if (id < n_s_) {
      const auto& col = cols_[static_cast<size_t>(id)];
      for (int i = 0; i < m_; ++i) {
        double s = 0.0;
        const double* row = Binv_.row(i).data();
        for (const Entry& e : col) s += row[e.row] * e.val;
        alpha(i) = s;
      }
    } else {
      alpha = Binv_.col(id - n_s_);
    }
    return alpha;
  }

  void column_of(int id, Eigen::VectorXd& out) const {
    out.setZero(m_);
    if (id < n_s_) {
      for (const Entry& e : cols_[static_cast<size_t>(id)]) out(e.row) = e.val;
    } else if (is_slack(id)) {
      out(id - n_s_) = 1.0;
    } else {
      const int row = id - n_cols_;
      out(row) = static_cast<double>(art_sign_[static_cast<size_t>(row)]);
    }
  }

  void refresh() {
    Eigen::VectorXd rhs = b_;
    for (int j = 0; j < n_cols_; ++j) {
      if (state_[static_cast<size_t>(j)] != 0) continue;
      const double v = xnb_[static_cast<size_t>(j)];
      if (v == 0.0) continue;
      if (j < n_s_) {
        for (const Entry& e : cols_[static_cast<size_t>(j)]) rhs(e.row) -= e.val * v;
      } else {
        rhs(j - n_s_) -= v;
      }
    }
    xB_ = Binv_ * rhs;
  }

  void refactor() {
    Eigen::MatrixXd B(m_, m_);
    Eigen::VectorXd col(m_);
    for (int i = 0; i < m_; ++i) {
      column_of(basis_[static_cast<size_t>(i)], col);
      B.col(i) = col;
    }
    Binv_ = B.partialPivLu().inverse();
    fresh_inverse_ = true;
    refresh();
  }

  // --- pricing ---------------------------------------------------------------
  struct Candidate {
    int id = -1;
    double d = 0.0;
    int dir = 0;
  };

  Candidate price(int phase) const {
    const Eigen::VectorXd y = duals(phase);
    Candidate best;
    double best_viol = opt_.opt_tol;
    for (int j = 0; j < n_cols_; ++j) {
      if (state_[static_cast<size_t>(j)] != 0) continue;
      const double lo = lo_of(j);
      const double hi = hi_of(j);
      if (lo == hi) continue;
      const double v = xnb_[static_cast<size_t>(j)];
      const bool at_lo = (v <= lo);
      const bool at_hi = (v >= hi);
      const double d = reduced_cost(j, y, phase);
      double viol = 0.0;
      int dir = 0;
      if (!at_lo && !at_hi) {
        viol = std::abs(d);
        dir = d < 0.0 ? +1 : -1;
      } else if (at_lo && d < 0.0) {
        viol = -d;
        dir = +1;
      } else if (at_hi && d > 0.0) {
        viol = d;
        dir = -1;
      }
      if (viol > best_viol) {
        best = {j, d, dir};
        best_viol = viol;
        if (bland_) break;  // first eligible index wins under Bland's rule
      }
    }
    return best;
  }

  // --- main loop ---------------------------------------------------------------
  LpStatus iterate(int phase) {
    int repairs = 0;
    while (true) {
      if (iters_ >= max_iter_) return LpStatus::IterationLimit;

      const Candidate cand = price(phase);
      if (cand.id < 0) {
        if (phase == 2) {
          if (final_check_ok()) return LpStatus::Optimal;
          if (repairs < 2) {
            ++repairs;
            refactor();
            continue;
          }
          // The claimed optimum fails verification even on a rebuilt inverse:
          // report a numerical failure rather than an unverified point.
          return LpStatus::IterationLimit;
        }
        return LpStatus::Optimal;
      }

      const int q = cand.id;
      const double delta = static_cast<double>(cand.dir);
      const Eigen::VectorXd alpha = ftran(q);

      // Entering variable's own travel range.
      const double vq = xnb_[static_cast<size_t>(q)];
      double t_own = delta > 0.0 ? hi_of(q) - vq : vq - lo_of(q);

      // Blocking basic variables.
      double t_min = kInf;
      std::vector<int> ties;
      for (int i = 0; i < m_; ++i) {
        const double rate = delta * alpha(i);
        const int bid = basis_[static_cast<size_t>(i)];
        double limit = kInf;
        if (rate > kPivotTol) {
          const double lo = lo_of(bid);
          if (lo > -kInf) limit = std::max(0.0, (xB_(i) - lo) / rate);
        } else if (rate < -kPivotTol) {
          const double hi = hi_of(bid);
          if (hi < kInf) limit = std::max(0.0, (xB_(i) - hi) / rate);
        }
        if (limit < kInf) {
          if (limit < t_min - 1e-12) {
            t_min = limit;
            ties.clear();
            ties.push_back(i);
          } else if (limit <= t_min + 1e-12) {
            ties.push_back(i);
          }
        }
      }

      if (t_min == kInf && !(t_own < kInf)) {
        if (phase == 1) {
          // Phase-1 cost is bounded below by zero; an unbounded ray means the
          // inverse has decayed.  Rebuild once and retry.
          if (repairs < 2) {
            ++repairs;
            refactor();
            continue;
          }
          return LpStatus::IterationLimit;
        }
        return LpStatus::Unbounded;
      }

      ++iters_;

      if (t_own <= t_min) {
        // Bound flip: the entering variable crosses to its opposite bound.
        xB_ -= (t_own * delta) * alpha;
        xnb_[static_cast<size_t>(q)] = delta > 0.0 ? hi_of(q) : lo_of(q);
        note_step(t_own);
        continue;
      }

      // Leaving-row selection among the minimal ratios.
      int r = -1;
      if (bland_) {
        for (int i : ties) {
          if (r < 0 || basis_[static_cast<size_t>(i)] < basis_[static_cast<size_t>(r)]) r = i;
        }
      } else {
        for (int i : ties) {
          if (r < 0) {
            r = i;
            continue;
          }
          const bool ai = is_artificial(basis_[static_cast<size_t>(i)]);
          const bool ar = is_artificial(basis_[static_cast<size_t>(r)]);
          if (ai != ar) {
            if (ai) r = i;
            continue;
          }
          const double mi = std::abs(alpha(i));
          const double mr = std::abs(alpha(r));
          if (mi > mr * (1.0 + 1e-12)) {
            r = i;
          } else if (mi >= mr * (1.0 - 1e-12) &&
                     basis_[static_cast<size_t>(i)] < basis_[static_cast<size_t>(r)]) {
            r = i;
          }
        }
      }

      // A tiny pivot amplifies inverse error catastrophically.  When the
      // working inverse might be stale, rebuild it and re-derive the step;
      // if the pivot is genuinely tiny, take it and refactor right after.
      if (std::abs(alpha(r)) < kPivotFloor && !fresh_inverse_) {
        refactor();
        continue;
      }

      const int leaving = basis_[static_cast<size_t>(r)];
      const double rate_r = delta * alpha(r);
      const double target = rate_r > 0.0 ? lo_of(leaving) : hi_of(leaving);
      const double t = std::max(0.0, (xB_(r) - target) / rate_r);
      xB_ -= (t * delta) * alpha;

      // Park the leaving variable exactly on the bound it hit; artificials
      // simply drop out (they are never priced back in).
      if (leaving < n_cols_) {
        state_[static_cast<size_t>(leaving)] = 0;
        xnb_[static_cast<size_t>(leaving)] = target;
      }

      basis_[static_cast<size_t>(r)] = q;
      state_[static_cast<size_t>(q)] = 1;
      xB_(r) = vq + delta * t;

      // Rank-one update keeping Binv consistent with the new basis; row r must
      // stay un-normalized until every other row has been eliminated with it.
      const double piv = alpha(r);
      for (int i = 0; i < m_; ++i) {
        if (i == r) continue;
        const double f = alpha(i);
        if (f != 0.0) Binv_.row(i) -= (f / piv) * Binv_.row(r);
      }
      Binv_.row(r) /= piv;
      fresh_inverse_ = false;
      if (std::abs(piv) < kPivotFloor) refactor();
      note_step(t);
    }
  }

  void note_step(double t) {
    if (t <= kDegenerateStep) {
      if (++degen_streak_ > kStallLimit) bland_ = true;
    } else {
      degen_streak_ = 0;
    }
    // Periodic hygiene, applied only after the update so the basis, inverse,
    // and basic values never straddle an iteration.
    if (iters_ % kRefactorPeriod == 0) {
      refactor();
    } else if (iters_ % kRefreshPeriod == 0) {
      refresh();
    }
  }

  bool final_check_ok() {
    refresh();
    double viol = 0.0;
    for (int i = 0; i < m_; ++i) {
      const int id = basis_[static_cast<size_t>(i)];
      viol = std::max(viol, lo_of(id) - xB_(i));
      viol = std::max(viol, xB_(i) - hi_of(id));
    }
    // Bound checks alone cannot see a decayed inverse: recompute the true row
    // residuals of the candidate point as well.
    const Eigen::VectorXd z = extract_z();
    for (int i = 0; i < m_ub_; ++i) {
      viol = std::max(viol, p_.A_ub.row(i).dot(z) - p_.b_ub(i));
    }
    for (int i = 0; i < m_eq_; ++i) {
      viol = std::max(viol, std::abs(p_.A_eq.row(i).dot(z) - p_.b_eq(i)));
    }
    const double scale = 1.0 + (m_ > 0 ? b_.cwiseAbs().maxCoeff() : 0.0);
    return viol <= opt_.feas_tol * scale;
  }

  Eigen::VectorXd extract_z() const {
    Eigen::VectorXd z(n_s_);
    for (int j = 0; j < n_s_; ++j) z(j) = xnb_[static_cast<size_t>(j)];
    for (int i = 0; i < m_; ++i) {
      const int id = basis_[static_cast<size_t>(i)];
      if (id < n_s_) z(id) = xB_(i);
    }
    return z;
  }

  const LpProblem& p_;
  const LpOptions& opt_;
  int n_s_ = 0, m_ub_ = 0, m_eq_ = 0, m_ = 0, n_cols_ = 0;
  long max_iter_ = 0;
  std::vector<std::vector<Entry>> cols_;
  Eigen::VectorXd b_;

  std::vector<int> basis_;
  std::vector<int8_t> art_sign_;
  std::vector<int8_t> state_;
  std::vector<double> xnb_;
  Eigen::VectorXd xB_;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> Binv_;

  bool phase2_ = false;
  bool bland_ = false;
  bool fresh_inverse_ = false;
  int degen_streak_ = 0;
  long iters_ = 0;
  double phase1_obj_ = 0.0;
};

}  // namespace

void LpProblem::validate() const {
  const int n = num_vars();
  auto fail = [](const char* msg) { throw std::invalid_argument(std::string("LpProblem: ") + msg); };
  if (A_ub.rows() != b_ub.size()) fail("A_ub/b_ub row mismatch");
  if (A_eq.rows() != b_eq.size()) fail("A_eq/b_eq row mismatch");
  if (A_ub.rows() > 0 && A_ub.cols() != n) fail("A_ub column count != num_vars");
  if (A_eq.rows() > 0 && A_eq.cols() != n) fail("A_eq column count != num_vars");
  if (lb.size() != n || ub.size() != n) fail("bound vector size != num_vars");
  if (!c.allFinite()) fail("non-finite cost");
  if (A_ub.size() > 0 && !A_ub.allFinite()) fail("non-finite A_ub");
  if (A_eq.size() > 0 && !A_eq.allFinite()) fail("non-finite A_eq");
  if (b_ub.size() > 0 && !b_ub.allFinite()) fail("non-finite b_ub");
  if (b_eq.size() > 0 && !b_eq.allFinite()) fail("non-finite b_eq");
  for (int j = 0; j < n; ++j) {
    if (std::isnan(lb(j)) || std::isnan(ub(j))) fail("NaN bound");
  }
}

LpSolution solve(const LpProblem& problem, const LpOptions& options) {
  problem.validate();
  Simplex simplex(problem, options);
  return simplex.run(/*phase1_only=*/false);
}

Feasibility check_feasible(const LpProblem& problem, const LpOptions& options) {
  problem.validate();
  Simplex simplex(problem, options);
  const LpSolution sol = simplex.run(/*phase1_only=*/true);
  if (sol.status == LpStatus::IterationLimit) {
    throw std::runtime_error("lp: phase-1 iteration limit reached in check_feasible");
  }
  return sol.status == LpStatus::Optimal ? Feasibility::Feasible : Feasibility::Infeasible;
}

void dump_problem(const LpProblem& problem, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dump_problem: cannot open " + path);
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
  };
  auto put_vector = [&](const char* name, const Eigen::VectorXd& v) {
    out << name << " " << v.size() << "\n";
    for (int i = 0; i < v.size(); ++i) {
      put(v(i));
      out << (i + 1 == v.size() ? "" : " ");
    }
    out << "\n";
  };
  auto put_matrix = [&](const char* name, const Eigen::MatrixXd& M) {
    out << name << " " << M.rows() << " " << M.cols() << "\n";
    for (int i = 0; i < M.rows(); ++i) {
      for (int j = 0; j < M.cols(); ++j) {
        put(M(i, j));
        out << (j + 1 == M.cols() ? "" : " ");
      }
      out << "\n";
    }
  };
  out << "lp 1\n";
  put_vector("c", problem.c);
  put_matrix("A_ub", problem.A_ub);
  put_vector("b_ub", problem.b_ub);
  put_matrix("A_eq", problem.A_eq);
  put_vector("b_eq", problem.b_eq);
  put_vector("lb", problem.lb);
  put_vector("ub", problem.ub);
}

}  // namespace rvd
