#include "tap/simplex.hpp"

namespace tap {

namespace {

// Dense tableau over exact rationals. Column layout:
//   [0, n)           structural variables
//   [n, n+m)         surplus/slack variables, one per row
//   [n+m, n+m+a)     phase-1 artificials
// Row i of the tableau holds the equality form of constraint i; the last
// column is the right-hand side.
class Tableau {
 public:
  Tableau(const SimplexProblem& p) : n_(p.num_vars), m_(static_cast<int>(p.rows.size())) {
    // Rows with negative rhs are negated so every rhs is non-negative; the
    // surplus then enters with +1 and can start basic, otherwise an
    // artificial is added.
    std::vector<int> art_of_row(m_, -1);
    num_art_ = 0;
    for (int i = 0; i < m_; ++i) {
      if (p.rhs[i] > 0) art_of_row[i] = num_art_++;
    }
    cols_ = n_ + m_ + num_art_;
    a_.assign(m_, std::vector<Rat>(cols_ + 1, Rat(0)));
    basis_.assign(m_, -1);
    for (int i = 0; i < m_; ++i) {
      bool negate = p.rhs[i] < 0;
      for (const auto& [j, v] : p.rows[i]) {
        a_[i][j] += negate ? -v : v;
      }
      a_[i][n_ + i] = negate ? Rat(1) : Rat(-1);
      a_[i][cols_] = negate ? -p.rhs[i] : p.rhs[i];
      if (art_of_row[i] >= 0) {
        a_[i][n_ + m_ + art_of_row[i]] = 1;
        basis_[i] = n_ + m_ + art_of_row[i];
      } else {
        basis_[i] = n_ + i;
      }
    }
  }

  // Minimizes the cost vector (extended with zeros) over the current system.
  // Returns false when unbounded.
  bool run(const std::vector<Rat>& cost, bool allow_artificials) {
    // Reduced-cost row: z_j = c_j - c_B . B^{-1} A_j, maintained directly.
    z_.assign(cols_ + 1, Rat(0));
    for (int j = 0; j < cols_; ++j) z_[j] = j < static_cast<int>(cost.size()) ? cost[j] : Rat(0);
    for (int i = 0; i < m_; ++i) {
      int b = basis_[i];
      Rat cb = b < static_cast<int>(cost.size()) ? cost[b] : Rat(0);
      if (cb == 0) continue;
      for (int j = 0; j <= cols_; ++j) {
        if (a_[i][j] != 0) z_[j] -= cb * a_[i][j];
      }
    }
    int limit = allow_artificials ? cols_ : n_ + m_;
    for (;;) {
      // Bland: entering = smallest index with negative reduced cost.
      int enter = -1;
      for (int j = 0; j < limit; ++j) {
        if (z_[j] < 0) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      // Leaving: min ratio, ties by smallest basis variable index.
      int leave = -1;
      Rat best;
      for (int i = 0; i < m_; ++i) {
        if (a_[i][enter] <= 0) continue;
        Rat ratio = a_[i][cols_] / a_[i][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return false;  // unbounded
      pivot(leave, enter);
    }
  }

  void pivot(int row, int col) {
    Rat piv = a_[row][col];
    for (int j = 0; j <= cols_; ++j) {
      if (a_[row][j] != 0) a_[row][j] /= piv;
    }
    for (int i = 0; i < m_; ++i) {
      if (i == row || a_[i][col] == 0) continue;
      Rat f = a_[i][col];
      for (int j = 0; j <= cols_; ++j) {
        if (a_[row][j] != 0) a_[i][j] -= f * a_[row][j];
      }
    }
    if (z_[col] != 0) {
      Rat f = z_[col];
      for (int j = 0; j <= cols_; ++j) {
        if (a_[row][j] != 0) z_[j] -= f * a_[row][j];
      }
    }
    basis_[row] = col;
  }

  // Pivots artificial variables out of the basis after phase 1; rows where
  // that is impossible are redundant and harmlessly keep a zero artificial.
  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_ + m_) continue;
      int col = -1;
      for (int j = 0; j < n_ + m_; ++j) {
        if (a_[i][j] != 0) {
          col = j;
          break;
        }
      }
      if (col >= 0) pivot(i, col);
    }
  }

  std::vector<Rat> extract(int count) const {
    std::vector<Rat> x(count, Rat(0));
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < count) x[basis_[i]] = a_[i][cols_];
    }
    return x;
  }

  bool artificials_zero() const {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= n_ + m_ && a_[i][cols_] != 0) return false;
    }
    return true;
  }

  int n_, m_, cols_, num_art_;
  std::vector<std::vector<Rat>> a_;
  std::vector<Rat> z_;
  std::vector<int> basis_;
};

}  // namespace

SimplexSolution solve_simplex(const SimplexProblem& p) {
  SimplexSolution out;
  Tableau t(p);

  if (t.num_art_ > 0) {
    std::vector<Rat> phase1(t.cols_, Rat(0));
    for (int j = t.n_ + t.m_; j < t.cols_; ++j) phase1[j] = 1;
    t.run(phase1, /*allow_artificials=*/true);
    if (!t.artificials_zero()) {
      out.status = SimplexStatus::infeasible;
      return out;
    }
    t.drive_out_artificials();
  }

  std::vector<Rat> cost(t.cols_, Rat(0));
  for (int j = 0; j < p.num_vars; ++j) cost[j] = p.objective[j];
  if (!t.run(cost, /*allow_artificials=*/false)) {
    out.status = SimplexStatus::unbounded;
    return out;
  }

  out.status = SimplexStatus::optimal;
  out.x = t.extract(p.num_vars);
  out.objective = 0;
  for (int j = 0; j < p.num_vars; ++j) out.objective += p.objective[j] * out.x[j];
  return out;
}

}  // namespace tap
