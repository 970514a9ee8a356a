#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nsbell/errors.hpp"
#include "nsbell/rational.hpp"

namespace nsbell {

enum class Sense { maximize, minimize };
enum class Relation { less_equal, equal, greater_equal };
enum class LPStatus { optimal, infeasible, unbounded };

struct LinearProgram {
  int num_vars = 0;
  Sense sense = Sense::maximize;
  std::vector<Rational> objective;

  struct Row {
    std::vector<Rational> coeffs;
    Relation rel = Relation::less_equal;
    Rational rhs;
  };
  std::vector<Row> rows;

  // nullopt = unbounded on that side
  std::vector<std::optional<Rational>> lower;
  std::vector<std::optional<Rational>> upper;

  static LinearProgram make(int nvars, Sense sense) {
    LinearProgram lp;
    lp.num_vars = nvars;
    lp.sense = sense;
    lp.objective.assign(static_cast<std::size_t>(nvars), Rational(0));
    lp.lower.assign(static_cast<std::size_t>(nvars), std::nullopt);
    lp.upper.assign(static_cast<std::size_t>(nvars), std::nullopt);
    return lp;
  }
  void add_row(std::vector<Rational> coeffs, Relation rel, Rational rhs) {
    rows.push_back(Row{std::move(coeffs), rel, std::move(rhs)});
  }
};

struct LPOutcome {
  LPStatus status = LPStatus::infeasible;
  Rational value;                // meaningful when optimal
  std::vector<Rational> point;   // meaningful when optimal
};

enum class PivotRule {
  bland,          // lowest-index entering column; guaranteed termination
  dantzig_bland,  // most-negative reduced cost, falling back to Bland after
                  // a run of degenerate pivots (still terminating)
};

struct SolveOptions {
  PivotRule rule = PivotRule::bland;
  long max_pivots = 500000;
  int stall_limit = 60;  // degenerate pivots before dantzig_bland switches
};

namespace detail {

/// Dense-tableau two-phase simplex over exact rationals.
class ExactSimplex {
 public:
  ExactSimplex(const LinearProgram& lp, const SolveOptions& opt) : lp_(lp), opt_(opt) {
    validate();
    build_standard_form();
  }

  LPOutcome run() {
    if (!phase_one()) return LPOutcome{LPStatus::infeasible, Rational(0), {}};
    if (!phase_two()) return LPOutcome{LPStatus::unbounded, Rational(0), {}};
    return extract();
  }

 private:
  const LinearProgram& lp_;
  SolveOptions opt_;

  // x_orig[j] = shift + z[pos] - z[neg]   (indices -1 when absent)
  struct VarMap {
    int pos = -1, neg = -1;
    Rational shift;
  };
  std::vector<VarMap> varmap_;
  int num_struct_ = 0;  // structural z variables

  // standard form rows: sum_j A[i][j] z_j  (rel)  b_i, with b_i >= 0 after
  // normalization; slacks/surplus/artificials appended as explicit columns
  std::vector<std::vector<mpq_class>> tab_;
  std::vector<mpq_class> b_;
  std::vector<int> basis_;
  int ncols_ = 0;
  int first_artificial_ = -1;  // columns >= this are artificial
  std::vector<mpq_class> obj_;
  mpq_class obj_rhs_;  // current objective value = -obj_rhs_
  long pivots_ = 0;
  bool bland_active_ = false;
  int degenerate_streak_ = 0;

  void validate() const {
    const auto nv = static_cast<std::size_t>(lp_.num_vars);
    if (lp_.num_vars <= 0) throw std::invalid_argument("lp: num_vars must be positive");
    if (lp_.objective.size() != nv) throw std::invalid_argument("lp: objective length mismatch");
    if (lp_.lower.size() != nv || lp_.upper.size() != nv)
      throw std::invalid_argument("lp: bounds length mismatch");
    for (const auto& r : lp_.rows)
      if (r.coeffs.size() != nv) throw std::invalid_argument("lp: row length mismatch");
    bool any_bound = false;
    for (std::size_t j = 0; j < nv; ++j)
      if (lp_.lower[j] || lp_.upper[j]) any_bound = true;
    if (lp_.rows.empty() && !any_bound)
      throw std::invalid_argument("lp: needs at least one constraint or bound");
  }

  void build_standard_form() {
    const int nv = lp_.num_vars;
    varmap_.resize(static_cast<std::size_t>(nv));
    struct ExtraRow {
      int var;
      Rational span;
    };
    std::vector<ExtraRow> range_rows;  // z_pos <= U - L for two-sided bounds
    for (int j = 0; j < nv; ++j) {
      const auto& lo = lp_.lower[static_cast<std::size_t>(j)];
      const auto& hi = lp_.upper[static_cast<std::size_t>(j)];
      auto& vm = varmap_[static_cast<std::size_t>(j)];
      if (lo && hi && *hi < *lo) {
        infeasible_bounds_ = true;
        return;
      }
      if (lo) {
        vm.pos = num_struct_++;
        vm.shift = *lo;
        if (hi) range_rows.push_back({vm.pos, *hi - *lo});
      } else if (hi) {
        vm.neg = num_struct_++;
        vm.shift = *hi;
      } else {
        vm.pos = num_struct_++;
        vm.neg = num_struct_++;
      }
    }

    // rows in z space
    struct ZRow {
      std::vector<mpq_class> a;
      Relation rel;
      mpq_class rhs;
    };
    std::vector<ZRow> zrows;
    zrows.reserve(lp_.rows.size() + range_rows.size());
    for (const auto& row : lp_.rows) {
      ZRow z;
      z.a.assign(static_cast<std::size_t>(num_struct_), mpq_class(0));
      z.rel = row.rel;
      z.rhs = row.rhs.raw();
      for (int j = 0; j < nv; ++j) {
        const auto& c = row.coeffs[static_cast<std::size_t>(j)];
        if (c.is_zero()) continue;
        const auto& vm = varmap_[static_cast<std::size_t>(j)];
        if (!vm.shift.is_zero()) z.rhs -= c.raw() * vm.shift.raw();
        if (vm.pos >= 0) z.a[static_cast<std::size_t>(vm.pos)] += c.raw();
        if (vm.neg >= 0) z.a[static_cast<std::size_t>(vm.neg)] -= c.raw();
      }
      zrows.push_back(std::move(z));
    }
    for (const auto& er : range_rows) {
      ZRow z;
      z.a.assign(static_cast<std::size_t>(num_struct_), mpq_class(0));
      z.a[static_cast<std::size_t>(er.var)] = 1;
      z.rel = Relation::less_equal;
      z.rhs = er.span.raw();
      zrows.push_back(std::move(z));
    }

    // normalize rhs >= 0, then append slack/surplus/artificial columns
    const int m = static_cast<int>(zrows.size());
    int extra = 0;
    for (auto& z : zrows) {
      if (sgn(z.rhs) < 0) {
        for (auto& c : z.a) c = -c;
        z.rhs = -z.rhs;
        z.rel = z.rel == Relation::less_equal    ? Relation::greater_equal
                : z.rel == Relation::greater_equal ? Relation::less_equal
                                                   : Relation::equal;
      }
      extra += z.rel == Relation::greater_equal ? 2 : 1;
    }
    ncols_ = num_struct_ + extra;
    tab_.assign(static_cast<std::size_t>(m), {});
    b_.assign(static_cast<std::size_t>(m), mpq_class(0));
    basis_.assign(static_cast<std::size_t>(m), -1);

    // first pass places slacks/surplus, second pass artificials, so that
    // artificial columns form a contiguous tail
    int col = num_struct_;
    std::vector<int> surplus_col(static_cast<std::size_t>(m), -1);
    for (int i = 0; i < m; ++i) {
      auto& z = zrows[static_cast<std::size_t>(i)];
      if (z.rel != Relation::equal) surplus_col[static_cast<std::size_t>(i)] = col++;
    }
    first_artificial_ = col;
    for (int i = 0; i < m; ++i) {
      auto& row = tab_[static_cast<std::size_t>(i)];
      row.assign(static_cast<std::size_t>(ncols_), mpq_class(0));
      auto& z = zrows[static_cast<std::size_t>(i)];
      for (int j = 0; j < num_struct_; ++j)
        row[static_cast<std::size_t>(j)] = std::move(z.a[static_cast<std::size_t>(j)]);
      b_[static_cast<std::size_t>(i)] = z.rhs;
      const int sc = surplus_col[static_cast<std::size_t>(i)];
      if (z.rel == Relation::less_equal) {
        row[static_cast<std::size_t>(sc)] = 1;
        basis_[static_cast<std::size_t>(i)] = sc;
      } else if (z.rel == Relation::greater_equal) {
        row[static_cast<std::size_t>(sc)] = -1;
        row[static_cast<std::size_t>(col)] = 1;
        basis_[static_cast<std::size_t>(i)] = col++;
      } else {
        row[static_cast<std::size_t>(col)] = 1;
        basis_[static_cast<std::size_t>(i)] = col++;
      }
    }
  }

  bool infeasible_bounds_ = false;

  void pivot(int r, int s) {
    if (++pivots_ > opt_.max_pivots)
      throw BudgetExceeded("lp: pivot cap of " + std::to_string(opt_.max_pivots) + " exceeded");
    auto& prow = tab_[static_cast<std::size_t>(r)];
    mpq_class inv = 1 / prow[static_cast<std::size_t>(s)];
    std::vector<int> nz;
    nz.reserve(prow.size());
    for (int j = 0; j < ncols_; ++j) {
      auto& v = prow[static_cast<std::size_t>(j)];
      if (sgn(v) == 0) continue;
      v *= inv;
      nz.push_back(j);
    }
    b_[static_cast<std::size_t>(r)] *= inv;

    mpq_class t;
    const auto eliminate = [&](std::vector<mpq_class>& row, mpq_class& rhs) {
      mpq_class f = row[static_cast<std::size_t>(s)];
      if (sgn(f) == 0) return;
      for (const int j : nz) {
        mpq_mul(t.get_mpq_t(), f.get_mpq_t(), prow[static_cast<std::size_t>(j)].get_mpq_t());
        mpq_sub(row[static_cast<std::size_t>(j)].get_mpq_t(),
                row[static_cast<std::size_t>(j)].get_mpq_t(), t.get_mpq_t());
      }
      mpq_mul(t.get_mpq_t(), f.get_mpq_t(), b_[static_cast<std::size_t>(r)].get_mpq_t());
      mpq_sub(rhs.get_mpq_t(), rhs.get_mpq_t(), t.get_mpq_t());
      row[static_cast<std::size_t>(s)] = 0;
    };
    for (std::size_t i = 0; i < tab_.size(); ++i) {
      if (static_cast<int>(i) == r) continue;
      eliminate(tab_[i], b_[i]);
    }
    eliminate(obj_, obj_rhs_);
    basis_[static_cast<std::size_t>(r)] = s;
  }

  // entering column for a minimization tableau; -1 when optimal
  int choose_entering(bool allow_artificial) {
    const int limit = allow_artificial ? ncols_ : first_artificial_;
    if (bland_active_ || opt_.rule == PivotRule::bland) {
      for (int j = 0; j < limit; ++j)
        if (sgn(obj_[static_cast<std::size_t>(j)]) < 0) return j;
      return -1;
    }
    int best = -1;
    for (int j = 0; j < limit; ++j)
      if (sgn(obj_[static_cast<std::size_t>(j)]) < 0 &&
          (best < 0 || obj_[static_cast<std::size_t>(j)] < obj_[static_cast<std::size_t>(best)]))
        best = j;
    return best;
  }

  // leaving row by exact min-ratio; ties broken by lowest basis index
  int choose_leaving(int s) const {
    int r = -1;
    mpq_class best_ratio;
    for (std::size_t i = 0; i < tab_.size(); ++i) {
      const auto& a = tab_[i][static_cast<std::size_t>(s)];
      if (sgn(a) <= 0) continue;
      mpq_class ratio = b_[i] / a;
      if (r < 0 || ratio < best_ratio ||
          (ratio == best_ratio && basis_[i] < basis_[static_cast<std::size_t>(r)])) {
        r = static_cast<int>(i);
        best_ratio = std::move(ratio);
      }
    }
    return r;
  }

  // returns false when no pivot exists for an improving column (unbounded)
  bool iterate(bool allow_artificial) {
    for (;;) {
      const int s = choose_entering(allow_artificial);
      if (s < 0) return true;
      const int r = choose_leaving(s);
      if (r < 0) return false;
      const bool degenerate = sgn(b_[static_cast<std::size_t>(r)]) == 0;
      pivot(r, s);
      if (opt_.rule == PivotRule::dantzig_bland && !bland_active_) {
        degenerate_streak_ = degenerate ? degenerate_streak_ + 1 : 0;
        if (degenerate_streak_ >= opt_.stall_limit) bland_active_ = true;
      }
    }
  }

  void load_costs(const std::vector<mpq_class>& d) {
    obj_.assign(static_cast<std::size_t>(ncols_), mpq_class(0));
    for (int j = 0; j < ncols_ && j < static_cast<int>(d.size()); ++j)
      obj_[static_cast<std::size_t>(j)] = d[static_cast<std::size_t>(j)];
    obj_rhs_ = 0;
    // reduce against the current basis
    for (std::size_t i = 0; i < tab_.size(); ++i) {
      const int bi = basis_[i];
      mpq_class f = obj_[static_cast<std::size_t>(bi)];
      if (sgn(f) == 0) continue;
      for (int j = 0; j < ncols_; ++j) {
        const auto& v = tab_[i][static_cast<std::size_t>(j)];
        if (sgn(v) != 0) obj_[static_cast<std::size_t>(j)] -= f * v;
      }
      obj_rhs_ -= f * b_[i];
    }
  }

  bool phase_one() {
    if (infeasible_bounds_) return false;
    if (first_artificial_ == ncols_) return true;  // slack basis is feasible
    std::vector<mpq_class> d(static_cast<std::size_t>(ncols_), mpq_class(0));
    for (int j = first_artificial_; j < ncols_; ++j) d[static_cast<std::size_t>(j)] = 1;
    load_costs(d);
    iterate(true);  // unbounded impossible: objective bounded below by 0
    if (sgn(obj_rhs_) != 0) return false;  // value = -obj_rhs_ > 0
    drive_out_artificials();
    return true;
  }

  void drive_out_artificials() {
    std::vector<std::size_t> redundant;
    for (std::size_t i = 0; i < tab_.size(); ++i) {
      if (basis_[i] < first_artificial_) continue;
      int s = -1;
      for (int j = 0; j < first_artificial_; ++j)
        if (sgn(tab_[i][static_cast<std::size_t>(j)]) != 0) {
          s = j;
          break;
        }
      if (s >= 0)
        pivot(static_cast<int>(i), s);
      else
        redundant.push_back(i);  // all-zero row over real columns
    }
    for (std::size_t k = redundant.size(); k-- > 0;) {
      const std::size_t i = redundant[k];
      tab_.erase(tab_.begin() + static_cast<std::ptrdiff_t>(i));
      b_.erase(b_.begin() + static_cast<std::ptrdiff_t>(i));
      basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
    }
  }

  bool phase_two() {
    std::vector<mpq_class> d(static_cast<std::size_t>(ncols_), mpq_class(0));
    const bool flip_sense = lp_.sense == Sense::maximize;
    for (int j = 0; j < lp_.num_vars; ++j) {
      const auto& c = lp_.objective[static_cast<std::size_t>(j)];
      if (c.is_zero()) continue;
      const auto& vm = varmap_[static_cast<std::size_t>(j)];
      const mpq_class cc = flip_sense ? mpq_class(-c.raw()) : c.raw();
      if (vm.pos >= 0) d[static_cast<std::size_t>(vm.pos)] += cc;
      if (vm.neg >= 0) d[static_cast<std::size_t>(vm.neg)] -= cc;
    }
    load_costs(d);
    degenerate_streak_ = 0;
    return iterate(false);
  }

  LPOutcome extract() const {
    std::vector<mpq_class> z(static_cast<std::size_t>(ncols_), mpq_class(0));
    for (std::size_t i = 0; i < tab_.size(); ++i)
      z[static_cast<std::size_t>(basis_[i])] = b_[i];
    LPOutcome out;
    out.status = LPStatus::optimal;
    out.point.reserve(static_cast<std::size_t>(lp_.num_vars));
    for (int j = 0; j < lp_.num_vars; ++j) {
      const auto& vm = varmap_[static_cast<std::size_t>(j)];
      mpq_class v = vm.shift.raw();
      if (vm.pos >= 0) v += z[static_cast<std::size_t>(vm.pos)];
      if (vm.neg >= 0) v -= z[static_cast<std::size_t>(vm.neg)];
      out.point.emplace_back(std::move(v));
    }
    for (int j = 0; j < lp_.num_vars; ++j)
      out.value += lp_.objective[static_cast<std::size_t>(j)] * out.point[static_cast<std::size_t>(j)];
    verify(out);
    return out;
  }

  // exact post-hoc substitution check: the reported point must satisfy
  // every row and bound and attain the reported value
  void verify(const LPOutcome& out) const {
    for (const auto& row : lp_.rows) {
      Rational lhs;
      for (int j = 0; j < lp_.num_vars; ++j)
        lhs += row.coeffs[static_cast<std::size_t>(j)] * out.point[static_cast<std::size_t>(j)];
      const bool ok = row.rel == Relation::less_equal    ? lhs <= row.rhs
                      : row.rel == Relation::greater_equal ? lhs >= row.rhs
                                                           : lhs == row.rhs;
      if (!ok) throw std::logic_error("lp: optimal point fails a constraint");
    }
    for (int j = 0; j < lp_.num_vars; ++j) {
      const auto& v = out.point[static_cast<std::size_t>(j)];
      if (lp_.lower[static_cast<std::size_t>(j)] && v < *lp_.lower[static_cast<std::size_t>(j)])
        throw std::logic_error("lp: optimal point fails a lower bound");
      if (lp_.upper[static_cast<std::size_t>(j)] && v > *lp_.upper[static_cast<std::size_t>(j)])
        throw std::logic_error("lp: optimal point fails an upper bound");
    }
  }
};

}  // namespace detail

/// Exact optimum at a basic feasible solution; deterministic for identical
/// input. Throws BudgetExceeded when the pivot cap is hit.
inline LPOutcome solve(const LinearProgram& lp, const SolveOptions& opt = {}) {
  return detail::ExactSimplex(lp, opt).run();
}

/// True iff `point` is an exact convex combination of `vertices`
/// (feasibility LP: lambda >= 0, sum lambda = 1, V lambda = point).
inline bool membership_in_hull(const std::vector<Rational>& point,
                               const std::vector<std::vector<Rational>>& vertices,
                               const SolveOptions& opt = {}) {
  if (vertices.empty()) throw std::invalid_argument("membership_in_hull: empty vertex list");
  const std::size_t dim = point.size();
  for (const auto& v : vertices)
    if (v.size() != dim) throw std::invalid_argument("membership_in_hull: dimension mismatch");
  const int n = static_cast<int>(vertices.size());
  LinearProgram lp = LinearProgram::make(n, Sense::minimize);
  for (int i = 0; i < n; ++i) lp.lower[static_cast<std::size_t>(i)] = Rational(0);
  lp.add_row(std::vector<Rational>(static_cast<std::size_t>(n), Rational(1)), Relation::equal,
             Rational(1));
  for (std::size_t c = 0; c < dim; ++c) {
    std::vector<Rational> coeffs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) coeffs[static_cast<std::size_t>(i)] = vertices[static_cast<std::size_t>(i)][c];
    lp.add_row(std::move(coeffs), Relation::equal, point[c]);
  }
  return solve(lp, opt).status == LPStatus::optimal;
}

}  // namespace nsbell
