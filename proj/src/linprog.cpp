#include "matchgame/linprog.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace matchgame {

namespace {

template <class T>
struct Arith;

template <>
struct Arith<double> {
  static constexpr double kPivot = 1e-10;
  static constexpr double kFeasibility = 1e-9;
  static bool positive(double x) { return x > kPivot; }
  static bool negative(double x) { return x < -kPivot; }
  static bool infeasible(double phase_one_value) { return phase_one_value > kFeasibility; }
  static double to_real(double x) { return x; }
};

template <>
struct Arith<Rational> {
  static bool positive(const Rational& x) { return x > 0; }
  static bool negative(const Rational& x) { return x < 0; }
  static bool infeasible(const Rational& phase_one_value) { return phase_one_value > 0; }
  static double to_real(const Rational& x) { return to_double(x); }
};

// x_k = shift + sum(sign * column)
template <class T>
struct VariableMap {
  T shift{};
  std::vector<std::pair<std::size_t, int>> columns;
};

template <class T>
class Simplex {
 public:
  explicit Simplex(const LinearProgramT<T>& lp) : lp_(lp) {}

  struct Result {
    LpStatus status = LpStatus::Infeasible;
    std::vector<T> point;
    T value{};
  };

  Result run() {
    validate();
    standardize();
    Result result;

    // phase one: drive the artificial variables to zero
    std::vector<T> phase_one(columns_, T{0});
    for (std::size_t c = first_artificial_; c < columns_; ++c) phase_one[c] = T{1};
    iterate(phase_one, columns_);
    if (Arith<T>::infeasible(objective_value(phase_one))) return result;
    evict_artificials();

    std::vector<T> cost(columns_, T{0});
    for (std::size_t k = 0; k < lp_.variables(); ++k)
      for (auto [col, sign] : maps_[k].columns) {
        T c = lp_.objective[k];
        if (sign < 0) c = -c;
        cost[col] += lp_.sense == Sense::Maximize ? T(-c) : c;
      }
    if (!iterate(cost, first_artificial_)) {
      result.status = LpStatus::Unbounded;
      return result;
    }

    std::vector<T> column_values(columns_, T{0});
    for (std::size_t r = 0; r < basis_.size(); ++r) column_values[basis_[r]] = rhs_[r];
    result.point.assign(lp_.variables(), T{0});
    for (std::size_t k = 0; k < lp_.variables(); ++k) {
      T x = maps_[k].shift;
      for (auto [col, sign] : maps_[k].columns) x += sign > 0 ? column_values[col] : T(-column_values[col]);
      result.point[k] = x;
    }
    result.value = T{0};
    for (std::size_t k = 0; k < lp_.variables(); ++k) result.value += lp_.objective[k] * result.point[k];
    result.status = LpStatus::Optimal;
    return result;
  }

 private:
  void validate() const {
    const std::size_t n = lp_.variables();
    if (lp_.lower.size() != n || lp_.upper.size() != n)
      throw ContractViolation("LP bounds do not match the objective dimension");
    for (const auto& row : lp_.constraints)
      if (row.coeffs.size() != n) throw ContractViolation("LP row dimension differs from the objective");
    for (std::size_t k = 0; k < n; ++k)
      if (lp_.lower[k] && lp_.upper[k] && *lp_.upper[k] < *lp_.lower[k])
        throw ContractViolation("LP variable with empty bound interval");
  }

  struct Row {
    std::vector<T> coeffs;  // over structural columns
    Relation relation;
    T rhs;
  };

  void standardize() {
    const std::size_t n = lp_.variables();
    std::size_t structural = 0;
    std::vector<Row> rows;
    maps_.assign(n, {});
    std::vector<std::pair<std::size_t, T>> caps;  // column <= cap
    for (std::size_t k = 0; k < n; ++k) {
      const auto& lo = lp_.lower[k];
      const auto& hi = lp_.upper[k];
      if (lo) {
        maps_[k].shift = *lo;
        maps_[k].columns.push_back({structural, +1});
        if (hi) caps.emplace_back(structural, T(*hi - *lo));
        ++structural;
      } else if (hi) {
        maps_[k].shift = *hi;
        maps_[k].columns.push_back({structural++, -1});
      } else {
        maps_[k].columns.push_back({structural++, +1});
        maps_[k].columns.push_back({structural++, -1});
      }
    }
    for (const auto& c : lp_.constraints) {
      Row row{std::vector<T>(structural, T{0}), c.relation, c.rhs};
      for (std::size_t k = 0; k < n; ++k) {
        if (c.coeffs[k] == T{0}) continue;
        row.rhs -= c.coeffs[k] * maps_[k].shift;
        for (auto [col, sign] : maps_[k].columns) row.coeffs[col] += sign > 0 ? c.coeffs[k] : T(-c.coeffs[k]);
      }
      rows.push_back(std::move(row));
    }
    for (auto& [col, cap] : caps) {
      Row row{std::vector<T>(structural, T{0}), Relation::LessEq, cap};
      row.coeffs[col] = T{1};
      rows.push_back(std::move(row));
    }
    for (auto& row : rows) {
      if (row.rhs < T{0}) {
        for (auto& a : row.coeffs) a = -a;
        row.rhs = -row.rhs;
        if (row.relation == Relation::LessEq) {
          row.relation = Relation::GreaterEq;
        } else if (row.relation == Relation::GreaterEq) {
          row.relation = Relation::LessEq;
        }
      }
    }

    std::size_t slacks = 0, artificials = 0;
    for (const auto& row : rows) {
      if (row.relation != Relation::Equal) ++slacks;
      if (row.relation != Relation::LessEq) ++artificials;
    }
    first_artificial_ = structural + slacks;
    columns_ = first_artificial_ + artificials;
    tableau_.assign(rows.size(), std::vector<T>(columns_, T{0}));
    rhs_.assign(rows.size(), T{0});
    basis_.assign(rows.size(), 0);
    std::size_t next_slack = structural, next_artificial = first_artificial_;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < structural; ++c) tableau_[r][c] = rows[r].coeffs[c];
      rhs_[r] = rows[r].rhs;
      switch (rows[r].relation) {
        case Relation::LessEq:
          tableau_[r][next_slack] = T{1};
          basis_[r] = next_slack++;
          break;
        case Relation::GreaterEq:
          tableau_[r][next_slack++] = T{-1};
          tableau_[r][next_artificial] = T{1};
          basis_[r] = next_artificial++;
          break;
        case Relation::Equal:
          tableau_[r][next_artificial] = T{1};
          basis_[r] = next_artificial++;
          break;
      }
    }
  }

  T objective_value(const std::vector<T>& cost) const {
    T total{0};
    for (std::size_t r = 0; r < basis_.size(); ++r) total += cost[basis_[r]] * rhs_[r];
    return total;
  }

  void pivot(std::size_t r, std::size_t c) {
    T p = tableau_[r][c];
    for (auto& a : tableau_[r]) a /= p;
    rhs_[r] /= p;
    for (std::size_t k = 0; k < tableau_.size(); ++k) {
      if (k == r) continue;
      T f = tableau_[k][c];
      if (f == T{0}) continue;
      for (std::size_t j = 0; j < columns_; ++j)
        if (tableau_[r][j] != T{0}) tableau_[k][j] -= f * tableau_[r][j];
      rhs_[k] -= f * rhs_[r];
    }
    basis_[r] = c;
  }

  // Minimizes cost over columns [0, limit).  Returns false when unbounded.
  bool iterate(const std::vector<T>& cost, std::size_t limit) {
    for (;;) {
      std::optional<std::size_t> entering;
      for (std::size_t c = 0; c < limit && !entering; ++c) {
        T reduced = cost[c];
        for (std::size_t r = 0; r < basis_.size(); ++r)
          if (tableau_[r][c] != T{0}) reduced -= cost[basis_[r]] * tableau_[r][c];
        if (Arith<T>::negative(reduced)) entering = c;
      }
      if (!entering) return true;
      std::optional<std::size_t> leaving;
      T best_ratio{};
      for (std::size_t r = 0; r < basis_.size(); ++r) {
        const T& a = tableau_[r][*entering];
        if (!Arith<T>::positive(a)) continue;
        T ratio = rhs_[r] / a;
        if (!leaving || ratio < best_ratio || (ratio == best_ratio && basis_[r] < basis_[*leaving])) {
          leaving = r;
          best_ratio = ratio;
        }
      }
      if (!leaving) return false;
      pivot(*leaving, *entering);
      if constexpr (std::is_same_v<T, double>) {
        for (auto& b : rhs_)
          if (b < 0 && b > -Arith<double>::kFeasibility) b = 0;
      }
    }
  }

  void evict_artificials() {
    for (std::size_t r = 0; r < basis_.size();) {
      if (basis_[r] < first_artificial_) {
        ++r;
        continue;
      }
      std::optional<std::size_t> replacement;
      for (std::size_t c = 0; c < first_artificial_ && !replacement; ++c)
        if (Arith<T>::positive(tableau_[r][c]) || Arith<T>::negative(tableau_[r][c])) replacement = c;
      if (replacement) {
        pivot(r, *replacement);
        ++r;
      } else {
        // redundant equality
        tableau_.erase(tableau_.begin() + static_cast<std::ptrdiff_t>(r));
        rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(r));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
      }
    }
  }

  const LinearProgramT<T>& lp_;
  std::vector<VariableMap<T>> maps_;
  std::vector<std::vector<T>> tableau_;
  std::vector<T> rhs_;
  std::vector<std::size_t> basis_;
  std::size_t columns_ = 0;
  std::size_t first_artificial_ = 0;
};

RationalProgram to_exact(const LinearProgram& lp) {
  RationalProgram out;
  out.sense = lp.sense;
  for (double c : lp.objective) out.objective.push_back(exact_rational(c));
  for (const auto& row : lp.constraints) {
    std::vector<Rational> coeffs;
    for (double a : row.coeffs) coeffs.push_back(exact_rational(a));
    out.add(std::move(coeffs), row.relation, exact_rational(row.rhs));
  }
  for (const auto& b : lp.lower) out.lower.push_back(b ? std::optional<Rational>(exact_rational(*b)) : std::nullopt);
  for (const auto& b : lp.upper) out.upper.push_back(b ? std::optional<Rational>(exact_rational(*b)) : std::nullopt);
  return out;
}

LpSolution from_exact(const Simplex<Rational>::Result& r) {
  LpSolution s;
  s.status = r.status;
  if (r.status != LpStatus::Optimal) return s;
  for (const auto& q : r.point) s.point.push_back(to_double(q));
  s.value = to_double(r.value);
  s.exact_point = r.point;
  s.exact_value = r.value;
  return s;
}

// Row player's maximin strategy and the value, through the classic shifted
// LP:  min sum p  s.t.  p^T (A - m + 1) >= 1,  p >= 0.
template <class T>
std::pair<T, std::vector<T>> maximin_row(const Matrix<T>& A) {
  T shift = T{1} - A.min();
  LinearProgramT<T> lp(Sense::Minimize, std::vector<T>(A.rows(), T{1}));
  for (std::size_t t = 0; t < A.cols(); ++t) {
    std::vector<T> coeffs(A.rows());
    for (std::size_t s = 0; s < A.rows(); ++s) coeffs[s] = A(s, t) + shift;
    lp.add(std::move(coeffs), Relation::GreaterEq, T{1});
  }
  auto r = Simplex<T>(lp).run();
  if (r.status != LpStatus::Optimal) throw std::logic_error("matrix game LP failed");
  T total{0};
  for (const auto& p : r.point) total += p;
  std::vector<T> x;
  for (const auto& p : r.point) x.push_back(p / total);
  return {T{1} / total - shift, std::move(x)};
}

// Column player's minimax strategy:  max sum q  s.t.  (A - m + 1) q <= 1.
template <class T>
std::pair<T, std::vector<T>> minimax_column(const Matrix<T>& A) {
  T shift = T{1} - A.min();
  LinearProgramT<T> lp(Sense::Maximize, std::vector<T>(A.cols(), T{1}));
  for (std::size_t s = 0; s < A.rows(); ++s) {
    std::vector<T> coeffs(A.cols());
    for (std::size_t t = 0; t < A.cols(); ++t) coeffs[t] = A(s, t) + shift;
    lp.add(std::move(coeffs), Relation::LessEq, T{1});
  }
  auto r = Simplex<T>(lp).run();
  if (r.status != LpStatus::Optimal) throw std::logic_error("matrix game LP failed");
  T total{0};
  for (const auto& q : r.point) total += q;
  std::vector<T> y;
  for (const auto& q : r.point) y.push_back(q / total);
  return {T{1} / total - shift, std::move(y)};
}

MixedStrategy to_strategy(std::vector<double> w) {
  double total = 0;
  for (double& p : w) {
    if (p < 0) p = 0;
    total += p;
  }
  for (double& p : w) p /= total;
  return MixedStrategy(std::move(w));
}

}  // namespace

LpSolution solve(const LinearProgram& lp, LpMode mode) {
  if (mode == LpMode::Rational) return solve(to_exact(lp));
  auto r = Simplex<double>(lp).run();
  LpSolution s;
  s.status = r.status;
  if (r.status == LpStatus::Optimal) {
    s.point = std::move(r.point);
    s.value = r.value;
  }
  return s;
}

LpSolution solve(const RationalProgram& lp) { return from_exact(Simplex<Rational>(lp).run()); }

GameValue game_value(const RealMatrix& A) {
  if (A.empty()) throw ContractViolation("game value of an empty matrix");
  auto [w, x] = maximin_row(A);
  auto [w2, y] = minimax_column(A);
  (void)w2;
  return {w, to_strategy(std::move(x)), to_strategy(std::move(y))};
}

PunishmentLevels minmax_levels(const RealMatrix& A, const RealMatrix& B) {
  if (!same_shape(A, B) || A.empty()) throw ContractViolation("punishment levels need equal non-empty shapes");
  auto [alpha, hold_man] = minimax_column(A);
  auto [beta, hold_woman] = minimax_column(B.transposed());
  return {alpha, beta, to_strategy(std::move(hold_man)), to_strategy(std::move(hold_woman))};
}

ExactPunishmentLevels minmax_levels(const RationalMatrix& A, const RationalMatrix& B) {
  if (!same_shape(A, B) || A.empty()) throw ContractViolation("punishment levels need equal non-empty shapes");
  auto [alpha, hold_man] = minimax_column(A);
  auto [beta, hold_woman] = minimax_column(B.transposed());
  return {alpha, beta, std::move(hold_man), std::move(hold_woman)};
}

}  // namespace matchgame
