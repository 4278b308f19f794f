#include "bilag/linalg.hpp"

#include "bilag/errors.hpp"

namespace bilag {

namespace {

std::size_t weight(const ScalarExpr& e) {
  return e.normal_form().numerator().size() + e.normal_form().denominator().size();
}

struct Echelon {
  Matrix rows;
  std::vector<std::size_t> pivot_columns;
  ScalarExpr det_factor{1};
};

// Row reduction of an augmented matrix; the first `columns` columns are
// eliminated. Pivots are the lightest nonzero entries of their column.
Echelon reduce(Matrix rows, std::size_t columns) {
  Echelon out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < columns && r < rows.size(); ++c) {
    std::optional<std::size_t> best;
    for (std::size_t i = r; i < rows.size(); ++i) {
      if (rows[i][c].is_zero()) continue;
      if (!best || weight(rows[i][c]) < weight(rows[*best][c])) best = i;
    }
    if (!best) {
      out.det_factor = ScalarExpr(0);
      continue;
    }
    if (*best != r) {
      std::swap(rows[*best], rows[r]);
      out.det_factor = -out.det_factor;
    }
    const ScalarExpr pivot = rows[r][c];
    out.det_factor = (out.det_factor * pivot).canonical();
    for (auto& e : rows[r]) e = (e / pivot).canonical();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c].is_zero()) continue;
      const ScalarExpr factor = rows[i][c];
      for (std::size_t j = c; j < rows[i].size(); ++j) {
        if (rows[r][j].is_zero()) continue;
        rows[i][j] = (rows[i][j] - factor * rows[r][j]).canonical();
      }
    }
    out.pivot_columns.push_back(c);
    ++r;
  }
  out.rows = std::move(rows);
  return out;
}

void require_rectangular(const Matrix& m, std::size_t columns) {
  for (const auto& row : m) {
    if (row.size() != columns) throw DomainError("matrix rows have unequal lengths");
  }
}

}  // namespace

Matrix identity_matrix(std::size_t n) {
  Matrix m(n, Vector(n, ScalarExpr(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = ScalarExpr(1);
  return m;
}

Matrix transpose(const Matrix& m) {
  if (m.empty()) return {};
  Matrix t(m.front().size(), Vector(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  }
  return t;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t inner = b.size();
  const std::size_t cols = inner ? b.front().size() : 0;
  Matrix out(a.size(), Vector(cols, ScalarExpr(0)));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != inner) throw DomainError("matrix dimensions do not match");
    for (std::size_t j = 0; j < cols; ++j) {
      ScalarExpr s(0);
      for (std::size_t k = 0; k < inner; ++k) {
        if (a[i][k].is_zero() || b[k][j].is_zero()) continue;
        s += a[i][k] * b[k][j];
      }
      out[i][j] = s.canonical();
    }
  }
  return out;
}

Vector multiply(const Matrix& a, const Vector& v) {
  Vector out(a.size(), ScalarExpr(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != v.size()) throw DomainError("matrix and vector dimensions do not match");
    ScalarExpr s(0);
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (a[i][k].is_zero() || v[k].is_zero()) continue;
      s += a[i][k] * v[k];
    }
    out[i] = s.canonical();
  }
  return out;
}

ScalarExpr determinant(const Matrix& m) {
  require_rectangular(m, m.size());
  if (m.empty()) return ScalarExpr(1);
  Echelon e = reduce(m, m.size());
  if (e.pivot_columns.size() < m.size()) return ScalarExpr(0);
  return e.det_factor;
}

std::size_t rank(const Matrix& m) {
  if (m.empty()) return 0;
  require_rectangular(m, m.front().size());
  return reduce(m, m.front().size()).pivot_columns.size();
}

Vector solve(const Matrix& m, const Vector& b) {
  require_rectangular(m, m.size());
  if (b.size() != m.size()) throw DomainError("right-hand side has the wrong length");
  auto x = solve_in_span(m, b);
  if (!x) throw DomainError("linear system is inconsistent");
  return *x;
}

std::optional<Vector> solve_in_span(const Matrix& m, const Vector& b) {
  if (b.size() != m.size()) throw DomainError("right-hand side has the wrong length");
  const std::size_t k = m.empty() ? 0 : m.front().size();
  require_rectangular(m, k);
  Matrix augmented = m;
  for (std::size_t i = 0; i < augmented.size(); ++i) augmented[i].push_back(b[i]);
  Echelon e = reduce(std::move(augmented), k);
  if (e.pivot_columns.size() < k) throw DomainError("matrix is singular (columns are dependent)");
  for (std::size_t i = k; i < e.rows.size(); ++i) {
    if (!e.rows[i][k].is_zero()) return std::nullopt;
  }
  Vector x(k);
  for (std::size_t i = 0; i < k; ++i) x[i] = e.rows[i][k];
  return x;
}

Matrix inverse(const Matrix& m) {
  const std::size_t n = m.size();
  require_rectangular(m, n);
  Matrix augmented = m;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) augmented[i].push_back(ScalarExpr(i == j ? 1 : 0));
  }
  Echelon e = reduce(std::move(augmented), n);
  if (e.pivot_columns.size() < n) throw DomainError("matrix is singular");
  Matrix out(n, Vector(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i][j] = e.rows[i][n + j];
  }
  return out;
}

}  // namespace bilag
