#include "nlsfv/gmres.hpp"

#include <cmath>
#include <stdexcept>

namespace nlsfv {

namespace {

double vec_norm(const std::vector<cdouble>& v) {
  std::vector<double> t(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) t[i] = std::norm(v[i]);
  return std::sqrt(pairwise_sum(t));
}

cdouble vec_dot(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
  std::vector<cdouble> t(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) t[i] = std::conj(a[i]) * b[i];
  return pairwise_sum(t);
}

}  // namespace

void SparseComplexMatrix::multiply(const std::vector<cdouble>& x,
                                   std::vector<cdouble>& y) const {
  y.assign(n, cdouble{});
  for (int i = 0; i < n; ++i) {
    cdouble acc{};
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) acc += val[k] * x[col[k]];
    y[i] = acc;
  }
}

std::vector<cdouble> SparseComplexMatrix::diagonal() const {
  std::vector<cdouble> d(n, cdouble{});
  for (int i = 0; i < n; ++i)
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      if (col[k] == i) d[i] += val[k];
  return d;
}

GmresResult gmres_solve(const SparseComplexMatrix& A, const std::vector<cdouble>& b,
                        const std::vector<cdouble>& x0, const GmresOptions& opts) {
  const int n = A.n;
  if (static_cast<int>(b.size()) != n || static_cast<int>(x0.size()) != n)
    throw std::invalid_argument("gmres: dimension mismatch");
  if (opts.restart < 1 || opts.max_iters < 1 || !(opts.tol > 0.0))
    throw std::invalid_argument("gmres: bad options");

  GmresResult res;
  res.x = x0;

  const double bnorm = vec_norm(b);
  if (bnorm == 0.0) {
    res.x.assign(n, cdouble{});
    res.converged = true;
    return res;
  }

  // Right preconditioning: solve A M^-1 z = b, x = M^-1 z, so the residual
  // of the outer problem is untouched.
  std::vector<cdouble> minv(n, cdouble{1.0, 0.0});
  if (opts.jacobi) {
    const auto d = A.diagonal();
    for (int i = 0; i < n; ++i)
      minv[i] = std::abs(d[i]) > 0.0 ? 1.0 / d[i] : cdouble{1.0, 0.0};
  }

  const int m = opts.restart;
  std::vector<std::vector<cdouble>> V;
  std::vector<std::vector<cdouble>> H(m + 1, std::vector<cdouble>(m, cdouble{}));
  std::vector<cdouble> cs(m), sn(m), g(m + 1);
  std::vector<cdouble> w(n), r(n), tmp(n);

  int total = 0;
  while (total < opts.max_iters) {
    A.multiply(res.x, r);
    for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
    double beta = vec_norm(r);
    res.residual = beta / bnorm;
    if (res.residual <= opts.tol) {
      res.converged = true;
      return res;
    }

    V.assign(1, r);
    for (int i = 0; i < n; ++i) V[0][i] = r[i] * (1.0 / beta);
    for (auto& row : H) row.assign(m, cdouble{});
    g.assign(m + 1, cdouble{});
    g[0] = beta;

    int k = 0;
    for (; k < m && total < opts.max_iters; ++k, ++total) {
      for (int i = 0; i < n; ++i) tmp[i] = minv[i] * V[k][i];
      A.multiply(tmp, w);

      for (int j = 0; j <= k; ++j) {
        const cdouble hjk = vec_dot(V[j], w);
        H[j][k] = hjk;
        for (int i = 0; i < n; ++i) w[i] -= hjk * V[j][i];
      }
      const double hkk = vec_norm(w);
      H[k + 1][k] = hkk;

      // Apply accumulated rotations, then the new one.
      for (int j = 0; j < k; ++j) {
        const cdouble t = std::conj(cs[j]) * H[j][k] + std::conj(sn[j]) * H[j + 1][k];
        H[j + 1][k] = -sn[j] * H[j][k] + cs[j] * H[j + 1][k];
        H[j][k] = t;
      }
      const double denom =
          std::sqrt(std::norm(H[k][k]) + std::norm(H[k + 1][k]));
      if (denom == 0.0) {
        cs[k] = 1.0;
        sn[k] = 0.0;
      } else {
        cs[k] = H[k][k] / denom;
        sn[k] = H[k + 1][k] / denom;
      }
      const cdouble t = std::conj(cs[k]) * H[k][k] + std::conj(sn[k]) * H[k + 1][k];
      H[k][k] = t;
      H[k + 1][k] = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = std::conj(cs[k]) * g[k];

      const double rel = std::abs(g[k + 1]) / bnorm;
      if (hkk > 0.0 && rel > opts.tol && k + 1 < m) {
        V.push_back(w);
        for (int i = 0; i < n; ++i) V[k + 1][i] = w[i] * (1.0 / hkk);
        continue;
      }

      // Solve the small triangular system and update x.
      ++k;
      ++total;
      break;
    }

    const int kk = k;
    std::vector<cdouble> ysol(kk, cdouble{});
    for (int i = kk - 1; i >= 0; --i) {
      cdouble s = g[i];
      for (int j = i + 1; j < kk; ++j) s -= H[i][j] * ysol[j];
      ysol[i] = s / H[i][i];
    }
    std::vector<cdouble> upd(n, cdouble{});
    for (int j = 0; j < kk; ++j)
      for (int i = 0; i < n; ++i) upd[i] += ysol[j] * V[j][i];
    for (int i = 0; i < n; ++i) res.x[i] += minv[i] * upd[i];
    res.iterations = total;
  }

  A.multiply(res.x, r);
  for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
  res.residual = vec_norm(r) / bnorm;
  res.iterations = total;
  res.converged = res.residual <= opts.tol;
  return res;
}

}  // namespace nlsfv
