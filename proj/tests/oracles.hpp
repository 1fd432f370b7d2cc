#pragma once

// Direct, slow reference implementations used to check the library. They
// follow the textbook definitions and share no code with src/.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

inline double mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

inline double pop_std(const std::vector<double>& x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(x.size()));
}

// Returns 0 for degenerate input.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    sxy += (x[t] - mx) * (y[t] - my);
    sxx += (x[t] - mx) * (x[t] - mx);
    syy += (y[t] - my) * (y[t] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

// Smallest sample value v with at most floor(alpha% * n) samples strictly above it.
inline double upper_quantile(const std::vector<double>& x, double alpha_pct) {
  const auto allowed = static_cast<std::size_t>(
      std::floor(alpha_pct * static_cast<double>(x.size()) / 100.0 + 1e-9));
  double best = x[0];
  bool found = false;
  for (double v : x) {
    std::size_t above = 0;
    for (double w : x) above += w > v;
    if (above <= allowed && (!found || v < best)) {
      best = v;
      found = true;
    }
  }
  return best;
}

inline std::vector<double> column(const Eigen::MatrixXd& m, Eigen::Index c) {
  return std::vector<double>(m.col(c).data(), m.col(c).data() + m.rows());
}

inline std::vector<double> standardize(const std::vector<double>& x) {
  const double m = mean(x), s = pop_std(x);
  std::vector<double> out(x.size(), 0.0);
  if (s == 0.0) return out;
  for (std::size_t t = 0; t < x.size(); ++t) out[t] = (x[t] - m) / s;
  return out;
}

inline Eigen::MatrixXd corr(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.cols();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j) out(i, j) = pearson(column(x, i), column(x, j));
  return out;
}

inline Eigen::MatrixXd ct(const Eigen::MatrixXd& x, double alpha_pct) {
  const Eigen::Index n = x.cols();
  std::vector<double> q(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) q[i] = upper_quantile(column(x, i), alpha_pct);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      std::vector<double> a, b;
      for (Eigen::Index t = 0; t < x.rows(); ++t) {
        if (x(t, i) >= q[i] || x(t, j) >= q[j]) {
          a.push_back(x(t, i));
          b.push_back(x(t, j));
        }
      }
      out(i, j) = a.size() < 2 ? 0.0 : pearson(a, b);
    }
  }
  return out;
}

inline double tail_mean_square(const std::vector<double>& f, double alpha_pct) {
  const double q = upper_quantile(f, alpha_pct);
  double s = 0.0;
  int count = 0;
  for (double v : f) {
    if (v >= q) {
      s += v * v;
      ++count;
    }
  }
  return s / count;
}

inline Eigen::MatrixXd md(const Eigen::MatrixXd& x, double alpha_pct) {
  const Eigen::Index n = x.cols();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto zi = standardize(column(x, i));
      const auto zj = standardize(column(x, j));
      std::vector<double> f(zi.size()), g(zi.size());
      for (std::size_t t = 0; t < f.size(); ++t) {
        f[t] = zi[t] - zj[t];
        g[t] = -f[t];
      }
      out(i, j) = std::min(tail_mean_square(f, alpha_pct), tail_mean_square(g, alpha_pct));
    }
  }
  return out;
}

inline Eigen::MatrixXd range(const Eigen::MatrixXd& x, int k) {
  const Eigen::Index n = x.cols();
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      std::vector<double> d(static_cast<std::size_t>(x.rows()));
      for (Eigen::Index t = 0; t < x.rows(); ++t) d[t] = x(t, i) - x(t, j);
      std::sort(d.begin(), d.end());
      const auto kk = std::min<std::size_t>(static_cast<std::size_t>(k), d.size());
      double top = 0.0, bottom = 0.0;
      for (std::size_t p = 0; p < kk; ++p) {
        bottom += d[p];
        top += d[d.size() - 1 - p];
      }
      r(i, j) = (top - bottom) / static_cast<double>(kk);
    }
  }
  return r;
}

inline Eigen::MatrixXd rd(const Eigen::MatrixXd& x, int k) {
  const Eigen::MatrixXd r = range(x, k);
  const Eigen::Index n = r.rows();
  double peak = -INFINITY;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j) peak = std::max(peak, r(i, j));
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j) out(i, j) = peak - r(i, j);
  return out;
}

inline Eigen::MatrixXd clr(const Eigen::MatrixXd& s) {
  const Eigen::Index n = s.rows();
  Eigen::VectorXd mu(n), sigma(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<double> row;
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) row.push_back(s(i, j));
    mu(i) = mean(row);
    sigma(i) = pop_std(row);
  }
  auto z = [&](Eigen::Index row, double v) {
    if (sigma(row) == 0.0) return 0.0;
    return std::max(0.0, (v - mu(row)) / sigma(row));
  };
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double zi = z(i, s(i, j)), zj = z(j, s(i, j));
      out(i, j) = std::sqrt(zi * zi + zj * zj);
    }
  }
  return out;
}

inline double auc(const std::vector<double>& s, const std::vector<bool>& y) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t a = 0; a < s.size(); ++a) {
    if (!y[a]) continue;
    for (std::size_t b = 0; b < s.size(); ++b) {
      if (y[b]) continue;
      pairs += 1.0;
      wins += s[a] > s[b] ? 1.0 : (s[a] == s[b] ? 0.5 : 0.0);
    }
  }
  return wins / pairs;
}

// Sweeps distinct thresholds from high to low; each recall step is weighted
// by the precision reached at that threshold.
inline double aupr(const std::vector<double>& s, const std::vector<bool>& y) {
  std::vector<double> thresholds = s;
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  double positives = 0.0;
  for (bool v : y) positives += v;
  double area = 0.0, previous_recall = 0.0;
  for (double th : thresholds) {
    double tp = 0.0, called = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (s[k] >= th) {
        called += 1.0;
        tp += y[k];
      }
    }
    const double recall = tp / positives;
    area += (recall - previous_recall) * (tp / called);
    previous_recall = recall;
  }
  return area;
}

// Two-sided exact signed-rank p-value by listing all 2^n sign patterns.
inline double wilcoxon_exact(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] != b[k]) d.push_back(a[k] - b[k]);
  const std::size_t n = d.size();
  if (n == 0) return 1.0;
  std::vector<double> rank(n);
  for (std::size_t k = 0; k < n; ++k) {
    double less = 0.0, equal = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      less += std::abs(d[m]) < std::abs(d[k]);
      equal += std::abs(d[m]) == std::abs(d[k]);
    }
    rank[k] = less + (equal + 1.0) / 2.0;
  }
  double observed = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    if (d[k] > 0) observed += rank[k];
  std::uint64_t lower = 0, upper = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double w = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      if (mask >> k & 1U) w += rank[k];
    lower += w <= observed;
    upper += w >= observed;
  }
  const double total = std::ldexp(1.0, static_cast<int>(n));
  return std::min(1.0, 2.0 * static_cast<double>(std::min(lower, upper)) / total);
}

inline Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) m(i, j) = m(j, i) = u(rng);
  return m;
}

}  // namespace oracle
