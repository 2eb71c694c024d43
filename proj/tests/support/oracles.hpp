// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations used by the unit and acceptance
// tests. None of these call into the library's numerical code.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace oracle {

// ---- hierarchical softmax ----

/// -sum log sigma(s_j <c, n_j>) in long double, s_j = +1 for bit 0.
inline long double hs_loss(const std::vector<double>& c, const std::vector<std::vector<double>>& nodes,
                           const std::vector<std::uint8_t>& code) {
  long double loss = 0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    long double f = 0;
    for (std::size_t k = 0; k < c.size(); ++k) f += static_cast<long double>(c[k]) * nodes[j][k];
    long double s = code[j] ? -1.0L : 1.0L;
    loss += std::log1p(std::exp(-s * f));
  }
  return loss;
}

struct FdGradient {
  std::vector<double> center;
  std::vector<std::vector<double>> nodes;
};

/// Central differences with step h on every coordinate.
inline FdGradient hs_fd_gradient(std::vector<double> c, std::vector<std::vector<double>> nodes,
                                 const std::vector<std::uint8_t>& code, double h) {
  FdGradient g;
  for (std::size_t k = 0; k < c.size(); ++k) {
    double keep = c[k];
    c[k] = keep + h;
    long double up = hs_loss(c, nodes, code);
    c[k] = keep - h;
    long double dn = hs_loss(c, nodes, code);
    c[k] = keep;
    g.center.push_back(static_cast<double>((up - dn) / (2.0L * h)));
  }
  for (auto& n : nodes) {
    std::vector<double> gn;
    for (std::size_t k = 0; k < n.size(); ++k) {
      double keep = n[k];
      n[k] = keep + h;
      long double up = hs_loss(c, nodes, code);
      n[k] = keep - h;
      long double dn = hs_loss(c, nodes, code);
      n[k] = keep;
      gn.push_back(static_cast<double>((up - dn) / (2.0L * h)));
    }
    g.nodes.push_back(gn);
  }
  return g;
}

// ---- Huffman ----

/// Minimum weighted external path length over all full binary trees, by
/// trying every pair merge order.
inline std::uint64_t optimal_code_cost(std::vector<std::uint64_t> w) {
  if (w.size() <= 1) return 0;
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      std::vector<std::uint64_t> next;
      for (std::size_t k = 0; k < w.size(); ++k)
        if (k != i && k != j) next.push_back(w[k]);
      next.push_back(w[i] + w[j]);
      best = std::min(best, w[i] + w[j] + optimal_code_cost(next));
    }
  return best;
}

// ---- symmetric eigenvalues ----

/// Cyclic Jacobi rotations; eigenvalues sorted descending.
inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a, int sweeps = 100) {
  const std::size_t n = a.size();
  for (int s = 0; s < sweeps; ++s) {
    double off = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        double c = 1 / std::sqrt(t * t + 1), sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - sn * akq;
          a[k][q] = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - sn * aqk;
          a[q][k] = sn * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

/// Sample covariance (divisor N-1) of row-major data.
inline std::vector<std::vector<double>> covariance(const std::vector<std::vector<double>>& x) {
  const std::size_t n = x.size(), d = x[0].size();
  std::vector<double> mean(d, 0.0);
  for (const auto& r : x)
    for (std::size_t j = 0; j < d; ++j) mean[j] += r[j] / static_cast<double>(n);
  std::vector<std::vector<double>> c(d, std::vector<double>(d, 0.0));
  for (const auto& r : x)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) c[i][j] += (r[i] - mean[i]) * (r[j] - mean[j]) / static_cast<double>(n - 1);
  return c;
}

// ---- farthest-point sampling ----

// Same floating-point formula as the library so exact ties stay exact.
inline double cos_dist(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  double na = std::hypot(a[0], a[1]);
  double nb = std::hypot(b[0], b[1]);
  if (na == 0 || nb == 0) return 0.0;
  return 1.0 - (a[0] * b[0] + a[1] * b[1]) / (na * nb);
}

/// Recomputes every candidate's minimum distance to the whole selected set at
/// each step; ties go to the lowest index.
inline std::vector<std::size_t> exhaustive_fps(const std::vector<std::array<double, 2>>& pts, std::size_t start,
                                               std::size_t n) {
  std::vector<std::size_t> order{start};
  std::vector<bool> used(pts.size(), false);
  used[start] = true;
  while (order.size() < n) {
    double best = -1;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (used[i]) continue;
      double m = std::numeric_limits<double>::infinity();
      for (auto s : order) m = std::min(m, cos_dist(pts[i], pts[s]));
      if (m > best) {
        best = m;
        arg = i;
      }
    }
    used[arg] = true;
    order.push_back(arg);
  }
  return order;
}

// ---- Pareto ----

/// dirs[a] = +1 to maximize axis a, -1 to minimize.
inline std::vector<std::size_t> brute_front(const std::vector<std::array<double, 2>>& p, std::array<int, 2> dirs) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < p.size() && !dominated; ++j) {
      bool geq = true, gt = false;
      for (int a = 0; a < 2; ++a) {
        double vj = dirs[a] * p[j][a], vi = dirs[a] * p[i][a];
        if (vj < vi) geq = false;
        if (vj > vi) gt = true;
      }
      dominated = geq && gt;
    }
    if (!dominated) out.push_back(i);
  }
  return out;
}

// ---- combinatorics ----

inline std::uint64_t pascal(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::uint64_t>> t(n + 1, std::vector<std::uint64_t>(n + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) {
    t[i][0] = 1;
    for (std::size_t j = 1; j <= i; ++j) t[i][j] = t[i - 1][j - 1] + t[i - 1][j];
  }
  return k > n ? 0 : t[n][k];
}

// ---- files ----

inline std::filesystem::path temp_dir(const std::string& tag) {
  static std::mt19937_64 gen(std::random_device{}());
  auto p = std::filesystem::temp_directory_path() / ("corpusrefine-" + tag + "-" + std::to_string(gen() % 1000000000));
  std::filesystem::create_directories(p);
  return p;
}

inline void write_text(const std::filesystem::path& p, const std::string& s) {
  std::ofstream(p, std::ios::binary) << s;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace oracle
