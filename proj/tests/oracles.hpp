#ifndef ARCHTEST_TESTS_ORACLES_HPP
#define ARCHTEST_TESTS_ORACLES_HPP

// Brute-force reference implementations used as oracles. Everything here is
// computed straight from the definitions (indicator sums, nested evaluation,
// term-by-term expressions) and stays independent of the library's lookup
// tables.

#include <algorithm>
#include <cmath>
#include <vector>

#include "archtest/copula.hpp"
#include "archtest/empirical_copula.hpp"
#include "archtest/multiplier.hpp"
#include "archtest/process.hpp"

namespace oracles {

using archtest::MultiplierDraw;
using archtest::RankMatrix;
using archtest::Sample;

inline int ceil_index(int n, double u) {
  if (u <= 0.0) return 0;
  if (u >= 1.0) return n;
  return std::min(n, std::max(0, static_cast<int>(std::ceil(u * n - 1e-9))));
}

// C_n(u) as a direct O(n) indicator sum.
inline double eval(const RankMatrix& rm, double u1, double u2) {
  int i = ceil_index(rm.n, u1);
  int j = ceil_index(rm.n, u2);
  int count = 0;
  for (int k = 0; k < rm.n; ++k) {
    if (rm.r1[k] <= i && rm.r2[k] <= j) ++count;
  }
  return count / double(rm.n);
}

// alpha_n^xi(u) as a direct weighted sum.
inline double alpha_xi(const RankMatrix& rm, const MultiplierDraw& draw,
                       double u1, double u2) {
  int i = ceil_index(rm.n, u1);
  int j = ceil_index(rm.n, u2);
  double cxi = 0.0;
  for (int k = 0; k < rm.n; ++k) {
    if (rm.r1[k] <= i && rm.r2[k] <= j) cxi += draw.xi[k] / draw.xibar;
  }
  cxi /= rm.n;
  return std::sqrt(double(rm.n)) * (cxi - eval(rm, u1, u2));
}

inline double hn(const RankMatrix& rm, double x, double y, double z) {
  double left = eval(rm, x, eval(rm, y, z));
  double right = eval(rm, eval(rm, x, y), z);
  return std::sqrt(double(rm.n)) * (left - right);
}

// The three-branch differential quotient, built on the oracle eval.
inline double deriv_hat(const RankMatrix& rm, int p, double u1, double u2,
                        double h) {
  double up = (p == 1) ? u1 : u2;
  double other = (p == 1) ? u2 : u1;
  auto cn = [&](double a, double b) {
    return (p == 1) ? eval(rm, a, b) : eval(rm, b, a);
  };
  double d;
  if (up >= h && up <= 1.0 - h) {
    d = (cn(up + h, other) - cn(up - h, other)) / (2.0 * h);
  } else if (up < h) {
    d = cn(2.0 * h, other) / (2.0 * h);
  } else {
    d = (other - cn(1.0 - 2.0 * h, other)) / (2.0 * h);
  }
  return std::clamp(d, 0.0, 1.0);
}

// H_n^xi at one point, written out term by term.
inline double hn_xi(const RankMatrix& rm, const MultiplierDraw& draw, double x,
                    double y, double z, double h) {
  double a = eval(rm, y, z);
  double b = eval(rm, x, y);
  double g1 = alpha_xi(rm, draw, x, a) -
              deriv_hat(rm, 1, x, a, h) * alpha_xi(rm, draw, x, 1.0) -
              deriv_hat(rm, 2, x, a, h) * alpha_xi(rm, draw, 1.0, a);
  double g2 = alpha_xi(rm, draw, b, z) -
              deriv_hat(rm, 1, b, z, h) * alpha_xi(rm, draw, b, 1.0) -
              deriv_hat(rm, 2, b, z, h) * alpha_xi(rm, draw, 1.0, z);
  double g3 = alpha_xi(rm, draw, y, z) -
              deriv_hat(rm, 1, y, z, h) * alpha_xi(rm, draw, y, 1.0) -
              deriv_hat(rm, 2, y, z, h) * alpha_xi(rm, draw, 1.0, z);
  double g4 = alpha_xi(rm, draw, x, y) -
              deriv_hat(rm, 1, x, y, h) * alpha_xi(rm, draw, x, 1.0) -
              deriv_hat(rm, 2, x, y, h) * alpha_xi(rm, draw, 1.0, y);
  return g1 - g2 + deriv_hat(rm, 2, x, a, h) * g3 -
         deriv_hat(rm, 1, b, z, h) * g4;
}

inline double statistic_l2(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return sum / double(values.size());
}

inline double statistic_ks(const std::vector<double>& values) {
  double sup = 0.0;
  for (double v : values) sup = std::max(sup, std::abs(v));
  return sup;
}

// Empirical Kendall tau, O(n^2) pair counting.
inline double kendall_tau(const Sample& sample) {
  int n = sample.n();
  long long concordant = 0, discordant = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double d1 = sample.rows[i][0] - sample.rows[j][0];
      double d2 = sample.rows[i][1] - sample.rows[j][1];
      double prod = d1 * d2;
      if (prod > 0) ++concordant;
      if (prod < 0) ++discordant;
    }
  }
  return double(concordant - discordant) / (0.5 * n * (n - 1));
}

inline Sample draw_sample(const archtest::Copula& model, int n,
                          archtest::Rng& rng) {
  Sample sample;
  sample.rows.reserve(n);
  for (int i = 0; i < n; ++i) {
    auto [u1, u2] = model.sample(rng);
    sample.rows.push_back({u1, u2});
  }
  return sample;
}

// Comonotone sample with distinct values.
inline Sample comonotone_sample(int n) {
  Sample sample;
  for (int i = 0; i < n; ++i) {
    double v = (i + 1) / double(n + 1);
    sample.rows.push_back({v, v});
  }
  return sample;
}

inline RankMatrix ranks_of(const Sample& sample) {
  archtest::Rng rng(12345);
  return archtest::ranks(sample, archtest::TiePolicy::kError, rng);
}

inline MultiplierDraw make_draw(std::vector<double> xi) {
  MultiplierDraw draw;
  double sum = 0.0;
  for (double v : xi) sum += v;
  draw.xibar = sum / xi.size();
  draw.xi = std::move(xi);
  return draw;
}

}  // namespace oracles

#endif  // ARCHTEST_TESTS_ORACLES_HPP
