#include "archtest/empirical_copula.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace archtest {

namespace {

std::vector<int> column_ranks(const Sample& sample, int col, TiePolicy policy,
                              Rng& tie_rng) {
  int n = sample.n();
  std::vector<double> jitter(n, 0.0);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  auto value = [&](int k) { return sample.rows[k][col]; };

  if (policy == TiePolicy::kRandomBreak) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int k = 0; k < n; ++k) jitter[k] = dist(tie_rng);
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (value(a) != value(b)) return value(a) < value(b);
    return jitter[a] < jitter[b];
  });
  if (policy == TiePolicy::kError) {
    for (int k = 1; k < n; ++k) {
      if (value(order[k]) == value(order[k - 1])) {
        std::ostringstream os;
        os << "tie in column " << (col + 1) << ": value "
           << value(order[k]) << " occurs more than once";
        throw TieError(os.str());
      }
    }
  }
  std::vector<int> r(n);
  for (int k = 0; k < n; ++k) r[order[k]] = k + 1;
  return r;
}

}  // namespace

RankMatrix ranks(const Sample& sample, TiePolicy policy, Rng& tie_rng) {
  int n = sample.n();
  if (n < 2) {
    throw std::invalid_argument("sample must contain at least 2 rows");
  }
  for (int k = 0; k < n; ++k) {
    if (!std::isfinite(sample.rows[k][0]) || !std::isfinite(sample.rows[k][1])) {
      std::ostringstream os;
      os << "non-finite value in row " << (k + 1);
      throw std::invalid_argument(os.str());
    }
  }
  RankMatrix rm;
  rm.n = n;
  rm.r1 = column_ranks(sample, 0, policy, tie_rng);
  rm.r2 = column_ranks(sample, 1, policy, tie_rng);
  return rm;
}

EmpiricalCopula::EmpiricalCopula(RankMatrix rm)
    : n_(rm.n), ranks_(std::move(rm)) {
  if (n_ < 2) {
    throw std::invalid_argument("rank matrix must have n >= 2");
  }
  cum_.assign(static_cast<std::size_t>(n_ + 1) * (n_ + 1), 0);
  for (int k = 0; k < n_; ++k) {
    cum_[idx(ranks_.r1[k], ranks_.r2[k])] += 1;
  }
  // 2-D prefix sums turn the point counts into cumulative counts.
  for (int i = 1; i <= n_; ++i) {
    for (int j = 1; j <= n_; ++j) {
      cum_[idx(i, j)] +=
          cum_[idx(i - 1, j)] + cum_[idx(i, j - 1)] - cum_[idx(i - 1, j - 1)];
    }
  }
}

int EmpiricalCopula::lattice_index(double u) const {
  if (u <= 0.0) return 0;
  if (u >= 1.0) return n_;
  int i = static_cast<int>(std::ceil(u * n_ - 1e-9));
  return std::clamp(i, 0, n_);
}

double EmpiricalCopula::deriv_hat(int p, double u1, double u2, double h) const {
  if (!(h > 0.0 && h < 0.5)) {
    throw std::invalid_argument("bandwidth h must lie in (0, 1/2)");
  }
  double up = (p == 1) ? u1 : u2;
  double other = (p == 1) ? u2 : u1;
  auto cn = [&](double a, double b) {
    return (p == 1) ? eval(a, b) : eval(b, a);
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

}  // namespace archtest
