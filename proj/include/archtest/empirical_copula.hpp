#ifndef ARCHTEST_EMPIRICAL_COPULA_HPP
#define ARCHTEST_EMPIRICAL_COPULA_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "archtest/rng.hpp"

namespace archtest {

struct Sample {
  std::vector<std::array<double, 2>> rows;
  int n() const { return static_cast<int>(rows.size()); }
};

// Componentwise ranks, each column a permutation of 1..n after tie
// resolution.
struct RankMatrix {
  int n = 0;
  std::vector<int> r1, r2;
};

enum class TiePolicy { kError, kRandomBreak };

struct TieError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ranks of the sample. Under kRandomBreak, ties are broken by a seeded
// uniform perturbation so each column is a permutation; under kError any
// tie aborts with a message naming the column and value.
RankMatrix ranks(const Sample& sample, TiePolicy policy, Rng& tie_rng);

// The empirical copula C_n as a cumulative rank-count table:
//   cum[i][j] = #{k : R_k1 <= i and R_k2 <= j},
// which makes C_n(u) = cum[ceil(n u1)][ceil(n u2)]/n an O(1) lookup.
class EmpiricalCopula {
 public:
  explicit EmpiricalCopula(RankMatrix ranks);

  int n() const { return n_; }
  const RankMatrix& rank_matrix() const { return ranks_; }

  std::int32_t count(int i, int j) const { return cum_[idx(i, j)]; }

  // ceil(n*u) with ceil(n*0) := 0; tolerates floating noise just below a
  // lattice point so that eval((i/n, 1)) is exactly i/n.
  int lattice_index(double u) const;

  double eval(double u1, double u2) const {
    return count(lattice_index(u1), lattice_index(u2)) / double(n_);
  }

  // Differential-quotient estimator of the p-th partial derivative (p is 1
  // or 2), three branches depending on whether u_p is within h of the
  // boundary; clamped to [0,1]. Requires h in (0, 1/2).
  double deriv_hat(int p, double u1, double u2, double h) const;

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * (n_ + 1) + j;
  }

  int n_;
  RankMatrix ranks_;
  std::vector<std::int32_t> cum_;
};

}  // namespace archtest

#endif  // ARCHTEST_EMPIRICAL_COPULA_HPP
