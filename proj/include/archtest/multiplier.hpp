#ifndef ARCHTEST_MULTIPLIER_HPP
#define ARCHTEST_MULTIPLIER_HPP

#include <cstdint>
#include <vector>

#include "archtest/empirical_copula.hpp"
#include "archtest/process.hpp"

namespace archtest {

// One vector of i.i.d. multiplier weights, drawn uniformly from {0,2}
// (mean 1, variance 1); the ratio xi_i/xibar recenters implicitly.
struct MultiplierDraw {
  std::vector<double> xi;
  double xibar = 0.0;
  int redraws = 0;  // all-zero draws discarded before this one
};

MultiplierDraw draw_multipliers(int n, Rng& rng);

// The multiplier empirical-copula process
//   alpha_n^xi(u) = sqrt(n) ( C_n^xi(u) - C_n(u) ),
//   C_n^xi(u)     = n^-1 sum_i (xi_i/xibar) 1{R_i1 <= ceil(n u1), R_i2 <= ceil(n u2)},
// backed by a weighted cumulative table for O(1) lookups. Holds a pointer
// to the EmpiricalCopula, which must outlive it.
class MultiplierProcess {
 public:
  MultiplierProcess(const EmpiricalCopula& ec, const MultiplierDraw& draw);

  double alpha(double u1, double u2) const {
    return alpha_at(ec_->lattice_index(u1), ec_->lattice_index(u2));
  }
  // Lattice variant: arguments are cumulative-count indices in 0..n.
  double alpha_at(int i, int j) const {
    double cxi = wcum_[static_cast<std::size_t>(i) * (ec_->n() + 1) + j] /
                 (ec_->n() * xibar_);
    return root_n_ * (cxi - ec_->count(i, j) / double(ec_->n()));
  }

 private:
  const EmpiricalCopula* ec_;
  double xibar_;
  double root_n_;
  std::vector<double> wcum_;
};

// Per-dataset evaluator for the bootstrap process H_n^xi of the multiplier
// approximation: caches everything that does not depend on the weights
// (node lattice indices, the inner C_n compositions and the eight partial
// derivative estimates per node), so each replication only performs the
// alpha lookups.
class HnXiEvaluator {
 public:
  HnXiEvaluator(const EmpiricalCopula& ec, const Grid3& grid, double h);

  ProcessField field(const MultiplierDraw& draw) const;
  const Grid3& grid() const { return grid_; }

 private:
  struct Node {
    int ix, iy, iz;    // lattice indices of the grid node coordinates
    int kyz, kxy;      // n*C_n(y,z) and n*C_n(x,y)
    double d1_xa, d2_xa;  // derivative estimates at (x, C_n(y,z))
    double d1_bz, d2_bz;  // at (C_n(x,y), z)
    double d1_yz, d2_yz;  // at (y, z)
    double d1_xy, d2_xy;  // at (x, y)
  };

  const EmpiricalCopula* ec_;
  Grid3 grid_;
  std::vector<Node> nodes_;
};

// Convenience single-shot form of the bootstrap field.
ProcessField hn_xi_field(const EmpiricalCopula& ec, const MultiplierDraw& draw,
                         const Grid3& grid, double h);

struct BootstrapSample {
  std::vector<double> stats;
};

// Both statistic reductions of the same B bootstrap replications (one field
// per replication, reduced twice). Replication b draws its weights from the
// child stream (seed, kBootstrap, b), so the result is independent of the
// execution order and of the worker count.
struct BootstrapPair {
  std::vector<double> l2, ks;
  int redraws = 0;
};

BootstrapPair bootstrap_pair(const EmpiricalCopula& ec, const Grid3& grid,
                             double h, int B, std::uint64_t seed,
                             int jobs = 1);

BootstrapSample bootstrap_statistics(const EmpiricalCopula& ec,
                                     const Grid3& grid, double h, int B,
                                     Statistic statistic, std::uint64_t seed,
                                     int jobs = 1);

// Order-statistic quantile: the ceil(p*B)-th smallest value.
double quantile(const std::vector<double>& stats, double p);

}  // namespace archtest

#endif  // ARCHTEST_MULTIPLIER_HPP
