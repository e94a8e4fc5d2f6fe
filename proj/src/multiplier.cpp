#include "archtest/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "archtest/parallel.hpp"

namespace archtest {

MultiplierDraw draw_multipliers(int n, Rng& rng) {
  if (n < 2) throw std::invalid_argument("multiplier draw needs n >= 2");
  MultiplierDraw draw;
  draw.xi.resize(n);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int attempt = 0; attempt < 1024; ++attempt) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      draw.xi[i] = 2.0 * coin(rng);
      sum += draw.xi[i];
    }
    if (sum > 0.0) {
      draw.xibar = sum / n;
      return draw;
    }
    ++draw.redraws;  // all-zero draw (probability 2^-n); try again
  }
  throw std::runtime_error("multiplier draw: RNG produced 1024 all-zero draws");
}

MultiplierProcess::MultiplierProcess(const EmpiricalCopula& ec,
                                     const MultiplierDraw& draw)
    : ec_(&ec),
      xibar_(draw.xibar),
      root_n_(std::sqrt(static_cast<double>(ec.n()))) {
  int n = ec.n();
  if (static_cast<int>(draw.xi.size()) != n) {
    throw std::invalid_argument("multiplier draw length must equal n");
  }
  if (draw.xibar == 0.0) {
    throw std::invalid_argument("multiplier draw has xibar == 0");
  }
  const auto& rm = ec.rank_matrix();
  std::size_t stride = n + 1;
  wcum_.assign(stride * stride, 0.0);
  for (int k = 0; k < n; ++k) {
    wcum_[static_cast<std::size_t>(rm.r1[k]) * stride + rm.r2[k]] += draw.xi[k];
  }
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      wcum_[i * stride + j] += wcum_[(i - 1) * stride + j] +
                               wcum_[i * stride + j - 1] -
                               wcum_[(i - 1) * stride + j - 1];
    }
  }
}

HnXiEvaluator::HnXiEvaluator(const EmpiricalCopula& ec, const Grid3& grid,
                             double h)
    : ec_(&ec), grid_(grid) {
  int m = grid.m;
  int n = ec.n();
  std::vector<int> node_idx(m);
  for (int i = 0; i < m; ++i) node_idx[i] = ec.lattice_index(grid.node(i));

  nodes_.reserve(grid.size());
  for (int ix = 0; ix < m; ++ix) {
    double x = grid.node(ix);
    for (int iy = 0; iy < m; ++iy) {
      double y = grid.node(iy);
      int kxy = ec.count(node_idx[ix], node_idx[iy]);
      double b = kxy / double(n);
      double d1_xy = ec.deriv_hat(1, x, y, h);
      double d2_xy = ec.deriv_hat(2, x, y, h);
      for (int iz = 0; iz < m; ++iz) {
        double z = grid.node(iz);
        int kyz = ec.count(node_idx[iy], node_idx[iz]);
        double a = kyz / double(n);
        Node node;
        node.ix = node_idx[ix];
        node.iy = node_idx[iy];
        node.iz = node_idx[iz];
        node.kyz = kyz;
        node.kxy = kxy;
        node.d1_xa = ec.deriv_hat(1, x, a, h);
        node.d2_xa = ec.deriv_hat(2, x, a, h);
        node.d1_bz = ec.deriv_hat(1, b, z, h);
        node.d2_bz = ec.deriv_hat(2, b, z, h);
        node.d1_yz = ec.deriv_hat(1, y, z, h);
        node.d2_yz = ec.deriv_hat(2, y, z, h);
        node.d1_xy = d1_xy;
        node.d2_xy = d2_xy;
        nodes_.push_back(node);
      }
    }
  }
}

ProcessField HnXiEvaluator::field(const MultiplierDraw& draw) const {
  MultiplierProcess alpha(*ec_, draw);
  int n = ec_->n();
  ProcessField out(grid_);
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const Node& nd = nodes_[k];
    // The four bracketed groups of the bootstrap process, with arguments
    // (x, C_n(y,z)), (C_n(x,y), z), (y,z) and (x,y).
    double g1 = alpha.alpha_at(nd.ix, nd.kyz) -
                nd.d1_xa * alpha.alpha_at(nd.ix, n) -
                nd.d2_xa * alpha.alpha_at(n, nd.kyz);
    double g2 = alpha.alpha_at(nd.kxy, nd.iz) -
                nd.d1_bz * alpha.alpha_at(nd.kxy, n) -
                nd.d2_bz * alpha.alpha_at(n, nd.iz);
    double g3 = alpha.alpha_at(nd.iy, nd.iz) -
                nd.d1_yz * alpha.alpha_at(nd.iy, n) -
                nd.d2_yz * alpha.alpha_at(n, nd.iz);
    double g4 = alpha.alpha_at(nd.ix, nd.iy) -
                nd.d1_xy * alpha.alpha_at(nd.ix, n) -
                nd.d2_xy * alpha.alpha_at(n, nd.iy);
    // Signs mirror the delta-method expansion of the limit field,
    //   H = G(x,a) - G(b,z) + dC2(x,a) G(y,z) - dC1(b,z) G(x,y),
    // with each G replaced by its recentred alpha bracket.
    out.values[k] = g1 - g2 + nd.d2_xa * g3 - nd.d1_bz * g4;
  }
  return out;
}

ProcessField hn_xi_field(const EmpiricalCopula& ec, const MultiplierDraw& draw,
                         const Grid3& grid, double h) {
  return HnXiEvaluator(ec, grid, h).field(draw);
}

BootstrapPair bootstrap_pair(const EmpiricalCopula& ec, const Grid3& grid,
                             double h, int B, std::uint64_t seed, int jobs) {
  if (B < 1) throw std::invalid_argument("bootstrap needs B >= 1");
  HnXiEvaluator evaluator(ec, grid, h);
  BootstrapPair out;
  out.l2.resize(B);
  out.ks.resize(B);
  std::vector<int> redraws(B, 0);
  parallel_for(jobs, static_cast<std::size_t>(B), [&](std::size_t b) {
    Rng rng = make_rng(seed, {stream::kBootstrap, b});
    MultiplierDraw draw = draw_multipliers(ec.n(), rng);
    ProcessField field = evaluator.field(draw);
    out.l2[b] = statistic_l2(field);
    out.ks[b] = statistic_ks(field);
    redraws[b] = draw.redraws;
  });
  for (int r : redraws) out.redraws += r;
  return out;
}

BootstrapSample bootstrap_statistics(const EmpiricalCopula& ec,
                                     const Grid3& grid, double h, int B,
                                     Statistic statistic, std::uint64_t seed,
                                     int jobs) {
  BootstrapPair pair = bootstrap_pair(ec, grid, h, B, seed, jobs);
  return {statistic == Statistic::kL2 ? std::move(pair.l2)
                                      : std::move(pair.ks)};
}

double quantile(const std::vector<double>& stats, double p) {
  if (stats.empty()) throw std::invalid_argument("quantile of empty sample");
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("quantile level must lie in (0,1)");
  }
  int b = static_cast<int>(stats.size());
  int k = static_cast<int>(std::ceil(p * b));
  k = std::clamp(k, 1, b);
  std::vector<double> sorted(stats);
  std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
  return sorted[k - 1];
}

}  // namespace archtest
