#ifndef ARCHTEST_PROCESS_HPP
#define ARCHTEST_PROCESS_HPP

#include <iosfwd>
#include <vector>

#include "archtest/empirical_copula.hpp"

namespace archtest {

enum class Statistic { kL2, kKS };

// Midpoint-rule lattice {(i+1/2)/m}^3 over the open unit cube.
struct Grid3 {
  int m = 20;

  explicit Grid3(int points_per_axis = 20) : m(points_per_axis) {
    if (m < 2) throw std::invalid_argument("grid must have m >= 2");
  }
  double node(int i) const { return (i + 0.5) / m; }
  std::size_t size() const {
    return static_cast<std::size_t>(m) * m * m;
  }
};

// Values of an associativity process on a Grid3, indexed (x, y, z).
struct ProcessField {
  Grid3 grid;
  std::vector<double> values;

  explicit ProcessField(Grid3 g) : grid(g), values(g.size(), 0.0) {}
  double& at(int ix, int iy, int iz) {
    return values[(static_cast<std::size_t>(ix) * grid.m + iy) * grid.m + iz];
  }
  double at(int ix, int iy, int iz) const {
    return values[(static_cast<std::size_t>(ix) * grid.m + iy) * grid.m + iz];
  }
};

// The associativity process
//   H_n(x,y,z) = sqrt(n) { C_n(x, C_n(y,z)) - C_n(C_n(x,y), z) }
// evaluated on the grid. Computed in exact integer rank arithmetic: the
// inner C_n values are lattice points k/n, so the nested evaluation is a
// pure table composition.
ProcessField hn_field(const EmpiricalCopula& ec, const Grid3& grid);

// Cramer-von-Mises reduction: midpoint quadrature of the squared field,
// (1/m^3) sum of values^2, accumulated in node-index order.
double statistic_l2(const ProcessField& field);

// Kolmogorov-Smirnov reduction: max |value| over nodes.
double statistic_ks(const ProcessField& field);

// Debug export: one "x,y,z,value" CSV row per node.
void dump_field(const ProcessField& field, std::ostream& out);

}  // namespace archtest

#endif  // ARCHTEST_PROCESS_HPP
