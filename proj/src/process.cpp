#include "archtest/process.hpp"

#include <cmath>
#include <ostream>

namespace archtest {

ProcessField hn_field(const EmpiricalCopula& ec, const Grid3& grid) {
  ProcessField field(grid);
  int m = grid.m;
  int n = ec.n();
  double root_n = std::sqrt(static_cast<double>(n));

  std::vector<int> node_idx(m);
  for (int i = 0; i < m; ++i) node_idx[i] = ec.lattice_index(grid.node(i));

  for (int ix = 0; ix < m; ++ix) {
    for (int iy = 0; iy < m; ++iy) {
      int inner_xy = ec.count(node_idx[ix], node_idx[iy]);
      for (int iz = 0; iz < m; ++iz) {
        int inner_yz = ec.count(node_idx[iy], node_idx[iz]);
        int left = ec.count(node_idx[ix], inner_yz);
        int right = ec.count(inner_xy, node_idx[iz]);
        field.at(ix, iy, iz) = root_n * (left - right) / n;
      }
    }
  }
  return field;
}

double statistic_l2(const ProcessField& field) {
  double sum = 0.0;
  for (double v : field.values) sum += v * v;
  return sum / static_cast<double>(field.values.size());
}

double statistic_ks(const ProcessField& field) {
  double sup = 0.0;
  for (double v : field.values) sup = std::max(sup, std::abs(v));
  return sup;
}

void dump_field(const ProcessField& field, std::ostream& out) {
  out << "x,y,z,value\n";
  int m = field.grid.m;
  for (int ix = 0; ix < m; ++ix) {
    for (int iy = 0; iy < m; ++iy) {
      for (int iz = 0; iz < m; ++iz) {
        out << field.grid.node(ix) << ',' << field.grid.node(iy) << ','
            << field.grid.node(iz) << ',' << field.at(ix, iy, iz) << '\n';
      }
    }
  }
}

}  // namespace archtest
