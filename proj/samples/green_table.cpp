// CSV of the 2D free Green's function against separation, closed form and
// numerical Laplace transform side by side.

#include <iostream>

#include "gupqm/gupqm.hpp"

using namespace gupqm;

int main() {
  CsvTable table{{"separation", "alpha", "closed", "numeric", "rel_diff"}, {}};
  for (double alpha : {0.0, 5e-3})
    for (double r = 0.25; r <= 3.0; r += 0.25) {
      const GreenQuery g{1.0, {0.0, 0.0}, {r, 0.0}, {1.0, 1.0, 0.0, alpha, 2}};
      const double closed = green_free_2d_closed(g);
      const double numeric = laplace_numeric(g).value;
      table.add_row({r, alpha, closed, numeric, std::abs(numeric - closed) / closed});
    }
  write_csv(std::cout, table);
}
