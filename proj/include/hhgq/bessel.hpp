#pragma once

#include <vector>

namespace hhgq {

// J_0(x) .. J_{n_max}(x) for x >= 0, Miller downward recurrence with the
// sum-rule normalization J_0 + 2 sum J_{2k} = 1.
std::vector<double> bessel_j_array(int n_max, double x);

double bessel_j(int n, double x);

}  // namespace hhgq
