#include "hhgq/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace hhgq {

std::vector<double> bessel_j_array(int n_max, double x) {
    if (x < 0.0) throw std::invalid_argument("bessel_j_array: x must be >= 0");
    std::vector<double> out(n_max + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    // start high enough that the downward recurrence has converged at n_max
    const int start = n_max + int(std::ceil(std::sqrt(40.0 * (n_max + 1)))) +
                      int(std::ceil(x)) + 20;
    double jp1 = 0.0;
    double j = 1e-300;
    double sum = 0.0;  // J_0 + 2 sum_{k>=1} J_{2k}
    for (int k = start; k >= 0; --k) {
        const double jm1 = (2.0 * (k + 1) / x) * j - jp1;
        jp1 = j;
        j = jm1;
        // jp1 now holds J_{k+1} candidate, j holds J_k candidate
        if (k <= n_max) out[k] = j;
        if (k > 0 && k % 2 == 0) sum += 2.0 * j;
        // rescale to avoid overflow
        if (std::abs(j) > 1e250) {
            j *= 1e-250;
            jp1 *= 1e-250;
            sum *= 1e-250;
            for (auto& v : out) v *= 1e-250;
        }
    }
    sum += j;  // j == J_0 candidate
    for (auto& v : out) v /= sum;
    return out;
}

double bessel_j(int n, double x) { return bessel_j_array(n, x)[n]; }

}  // namespace hhgq
