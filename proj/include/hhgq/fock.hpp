#pragma once

#include <complex>
#include <Eigen/Dense>

namespace hhgq {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

// Truncated single-mode Fock basis |n, gamma> = D(gamma)|n>, n = 0..n_max.
// gamma = 0 is the plain number basis.
struct FockBasis {
    int n_max = 8;
    Complex displacement{0.0, 0.0};

    int dim() const { return n_max + 1; }
    bool displaced() const { return displacement != Complex{0.0, 0.0}; }
};

// Associated Laguerre polynomial L_k^{(alpha)}(x), upward three-term
// recursion in the degree k (stable for the arguments used here).
double laguerre(int k, double alpha, double x);

// <n|D(gamma)|m> with D(gamma) = exp(gamma a^dag - conj(gamma) a),
// closed form via associated Laguerre polynomials. Total function,
// |result| <= 1 for all arguments.
Complex displacement_matrix_element(int n, int m, Complex gamma);

// Dense rows x cols block of <n|D(gamma)|m>.
Matrix displacement_matrix(int rows, int cols, Complex gamma);

// Single-mode operator matrices on the truncated basis. N = adag*a holds
// exactly; [a, adag] = 1 except in the top corner (truncation artifact).
struct ModeOperators {
    Matrix a, adag, n, a2, adag2, x, y;
};

ModeOperators build_mode_operators(const FockBasis& basis);

}  // namespace hhgq
