#include "hhgq/fock.hpp"

#include <cmath>

namespace hhgq {

double laguerre(int k, double alpha, double x) {
    if (k == 0) return 1.0;
    double lm1 = 1.0;
    double l = 1.0 + alpha - x;
    for (int i = 1; i < k; ++i) {
        double lp1 = ((2.0 * i + 1.0 + alpha - x) * l - (i + alpha) * lm1) / (i + 1.0);
        lm1 = l;
        l = lp1;
    }
    return l;
}

Complex displacement_matrix_element(int n, int m, Complex gamma) {
    if (gamma == Complex{0.0, 0.0}) return n == m ? 1.0 : 0.0;
    const double x = std::norm(gamma);
    const int p = std::min(n, m);
    const int d = std::abs(n - m);
    // sqrt(p!/q!) * gamma^d (or (-conj(gamma))^d) accumulated factor by
    // factor to stay in range for large quantum numbers.
    Complex pref{1.0, 0.0};
    const Complex step = (n >= m) ? gamma : -std::conj(gamma);
    for (int k = p + 1; k <= p + d; ++k) pref *= step / std::sqrt(double(k));
    return pref * std::exp(-0.5 * x) * laguerre(p, double(d), x);
}

Matrix displacement_matrix(int rows, int cols, Complex gamma) {
    Matrix out(rows, cols);
    for (int n = 0; n < rows; ++n)
        for (int m = 0; m < cols; ++m) out(n, m) = displacement_matrix_element(n, m, gamma);
    return out;
}

ModeOperators build_mode_operators(const FockBasis& basis) {
    const int d = basis.dim();
    ModeOperators op;
    op.a = Matrix::Zero(d, d);
    for (int n = 1; n < d; ++n) op.a(n - 1, n) = std::sqrt(double(n));
    op.adag = op.a.adjoint();
    op.n = op.adag * op.a;
    op.a2 = op.a * op.a;
    op.adag2 = op.adag * op.adag;
    op.x = 0.5 * (op.adag + op.a);
    op.y = Complex(0.0, 0.5) * (op.adag - op.a);
    return op;
}

}  // namespace hhgq
