#include <doctest.h>

#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "hhgq/errors.hpp"
#include "hhgq/operators.hpp"
#include "hhgq/state.hpp"

using namespace hhgq;

namespace {

QuantumState random_state(std::mt19937_64& rng, std::vector<int> n_max,
                          AtomLabeling labeling = AtomLabeling::Energy) {
    QuantumState st;
    st.labeling = labeling;
    for (int nm : n_max) st.mode_bases.push_back(FockBasis{nm, {0.0, 0.0}});
    std::normal_distribution<double> g;
    st.amplitudes.resize(st.dim());
    for (Eigen::Index i = 0; i < st.amplitudes.size(); ++i) st.amplitudes(i) = Complex(g(rng), g(rng));
    st.amplitudes /= st.amplitudes.norm();
    return st;
}

// brute-force displacement operator by exponentiating gamma*adag - conj(gamma)*a
Matrix displacement_by_expm(int dim, Complex gamma) {
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    Matrix gen = gamma * a.adjoint() - std::conj(gamma) * a;
    return gen.exp();
}

}  // namespace

TEST_CASE("displacement matrix elements: closed form") {
    CHECK(displacement_matrix_element(0, 0, {0.0, 0.0}) == Complex{1.0, 0.0});

    const Complex gamma{0.3, -0.45};
    const double x = std::norm(gamma);
    CHECK(std::abs(displacement_matrix_element(0, 0, gamma) - std::exp(-0.5 * x)) < 1e-15);
    CHECK(std::abs(displacement_matrix_element(1, 0, gamma) - gamma * std::exp(-0.5 * x)) < 1e-15);
}

TEST_CASE("displacement matrix elements: matrix-exponential oracle") {
    std::vector<Complex> gammas = {{0.7, 0.0}, {-0.2, 0.5}, {1.3, -0.8}, {0.05, 0.0}};
    for (const Complex gamma : gammas) {
        for (int n = 0; n <= 6; ++n)
            for (int m = 0; m <= 6; ++m) {
                const int dim = n + m + 25;
                const Matrix D = displacement_by_expm(dim, gamma);
                const Complex expect = D(n, m);
                const Complex got = displacement_matrix_element(n, m, gamma);
                CHECK(std::abs(got - expect) < 1e-12);
                CHECK(std::abs(got) <= 1.0 + 1e-12);
            }
    }
}

TEST_CASE("displacement matrix unitarity on the retained block") {
    // The displaced Fock distribution spreads like |gamma| sqrt(n), so the
    // truncation has to leave that much headroom above the checked block.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        Complex gamma{u(rng), u(rng)};
        if (std::abs(gamma) > 2.0) gamma *= 2.0 / std::abs(gamma);
        const double g = std::abs(gamma);
        const int keep = 11;
        const int n_max =
            keep + int(std::ceil(std::norm(gamma) + 8.0 * g * std::sqrt(double(keep)))) + 10;
        CHECK(n_max >= int(4.0 * std::norm(gamma)) + 10);
        const Matrix D = displacement_matrix(n_max + 1, n_max + 1, gamma);
        const Matrix I = D.adjoint() * D;
        for (int r = 0; r < keep; ++r)
            for (int c = 0; c < keep; ++c)
                CHECK(std::abs(I(r, c) - (r == c ? 1.0 : 0.0)) < 1e-8);
    }
}

TEST_CASE("mode operators on the truncated basis") {
    const FockBasis b{8, {0.0, 0.0}};
    const ModeOperators op = build_mode_operators(b);

    const FockBasis b1{1, {0.0, 0.0}};
    const ModeOperators op1 = build_mode_operators(b1);
    CHECK(op1.a(0, 1) == Complex{1.0, 0.0});
    CHECK(op1.a(1, 0) == Complex{0.0, 0.0});

    // [a, adag] = 1 except the top corner
    Matrix comm = op.a * op.adag - op.adag * op.a;
    for (int r = 0; r < 9; ++r)
        for (int c = 0; c < 9; ++c) {
            const Complex want = (r == c) ? ((r == 8) ? Complex(-8.0, 0.0) : Complex(1.0, 0.0))
                                          : Complex(0.0, 0.0);
            CHECK(std::abs(comm(r, c) - want) < 1e-12);
        }

    Eigen::SelfAdjointEigenSolver<Matrix> es(op.n);
    for (int k = 0; k <= 8; ++k) CHECK(es.eigenvalues()(k) == doctest::Approx(k).epsilon(1e-12));
}

TEST_CASE("expectation basics and oracle") {
    QuantumState vac = QuantumState::ground_vacuum({FockBasis{4, {0.0, 0.0}}});
    CHECK(std::abs(expectation(vac, ops::n(0))) < 1e-15);
    CHECK(std::real(expectation(vac, ops::sigma_z())) == doctest::Approx(-1.0).epsilon(1e-14));

    std::mt19937_64 rng(42);
    const QuantumState st = random_state(rng, {5, 3});

    // direct label-weighted sum for <N_1^2>
    double direct = 0.0;
    int idx = 0;
    for (int s = 0; s < 2; ++s)
        for (int n1 = 0; n1 <= 5; ++n1)
            for (int n2 = 0; n2 <= 3; ++n2, ++idx)
                direct += double(n1) * double(n1) * std::norm(st.amplitudes(idx));
    CHECK(std::real(expectation(st, ops::n_sq(0))) == doctest::Approx(direct).epsilon(1e-12));

    // dimension mismatch rejected
    CHECK_THROWS_AS((void)expectation(vac, ops::n(3)), ConfigError);
}

TEST_CASE("expectation is sesquilinear-consistent and real for Hermitian specs") {
    std::mt19937_64 rng(3);
    const QuantumState st = random_state(rng, {4, 2});
    const OperatorSpec op = ops::sigma_x() * ops::a(0) * ops::n(1) * Complex(0.3, 1.7) +
                            ops::sigma_y() * ops::adag(0) * Complex(-0.2, 0.4);
    const Complex e = expectation(st, op);
    const Complex edag = expectation(st, op.adjoint());
    CHECK(std::abs(edag - std::conj(e)) < 1e-13);

    for (const OperatorSpec& h :
         {ops::axis_pm(ops::Axis::U, 0, -1), ops::axis_pm(ops::Axis::V, 1, +1),
          ops::axis_npm(ops::Axis::W, 0, -1), ops::axis_pp_mm(ops::Axis::V, 0, -1)}) {
        const Complex v = expectation(st, h);
        CHECK(std::abs(std::imag(v)) <= 1e-10 * (1.0 + std::abs(v)));
    }
}

TEST_CASE("atom operator tables agree across labelings") {
    std::mt19937_64 rng(11);
    QuantumState st = random_state(rng, {3});
    BasisTarget tgt;
    tgt.labeling = AtomLabeling::SigmaX;
    tgt.mode_bases = st.mode_bases;
    const QuantumState stx = convert_basis(st, tgt);
    for (const auto& op : {ops::sigma_x(), ops::sigma_y(), ops::sigma_z()}) {
        const Complex a = expectation(st, op);
        const Complex b = stx.amplitudes.dot(apply_operator(stx, op));
        CHECK(std::abs(a - b) < 1e-13);
    }
}

TEST_CASE("convert_basis: identity, coherent expansion, round trip") {
    std::mt19937_64 rng(5);
    QuantumState st = random_state(rng, {6});

    BasisTarget same;
    same.mode_bases = st.mode_bases;
    const QuantumState id = convert_basis(st, same);
    CHECK((id.amplitudes - st.amplitudes).norm() < 1e-14);

    // |0, gamma> expands with Poissonian amplitudes
    const double gamma = 0.6;
    QuantumState disp = QuantumState::ground_vacuum({FockBasis{10, {gamma, 0.0}}});
    BasisTarget plain;
    plain.mode_bases = {FockBasis{24, {0.0, 0.0}}};
    const QuantumState expanded = convert_basis(disp, plain);
    for (int n = 0; n <= 10; ++n) {
        const double want =
            std::exp(-0.5 * gamma * gamma) * std::pow(gamma, n) / std::sqrt(std::tgamma(n + 1.0));
        CHECK(std::abs(expanded.amplitudes(n) - want) < 1e-12);
    }

    // round trip plain -> displaced -> plain
    BasisTarget displaced;
    displaced.mode_bases = {FockBasis{30, {0.35, -0.2}}};
    QuantumState st6 = random_state(rng, {6});
    const QuantumState there = convert_basis(st6, displaced);
    BasisTarget back;
    back.mode_bases = {FockBasis{6, {0.0, 0.0}}};
    const QuantumState again = convert_basis(there, back, 1e-9);
    CHECK((again.amplitudes - st6.amplitudes).cwiseAbs().maxCoeff() < 1e-10);

    // expectations preserved under conversion
    const Complex before = expectation(st6, ops::n(0));
    const Complex after = expectation(there, ops::n(0));
    CHECK(std::abs(before - after) < 1e-8);

    // truncation too small reports lost weight
    BasisTarget crush;
    crush.mode_bases = {FockBasis{1, {0.0, 0.0}}};
    CHECK_THROWS_AS((void)convert_basis(st6, crush), PhysicsGuardError);
}

TEST_CASE("branch-displaced conversion round trip") {
    std::mt19937_64 rng(9);
    QuantumState st = random_state(rng, {5}, AtomLabeling::SigmaX);
    BasisTarget branched;
    branched.labeling = AtomLabeling::SigmaX;
    branched.branch_displacement = true;
    branched.mode_bases = {FockBasis{24, {0.4, 0.0}}};
    const QuantumState there = convert_basis(st, branched);
    CHECK(std::abs(there.norm() - 1.0) < 1e-10);

    BasisTarget back;
    back.labeling = AtomLabeling::SigmaX;
    back.mode_bases = {FockBasis{5, {0.0, 0.0}}};
    const QuantumState again = convert_basis(there, back, 1e-9);
    CHECK((again.amplitudes - st.amplitudes).cwiseAbs().maxCoeff() < 1e-9);

    // energy-labeled observable via to_plain_energy
    const Complex n_before = expectation(st, ops::n(0));
    const Complex n_after = expectation(there, ops::n(0));
    CHECK(std::abs(n_before - n_after) < 1e-8);
}

TEST_CASE("state snapshot round trip") {
    std::mt19937_64 rng(13);
    QuantumState st = random_state(rng, {3, 2}, AtomLabeling::SigmaX);
    st.branch_displacement = true;
    st.mode_bases[0].displacement = Complex(-0.125, 0.0);
    const std::string path = "state_roundtrip_test.txt";
    save_state(st, path);
    const QuantumState back = load_state(path);
    REQUIRE(back.amplitudes.size() == st.amplitudes.size());
    CHECK((back.amplitudes - st.amplitudes).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.labeling == st.labeling);
    CHECK(back.branch_displacement == st.branch_displacement);
    CHECK(back.mode_bases[0].displacement == st.mode_bases[0].displacement);
    std::remove(path.c_str());
}
