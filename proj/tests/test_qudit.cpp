#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "dsqc/qudit.hpp"

using namespace dsqc;
using cd = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

bool close(cd a, cd b, double tol = 1e-12) { return std::abs(a - b) < tol; }

// Entrywise U U^dagger - I by explicit loops, independent of Eigen products.
double naive_unitarity_deviation(const Operator<double>& u) {
    const auto n = u.rows();
    double worst = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            cd acc = 0;
            for (Eigen::Index k = 0; k < n; ++k) acc += u(i, k) * std::conj(u(j, k));
            worst = std::max(worst, std::abs(acc - (i == j ? cd(1) : cd(0))));
        }
    return worst;
}

std::vector<cd> naive_apply(const Operator<double>& u, const std::vector<cd>& v) {
    std::vector<cd> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t k = 0; k < v.size(); ++k) out[i] += u(i, k) * v[k];
    return out;
}

JointStated anti_correlated(double pa) {
    const double a = std::sqrt(pa), b = std::sqrt(1 - pa);
    Ket<double> v = Ket<double>::Zero(4);
    v(0 * 2 + 1) = a;  // |01>
    v(1 * 2 + 0) = b;  // |10>
    return JointStated(2, v);
}

// Binomial 4-sigma band.
bool within_4_sigma(std::size_t hits, std::size_t n, double p) {
    const double sigma = std::sqrt(static_cast<double>(n) * p * (1 - p));
    return std::abs(static_cast<double>(hits) - static_cast<double>(n) * p) <= 4 * sigma + 1e-9;
}

}  // namespace

TEST_CASE("zd_ket is the standard basis vector") {
    const auto s = zd_ket(2, 0);
    CHECK(close(s[0], 1));
    CHECK(close(s[1], 0));
    const auto t = zd_ket(3, 2);
    CHECK(close(t[0], 0));
    CHECK(close(t[1], 0));
    CHECK(close(t[2], 1));
    CHECK_THROWS_AS(zd_ket(4, 4), std::domain_error);
    CHECK_THROWS_AS(zd_ket(4, -1), std::domain_error);
    CHECK_THROWS_AS(zd_ket(17, 0), std::domain_error);
    CHECK_THROWS_AS(zd_ket(1, 0), std::domain_error);
}

TEST_CASE("xd_ket matches the Fourier vectors") {
    const double r = 1 / std::sqrt(2.0);
    CHECK(close(xd_ket(2, 0)[0], r));
    CHECK(close(xd_ket(2, 0)[1], r));
    CHECK(close(xd_ket(2, 1)[0], r));
    CHECK(close(xd_ket(2, 1)[1], -r));

    const double s = 1 / std::sqrt(3.0);
    const auto x = xd_ket(3, 1);
    CHECK(close(x[0], s));
    CHECK(close(x[1], s * std::polar(1.0, 2 * kPi / 3)));
    CHECK(close(x[2], s * std::polar(1.0, 4 * kPi / 3)));
    CHECK_THROWS_AS(xd_ket(3, 3), std::domain_error);
}

TEST_CASE("hadamard_d") {
    const auto h = hadamard_d(2).matrix();
    const double r = 1 / std::sqrt(2.0);
    CHECK(close(h(0, 0), r));
    CHECK(close(h(0, 1), r));
    CHECK(close(h(1, 0), r));
    CHECK(close(h(1, 1), -r));
    CHECK(same_up_to_phase(apply(hadamard_d(2), zd_ket(2, 0)), xd_ket(2, 0)));
    CHECK(same_up_to_phase(apply(hadamard_d(2), zd_ket(2, 1)), xd_ket(2, 1)));

    const auto hx = apply(hadamard_d(3), zd_ket(3, 1));
    for (int j = 0; j < 3; ++j) CHECK(close(hx[j], xd_ket(3, 1)[j], 1e-10));

    CHECK_THROWS_AS(hadamard_d(1), std::domain_error);

    SUBCASE("H_d|j> = |j>_x amplitude by amplitude, d <= 16") {
        for (int d = 2; d <= kMaxDim; ++d)
            for (int j = 0; j < d; ++j) {
                const auto a = apply(hadamard_d(d), zd_ket(d, j));
                const auto b = xd_ket(d, j);
                for (int k = 0; k < d; ++k) REQUIRE(close(a[k], b[k], 1e-10));
            }
    }
}

TEST_CASE("shift_unitary") {
    const auto id = shift_unitary(3, 0).matrix();
    CHECK((id - Operator<double>::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);

    const auto sx = shift_unitary(2, 1).matrix();
    CHECK(close(sx(0, 0), 0));
    CHECK(close(sx(0, 1), 1));
    CHECK(close(sx(1, 0), 1));
    CHECK(close(sx(1, 1), 0));

    CHECK(same_up_to_phase(apply(shift_unitary(3, 1), zd_ket(3, 2)), zd_ket(3, 0)));
    CHECK_THROWS_AS(shift_unitary(3, 3), std::domain_error);
}

TEST_CASE("phase_shift_unitary") {
    for (int d = 2; d <= kMaxDim; ++d) {
        const auto m0 = phase_shift_unitary(d, 0).matrix();
        CHECK((m0 - Operator<double>::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-15);
    }

    // 2x2 product by hand: U_1^x = [[0, -1], [1, 0]], so |+x> -> (-1, 1)/sqrt2 = -|-x>.
    const auto u = phase_shift_unitary(2, 1).matrix();
    const double r = 1 / std::sqrt(2.0);
    const auto out = naive_apply(u, {r, r});
    CHECK(close(out[0], -r));
    CHECK(close(out[1], r));
    const PureStated image(Eigen::Map<const Ket<double>>(out.data(), 2));
    CHECK(same_up_to_phase(image, xd_ket(2, 1)));

    for (int l = 0; l < 3; ++l) {
        const auto x = xd_ket(3, l);
        std::vector<cd> v(x.amps().data(), x.amps().data() + 3);
        const auto y = naive_apply(phase_shift_unitary(3, 1).matrix(), v);
        const PureStated img(Eigen::Map<const Ket<double>>(y.data(), 3));
        CHECK(same_up_to_phase(img, xd_ket(3, (l + 1) % 3)));
    }
    CHECK_THROWS_AS(phase_shift_unitary(2, 2), std::domain_error);
}

TEST_CASE("all constructed operators are unitary for d in [2, 16]") {
    for (int d = 2; d <= kMaxDim; ++d) {
        REQUIRE(naive_unitarity_deviation(hadamard_d(d).matrix()) < 1e-10);
        for (int m = 0; m < d; ++m) {
            REQUIRE(naive_unitarity_deviation(shift_unitary(d, m).matrix()) < 1e-10);
            REQUIRE(naive_unitarity_deviation(phase_shift_unitary(d, m).matrix()) < 1e-10);
        }
    }
}

TEST_CASE("shift families act on the bases as index shifts") {
    for (int d = 2; d <= kMaxDim; ++d)
        for (int m = 0; m < d; ++m)
            for (int j = 0; j < d; ++j) {
                REQUIRE(same_up_to_phase(apply(shift_unitary(d, m), zd_ket(d, j)), zd_ket(d, (j + m) % d)));
                REQUIRE(same_up_to_phase(apply(phase_shift_unitary(d, m), xd_ket(d, j)), xd_ket(d, (j + m) % d)));
                // U_m only rephases X_d eigenstates.
                REQUIRE(same_up_to_phase(apply(shift_unitary(d, m), xd_ket(d, j)), xd_ket(d, j)));
            }
}

TEST_CASE("non-unitary matrices are rejected") {
    Operator<double> m = Operator<double>::Identity(2, 2);
    m(0, 1) = 0.5;
    CHECK_THROWS_AS(Unitaryd{m}, InvariantViolation);
    Ket<double> v(2);
    v << 1.0, 1.0;
    CHECK_THROWS_AS(PureStated{v}, InvariantViolation);
    v << std::nan(""), 0.0;
    CHECK_THROWS_AS(PureStated{v}, InvariantViolation);
}

TEST_CASE("overlap") {
    for (int d = 2; d <= kMaxDim; ++d)
        for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l)
                REQUIRE(std::abs(std::norm(overlap(zd_ket(d, k), xd_ket(d, l))) - 1.0 / d) < 1e-10);
    CHECK(close(overlap(zd_ket(3, 0), zd_ket(3, 1)), 0));
    CHECK(close(overlap(xd_ket(5, 3), xd_ket(5, 3)), 1));
    CHECK_THROWS_AS(overlap(zd_ket(2, 0), zd_ket(3, 0)), std::domain_error);
}

TEST_CASE("joint index convention puts A on the slow index") {
    const auto s = tensor(zd_ket(3, 1), zd_ket(3, 2));
    CHECK(close(s.amps()(1 * 3 + 2), 1));
    CHECK(close(s.amp(1, 2), 1));
}

TEST_CASE("apply_local") {
    const auto psi = anti_correlated(0.8);
    const auto sx = shift_unitary(2, 1);
    const auto flipped = apply_local(apply_local(psi, Subsystem::A, sx), Subsystem::B, sx);
    // a|10> + b|01>
    CHECK(close(flipped.amp(1, 0), std::sqrt(0.8)));
    CHECK(close(flipped.amp(0, 1), std::sqrt(0.2)));

    const std::vector<double> p = {0.5, 0.3, 0.2};
    Ket<double> v = Ket<double>::Zero(9);
    for (int j = 0; j < 3; ++j) v(j * 3 + j) = std::sqrt(p[j]);
    const JointStated pair(3, v);
    for (int m = 0; m < 3; ++m) {
        const auto u = shift_unitary(3, m);
        const auto shifted = apply_local(apply_local(pair, Subsystem::A, u), Subsystem::B, u);
        for (int j = 0; j < 3; ++j) CHECK(close(shifted.amp((j + m) % 3, (j + m) % 3), std::sqrt(p[j]), 1e-12));
        CHECK(std::abs(shifted.amps().squaredNorm() - 1) < 1e-10);
    }

    const auto same = apply_local(psi, Subsystem::A, identity(2));
    CHECK((same.amps() - psi.amps()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK_THROWS_AS(apply_local(psi, Subsystem::A, identity(3)), std::domain_error);
    CHECK_THROWS_AS(apply_local(psi, Subsystem::Whole, identity(2)), std::domain_error);
}

TEST_CASE("measuring |+x> in Z_d is a fair coin") {
    RandomStream rng(11);
    const std::size_t n = 100000;
    std::size_t ones = 0;
    for (std::size_t i = 0; i < n; ++i) {
        auto s = xd_ket(2, 0);
        ones += measure(s, Basis::Zd, rng).outcome;
    }
    CHECK(within_4_sigma(ones, n, 0.5));
}

TEST_CASE("measuring A of a|01>+b|10> collapses B to the anti-correlated value") {
    RandomStream rng(12);
    const std::size_t n = 100000;
    std::size_t zeros = 0;
    for (std::size_t i = 0; i < n; ++i) {
        auto s = anti_correlated(0.8);
        const auto r = measure(s, Subsystem::A, Basis::Zd, rng);
        zeros += r.outcome == 0;
        const auto b = factor(s, Subsystem::B);
        REQUIRE(same_up_to_phase(b, zd_ket(2, 1 - r.outcome)));
    }
    CHECK(within_4_sigma(zeros, n, 0.8));
}

TEST_CASE("X-basis statistics of the anti-correlated pair") {
    // Four-amplitude expansion: <++|psi> = (a+b)/2, <--|psi> = -(a+b)/2,
    // <+-|psi> = (b-a)/2, <-+|psi> = (a-b)/2.
    for (double pa : {0.5, 0.8, 0.2, 1.0}) {
        const double a = std::sqrt(pa), b = std::sqrt(1 - pa);
        const auto psi = anti_correlated(pa);
        const auto c = [&](int x, int y) {
            return std::conj(xd_ket(2, x)[0]) * std::conj(xd_ket(2, y)[1]) * psi.amp(0, 1) +
                   std::conj(xd_ket(2, x)[1]) * std::conj(xd_ket(2, y)[0]) * psi.amp(1, 0);
        };
        CHECK(close(c(0, 0), (a + b) / 2));
        CHECK(close(c(1, 1), -(a + b) / 2));
        CHECK(close(c(0, 1), (b - a) / 2));
        CHECK(close(c(1, 0), (a - b) / 2));
    }

    RandomStream rng(13);
    const std::size_t n = 20000;
    std::size_t same = 0;
    for (std::size_t i = 0; i < n; ++i) {
        auto s = anti_correlated(0.5);
        const auto ra = measure(s, Subsystem::A, Basis::Xd, rng);
        const auto rb = measure(s, Subsystem::B, Basis::Xd, rng);
        same += ra.outcome == rb.outcome;
    }
    CHECK(same == n);
}

TEST_CASE("Born statistics over 1e5 trials, d = 5") {
    Ket<double> v(5);
    v << 0.1, cd(0.3, 0.2), 0.4, cd(0, -0.5), 0.2;
    v /= v.norm();
    const PureStated s0(v);
    RandomStream rng(14);
    const std::size_t n = 100000;
    std::vector<std::size_t> counts(5);
    for (std::size_t i = 0; i < n; ++i) {
        auto s = s0;
        ++counts[measure(s, Basis::Zd, rng).outcome];
    }
    for (int k = 0; k < 5; ++k) CHECK(within_4_sigma(counts[k], n, std::norm(v(k))));

    const auto px = outcome_probabilities(s0, Basis::Xd);
    double total = 0;
    for (double x : px) total += x;
    CHECK(std::abs(total - 1) < 1e-12);
}

TEST_CASE("measurement is idempotent on its output") {
    RandomStream rng(15);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 2 + trial % 15;
        const Basis basis = trial % 2 ? Basis::Xd : Basis::Zd;
        auto s = xd_ket(d, trial % d);
        const auto first = measure(s, basis, rng);
        for (int again = 0; again < 3; ++again) REQUIRE(measure(s, basis, rng).outcome == first.outcome);
    }
}

TEST_CASE("long double instantiation") {
    const auto h = hadamard_d<long double>(7);
    CHECK(max_unitarity_deviation(h.matrix()) < 1e-15);
    CHECK(same_up_to_phase(apply(h, zd_ket<long double>(7, 3)), xd_ket<long double>(7, 3)));
}
