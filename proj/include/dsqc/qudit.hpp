// qudit.hpp
// Exact state algebra for one qudit and one two-qudit pair, 2 <= d <= 16.
//
// Joint states use A as the slow index: amps[j * d + k] is the coefficient of
// |j>_A (x) |k>_B. Viewed as a row-major d x d coefficient matrix C(j, k), a
// local operator u acts as C -> u C on A and C -> C u^T on B.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsqc/random.hpp"

namespace dsqc {

inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 16;
inline constexpr double kTolerance = 1e-10;

template <typename Scalar>
using Complex = std::complex<Scalar>;
template <typename Scalar>
using Ket = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using Operator = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

/// Raised when a stored state or operator breaks its algebraic invariant.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

enum class Basis { Zd, Xd };
enum class Subsystem { Whole, A, B };

inline const char* to_string(Basis b) { return b == Basis::Zd ? "Z" : "X"; }

struct MeasurementRecord {
    static constexpr std::size_t kNoState = std::numeric_limits<std::size_t>::max();

    Basis basis = Basis::Zd;
    int outcome = 0;
    /// Registry id of the collapsed state, when the state lives in a registry.
    std::size_t post_state = kNoState;
};

namespace detail {

inline void check_dim(int d) {
    if (d < kMinDim || d > kMaxDim)
        throw std::domain_error("qudit dimension " + std::to_string(d) + " outside [2, 16]");
}

inline void check_index(int d, int j, const char* what) {
    check_dim(d);
    if (j < 0 || j >= d)
        throw std::domain_error(std::string(what) + " index " + std::to_string(j) +
                                " outside [0, " + std::to_string(d) + ")");
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
    const auto& e = m.derived();
    for (Eigen::Index c = 0; c < e.cols(); ++c)
        for (Eigen::Index r = 0; r < e.rows(); ++r) {
            const auto z = e(r, c);
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        }
    return true;
}

}  // namespace detail

/// e^{2 pi i k / d}, with k reduced mod d first so large exponents stay exact.
template <typename Scalar = double>
Complex<Scalar> root_of_unity(int d, long long k) {
    const long long r = ((k % d) + d) % d;
    const Scalar angle = Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(r) / Scalar(d);
    return std::polar(Scalar(1), angle);
}

/// Normalised single-qudit state.
template <typename Scalar = double>
class PureState {
public:
    explicit PureState(Ket<Scalar> amps) : amps_(std::move(amps)) {
        detail::check_dim(dim());
        if (!detail::all_finite(amps_)) throw InvariantViolation("non-finite amplitude");
        if (std::abs(amps_.squaredNorm() - Scalar(1)) > kTolerance)
            throw InvariantViolation("single-qudit state is not normalised");
    }

    int dim() const { return static_cast<int>(amps_.size()); }
    const Ket<Scalar>& amps() const { return amps_; }
    Complex<Scalar> operator[](int j) const { return amps_(j); }

private:
    Ket<Scalar> amps_;
};

/// Normalised two-qudit state, d^2 amplitudes with A as the slow index.
template <typename Scalar = double>
class JointState {
public:
    using CoefficientMap =
        Eigen::Map<const Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

    JointState(int d, Ket<Scalar> amps) : dim_(d), amps_(std::move(amps)) {
        detail::check_dim(d);
        if (amps_.size() != static_cast<Eigen::Index>(d) * d)
            throw std::domain_error("joint state needs d*d amplitudes");
        if (!detail::all_finite(amps_)) throw InvariantViolation("non-finite amplitude");
        if (std::abs(amps_.squaredNorm() - Scalar(1)) > kTolerance)
            throw InvariantViolation("joint state is not normalised");
    }

    int dim() const { return dim_; }
    const Ket<Scalar>& amps() const { return amps_; }
    Complex<Scalar> amp(int a, int b) const { return amps_(static_cast<Eigen::Index>(a) * dim_ + b); }

    /// Coefficient matrix C(a, b) = amp(a, b).
    CoefficientMap coefficients() const { return CoefficientMap(amps_.data(), dim_, dim_); }

private:
    int dim_;
    Ket<Scalar> amps_;
};

template <typename Derived>
double max_unitarity_deviation(const Eigen::MatrixBase<Derived>& m) {
    const auto n = m.rows();
    using C = typename Derived::Scalar;
    const auto gram = (m * m.adjoint()).eval();
    const auto id = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>::Identity(n, n);
    return static_cast<double>((gram - id).cwiseAbs().maxCoeff());
}

/// d x d unitary operator.
template <typename Scalar = double>
class Unitary {
public:
    explicit Unitary(Operator<Scalar> matrix) : matrix_(std::move(matrix)) {
        if (matrix_.rows() != matrix_.cols()) throw std::domain_error("unitary must be square");
        detail::check_dim(dim());
        if (!detail::all_finite(matrix_)) throw InvariantViolation("non-finite matrix entry");
        if (max_unitarity_deviation(matrix_) > kTolerance)
            throw InvariantViolation("matrix is not unitary");
    }

    int dim() const { return static_cast<int>(matrix_.rows()); }
    const Operator<Scalar>& matrix() const { return matrix_; }
    Unitary adjoint() const { return Unitary(matrix_.adjoint()); }

    friend Unitary operator*(const Unitary& lhs, const Unitary& rhs) {
        if (lhs.dim() != rhs.dim()) throw std::domain_error("unitary dimension mismatch");
        return Unitary(lhs.matrix_ * rhs.matrix_);
    }

private:
    Operator<Scalar> matrix_;
};

// ---------------------------------------------------------------------------
// Bases

/// Standard basis vector |j>.
template <typename Scalar = double>
PureState<Scalar> zd_ket(int d, int j) {
    detail::check_index(d, j, "Z_d");
    Ket<Scalar> v = Ket<Scalar>::Zero(d);
    v(j) = Scalar(1);
    return PureState<Scalar>(std::move(v));
}

/// Fourier basis vector |l>_x = d^{-1/2} sum_j e^{2 pi i j l / d} |j>.
template <typename Scalar = double>
PureState<Scalar> xd_ket(int d, int l) {
    detail::check_index(d, l, "X_d");
    const Scalar norm = Scalar(1) / std::sqrt(Scalar(d));
    Ket<Scalar> v(d);
    for (int j = 0; j < d; ++j) v(j) = norm * root_of_unity<Scalar>(d, static_cast<long long>(j) * l);
    return PureState<Scalar>(std::move(v));
}

template <typename Scalar = double>
PureState<Scalar> basis_ket(int d, Basis basis, int k) {
    return basis == Basis::Zd ? zd_ket<Scalar>(d, k) : xd_ket<Scalar>(d, k);
}

/// Matrix whose column k is eigenvector k of the basis.
template <typename Scalar = double>
Operator<Scalar> basis_matrix(int d, Basis basis) {
    detail::check_dim(d);
    Operator<Scalar> w(d, d);
    for (int k = 0; k < d; ++k) w.col(k) = basis_ket<Scalar>(d, basis, k).amps();
    return w;
}

// ---------------------------------------------------------------------------
// Operators

template <typename Scalar = double>
Unitary<Scalar> identity(int d) {
    detail::check_dim(d);
    return Unitary<Scalar>(Operator<Scalar>::Identity(d, d));
}

/// H_d with entries d^{-1/2} e^{2 pi i j k / d}; maps |j> to |j>_x.
template <typename Scalar = double>
Unitary<Scalar> hadamard_d(int d) {
    if (d < kMinDim) throw std::domain_error("hadamard_d requires d >= 2");
    return Unitary<Scalar>(basis_matrix<Scalar>(d, Basis::Xd));
}

/// Cyclic shift U_m = sum_j |j+m mod d><j|.
template <typename Scalar = double>
Unitary<Scalar> shift_unitary(int d, int m) {
    detail::check_index(d, m, "shift");
    Operator<Scalar> u = Operator<Scalar>::Zero(d, d);
    for (int j = 0; j < d; ++j) u((j + m) % d, j) = Scalar(1);
    return Unitary<Scalar>(std::move(u));
}

/// Phase-twisted shift U_m^x = sum_j e^{2 pi i j m / d} |j+m mod d><j|.
/// Maps |l>_x to |l+m mod d>_x up to a global phase.
template <typename Scalar = double>
Unitary<Scalar> phase_shift_unitary(int d, int m) {
    detail::check_index(d, m, "phase shift");
    Operator<Scalar> u = Operator<Scalar>::Zero(d, d);
    for (int j = 0; j < d; ++j) u((j + m) % d, j) = root_of_unity<Scalar>(d, static_cast<long long>(j) * m);
    return Unitary<Scalar>(std::move(u));
}

// ---------------------------------------------------------------------------
// Application

template <typename Scalar>
PureState<Scalar> apply(const Unitary<Scalar>& u, const PureState<Scalar>& s) {
    if (u.dim() != s.dim()) throw std::domain_error("operator/state dimension mismatch");
    Ket<Scalar> out = u.matrix() * s.amps();
    return PureState<Scalar>(out / out.norm());
}

/// (u (x) I) or (I (x) u) applied to a joint state.
template <typename Scalar>
JointState<Scalar> apply_local(const JointState<Scalar>& state, Subsystem sub, const Unitary<Scalar>& u) {
    if (u.dim() != state.dim()) throw std::domain_error("operator/state dimension mismatch");
    if (sub == Subsystem::Whole) throw std::domain_error("apply_local needs subsystem A or B");
    const int d = state.dim();
    using RowMajor = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    RowMajor c = sub == Subsystem::A ? RowMajor(u.matrix() * state.coefficients())
                                     : RowMajor(state.coefficients() * u.matrix().transpose());
    Ket<Scalar> amps = Eigen::Map<Ket<Scalar>>(c.data(), static_cast<Eigen::Index>(d) * d);
    return JointState<Scalar>(d, amps / amps.norm());
}

/// |a> (x) |b>.
template <typename Scalar>
JointState<Scalar> tensor(const PureState<Scalar>& a, const PureState<Scalar>& b) {
    if (a.dim() != b.dim()) throw std::domain_error("tensor of unequal dimensions");
    const int d = a.dim();
    Ket<Scalar> amps(static_cast<Eigen::Index>(d) * d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) amps(static_cast<Eigen::Index>(j) * d + k) = a[j] * b[k];
    return JointState<Scalar>(d, std::move(amps));
}

/// <s1|s2>.
template <typename Scalar>
Complex<Scalar> overlap(const PureState<Scalar>& s1, const PureState<Scalar>& s2) {
    if (s1.dim() != s2.dim()) throw std::domain_error("overlap of unequal dimensions");
    return s1.amps().dot(s2.amps());
}

template <typename Scalar>
Scalar fidelity(const PureState<Scalar>& s1, const PureState<Scalar>& s2) {
    return std::norm(overlap(s1, s2));
}

/// Equality up to global phase: |<u|v>|^2 = 1 within tolerance.
template <typename Scalar>
bool same_up_to_phase(const PureState<Scalar>& s1, const PureState<Scalar>& s2, double tol = kTolerance) {
    return s1.dim() == s2.dim() && std::abs(fidelity(s1, s2) - Scalar(1)) < tol;
}

// ---------------------------------------------------------------------------
// Measurement

/// Born probabilities of each basis outcome.
template <typename Scalar>
std::vector<Scalar> outcome_probabilities(const PureState<Scalar>& s, Basis basis) {
    const Ket<Scalar> coeffs = basis_matrix<Scalar>(s.dim(), basis).adjoint() * s.amps();
    std::vector<Scalar> p(static_cast<std::size_t>(s.dim()));
    for (int k = 0; k < s.dim(); ++k) p[k] = std::norm(coeffs(k));
    return p;
}

namespace detail {

template <typename Scalar>
using RowMajorOp = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Rows of the result are the (unnormalised) partner vectors for each outcome.
template <typename Scalar>
RowMajorOp<Scalar> partner_vectors(const JointState<Scalar>& s, Subsystem sub, Basis basis) {
    const Operator<Scalar> w = basis_matrix<Scalar>(s.dim(), basis);
    if (sub == Subsystem::A) return w.adjoint() * s.coefficients();
    if (sub == Subsystem::B) return (s.coefficients() * w.conjugate()).transpose();
    throw std::domain_error("joint measurement needs subsystem A or B");
}

template <typename Scalar>
int sample(const std::vector<Scalar>& p, RandomStream& rng) {
    Scalar total = 0;
    for (auto x : p) total += x;
    if (std::abs(total - Scalar(1)) > 1e-8) throw InvariantViolation("outcome probabilities do not sum to 1");
    const Scalar u = static_cast<Scalar>(rng.uniform_real()) * total;
    Scalar acc = 0;
    int last = -1;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] <= 0) continue;
        last = static_cast<int>(k);
        acc += p[k];
        if (u < acc) return last;
    }
    return last;
}

template <typename Scalar>
void check_normalised(const Ket<Scalar>& amps) {
    if (std::abs(amps.squaredNorm() - Scalar(1)) > kTolerance)
        throw InvariantViolation("measuring an unnormalised state");
}

}  // namespace detail

template <typename Scalar>
std::vector<Scalar> outcome_probabilities(const JointState<Scalar>& s, Subsystem sub, Basis basis) {
    const auto v = detail::partner_vectors(s, sub, basis);
    std::vector<Scalar> p(static_cast<std::size_t>(s.dim()));
    for (int k = 0; k < s.dim(); ++k) p[k] = v.row(k).squaredNorm();
    return p;
}

/// Projective measurement; `s` collapses to the measured eigenstate.
template <typename Scalar>
MeasurementRecord measure(PureState<Scalar>& s, Basis basis, RandomStream& rng) {
    detail::check_normalised(s.amps());
    const int k = detail::sample(outcome_probabilities(s, basis), rng);
    s = basis_ket<Scalar>(s.dim(), basis, k);
    return {basis, k};
}

/// Measures one subsystem of a pair. The state collapses to
/// |k>_basis (x) (conditional partner state), renormalised.
template <typename Scalar>
MeasurementRecord measure(JointState<Scalar>& s, Subsystem sub, Basis basis, RandomStream& rng) {
    detail::check_normalised(s.amps());
    const auto v = detail::partner_vectors(s, sub, basis);
    std::vector<Scalar> p(static_cast<std::size_t>(s.dim()));
    for (int k = 0; k < s.dim(); ++k) p[k] = v.row(k).squaredNorm();
    const int k = detail::sample(p, rng);

    Ket<Scalar> partner = v.row(k).transpose();
    partner /= partner.norm();
    const PureState<Scalar> measured = basis_ket<Scalar>(s.dim(), basis, k);
    const PureState<Scalar> rest(std::move(partner));
    s = sub == Subsystem::A ? tensor(measured, rest) : tensor(rest, measured);
    return {basis, k};
}

/// Local state of one subsystem of a product joint state. Throws if the pair
/// is still entangled.
template <typename Scalar>
PureState<Scalar> factor(const JointState<Scalar>& s, Subsystem sub) {
    // A product state has a rank-one coefficient matrix.
    const auto c = s.coefficients();
    Eigen::Index row = 0, col = 0;
    c.cwiseAbs2().maxCoeff(&row, &col);
    Ket<Scalar> v = sub == Subsystem::A ? Ket<Scalar>(c.col(col)) : Ket<Scalar>(c.row(row).transpose());
    v /= v.norm();
    Ket<Scalar> w = sub == Subsystem::A ? Ket<Scalar>(c.row(row).transpose()) : Ket<Scalar>(c.col(col));
    w /= w.norm();
    const PureState<Scalar> first(v), second(w);
    const auto rebuilt = sub == Subsystem::A ? tensor(first, second) : tensor(second, first);
    if (std::abs(std::norm(rebuilt.amps().dot(s.amps())) - Scalar(1)) > 1e-9)
        throw std::domain_error("joint state is entangled; no local factor");
    return first;
}

using PureStated = PureState<double>;
using JointStated = JointState<double>;
using Unitaryd = Unitary<double>;

}  // namespace dsqc
