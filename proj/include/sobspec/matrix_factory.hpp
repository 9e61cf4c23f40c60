#ifndef SOBSPEC_MATRIX_FACTORY_HPP
#define SOBSPEC_MATRIX_FACTORY_HPP

// Truncated Jacobi matrices of dmu, (x-c)dmu, (x-c)^2 dmu obtained by the
// Cholesky-commute chain
//
//   J - cI = L L^T,   L^T L = J[1] - cI = L1 L1^T,   L1^T L1 = J[2] - cI,
//
// the pair Q = L L1^{-T}, R = (L L1)^T, the Sobolev five-diagonal matrix H
// and the connection matrix T, plus residual checks of the identities that
// tie them together. When c lies to the right of the support every shifted
// matrix is replaced by cI - J (`Side::right`), and the sign is carried
// through the whole chain.

#include "sobspec/banded_matrix.hpp"
#include "sobspec/sobolev.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace sobspec {

enum class Side { left, right };

/// +1 for Side::left (factor J - cI), -1 for Side::right (factor cI - J).
inline int side_sign(Side s) { return s == Side::left ? 1 : -1; }

/// Side implied by the position of c relative to the support.
template <class T>
Side side_for(const Support<T>& support, const T& c) {
    if (support.lower && c <= *support.lower) return Side::left;
    if (support.upper && c >= *support.upper) return Side::right;
    throw invalid_parameter("side_for: c lies inside the support");
}

/// Symmetric tridiagonal: diagonal beta_n, off-diagonal sqrt(gamma_{n+1}).
template <class T>
BandedMatrix<T> build_jacobi(const RecurrenceTable<T>& rec, std::size_t size, std::string name = "J") {
    using std::sqrt;
    if (size > rec.size()) throw index_error("build_jacobi: size exceeds recurrence table");
    BandedMatrix<T> J(std::move(name), size, size, 1, 1, size);
    for (std::size_t n = 0; n < size; ++n) {
        J.ref(n, n) = rec.beta(n);
        if (n + 1 < size) {
            T off = sqrt(rec.gamma(n + 1));
            J.ref(n, n + 1) = off;
            J.ref(n + 1, n) = off;
        }
    }
    return J;
}

/// Lower bidiagonal L with positive diagonal and L L^T = J - cI (left) or
/// cI - J (right). Tridiagonal Cholesky is forward-local, so the truncated
/// factor is exact wherever J is.
template <class T>
BandedMatrix<T> cholesky_shifted(const BandedMatrix<T>& J, const T& c, Side side, std::string name = "L") {
    using std::sqrt;
    const std::size_t n = J.nrows();
    const int s = side_sign(side);
    BandedMatrix<T> L(std::move(name), n, n, 1, 0, J.exact_size());
    T prev_diag(0);
    for (std::size_t i = 0; i < n; ++i) {
        T pivot = s * (J(i, i) - c);
        if (i > 0) {
            T sub = s * J(i, i - 1) / prev_diag;
            L.ref(i, i - 1) = sub;
            pivot -= sub * sub;
        }
        if (!(pivot > 0))
            throw not_positive_definite("cholesky_shifted: nonpositive pivot at row " + std::to_string(i) +
                                        " (c inside or too close to the support)");
        prev_diag = sqrt(pivot);
        L.ref(i, i) = prev_diag;
    }
    return L;
}

/// Next Jacobi matrix L^T L + cI (left) or cI - L^T L (right). The last
/// diagonal entry needs a truncated-off row of L, so exact_size drops by one.
template <class T>
BandedMatrix<T> commute_cholesky(const BandedMatrix<T>& L, const T& c, Side side, std::string name = {}) {
    auto P = multiply(L.transpose(), L);
    const int s = side_sign(side);
    auto out = (s > 0 ? P : P.scaled(T(-1))).plus_identity(c, name.empty() ? std::string("J'") : std::move(name));
    out.set_exact_size(L.exact_size() > 0 ? L.exact_size() - 1 : 0);
    return out;
}

template <class T = Real>
struct QRPair {
    BandedMatrix<T> Q;
    BandedMatrix<T> R;
};

/// Q = L L1^{-T} (lower bandwidth 1, dense above the diagonal) and
/// R = (L L1)^T (upper triangular, bandwidth 2).
template <class T>
QRPair<T> qr_pair(const BandedMatrix<T>& L, const BandedMatrix<T>& L1) {
    const std::size_t n = std::min(L.nrows(), L1.nrows());
    std::size_t e = std::min(L.exact_size(), L1.exact_size());
    e = e > 0 ? e - 1 : 0;

    // X = (L1^T)^{-1}, upper triangular. Leading blocks of a triangular
    // inverse are inverses of the leading blocks, so X is exact where L1 is.
    std::vector<std::vector<T>> X(n, std::vector<T>(n, T(0)));
    for (std::size_t j = 0; j < n; ++j) {
        X[j][j] = 1 / L1(j, j);
        for (std::size_t i = j; i-- > 0;) X[i][j] = -L1(i + 1, i) * X[i + 1][j] / L1(i, i);
    }
    BandedMatrix<T> Q("Q", n, n, 1, n - 1, e);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = (i > 0 ? i - 1 : 0); j < n; ++j) {
            T v = L(i, i) * X[i][j];
            if (i > 0) v += L(i, i - 1) * X[i - 1][j];
            Q.ref(i, j) = std::move(v);
        }
    auto R = multiply(L.leading(n, n), L1.leading(n, n)).transpose("R");
    R.set_exact_size(e);
    return {std::move(Q), std::move(R)};
}

/// Five-diagonal symmetric H from (a_n, b_n, c_n).
template <class T>
BandedMatrix<T> build_H(const SobolevLedger<T>& ledger, std::size_t size) {
    if (size > ledger.size()) throw index_error("build_H: size exceeds ledger");
    BandedMatrix<T> H("H", size, size, 2, 2, size);
    for (std::size_t n = 0; n < size; ++n) {
        H.ref(n, n) = ledger.cdiag(n);
        if (n >= 1) {
            H.ref(n, n - 1) = ledger.b(n);
            H.ref(n - 1, n) = ledger.b(n);
        }
        if (n >= 2) {
            H.ref(n, n - 2) = ledger.a(n);
            H.ref(n - 2, n) = ledger.a(n);
        }
    }
    return H;
}

/// Lower triangular T with T(n, k) = gamma_{k,n}, k = n-2..n.
template <class T>
BandedMatrix<T> build_T(const SobolevLedger<T>& ledger, std::size_t size) {
    if (size > ledger.size()) throw index_error("build_T: size exceeds ledger");
    BandedMatrix<T> Tm("T", size, size, 2, 0, size);
    for (std::size_t n = 0; n < size; ++n) {
        Tm.ref(n, n) = ledger.gamma_nn(n);
        if (n >= 1) Tm.ref(n, n - 1) = ledger.gamma_n1(n);
        if (n >= 2) Tm.ref(n, n - 2) = ledger.gamma_n2(n);
    }
    return Tm;
}

/// Every matrix of the construction for one Sobolev spec, built at
/// `size + guard` so that the leading `size` block of each identity is exact.
template <class T = Real>
struct FactorizationChain {
    std::size_t size = 0;
    std::size_t guard = 0;
    Side side = Side::left;
    T c{0};
    BandedMatrix<T> J, L, J1, L1, J2, Q, R, Tm, H;

    /// s (J - cI) with s = +1 on the left side, -1 on the right.
    BandedMatrix<T> shifted_J() const { return J.plus_identity(-c).scaled(T(side_sign(side)), "J-cI"); }
    BandedMatrix<T> shifted_J2() const { return J2.plus_identity(-c).scaled(T(side_sign(side)), "J2-cI"); }
};

inline constexpr std::size_t default_guard = 4;

template <class T>
FactorizationChain<T> build_chain(const SobolevSpec<T>& spec, std::size_t size, std::size_t guard = default_guard) {
    if (size < 1) throw invalid_parameter("build_chain: size must be positive");
    const std::size_t n = size + guard;
    auto rec = spec.base.recurrence(n + 2);
    SobolevLedger<T> ledger(rec, spec, n);
    FactorizationChain<T> ch;
    ch.size = size;
    ch.guard = guard;
    ch.side = side_for(spec.base.support(), spec.c);
    ch.c = spec.c;
    ch.J = build_jacobi(rec, n, "J");
    ch.L = cholesky_shifted(ch.J, spec.c, ch.side, "L");
    ch.J1 = commute_cholesky(ch.L, spec.c, ch.side, "J1");
    ch.L1 = cholesky_shifted(ch.J1, spec.c, ch.side, "L1");
    ch.J2 = commute_cholesky(ch.L1, spec.c, ch.side, "J2");
    auto qr = qr_pair(ch.L, ch.L1);
    ch.Q = std::move(qr.Q);
    ch.R = std::move(qr.R);
    ch.Tm = build_T(ledger, n);
    ch.H = build_H(ledger, n);
    return ch;
}

template <class T = Real>
struct Residual {
    std::string name;
    std::string identity;
    T value;
};

template <class T = Real>
struct ResidualReport {
    std::size_t block = 0;
    std::vector<Residual<T>> residuals;

    T max() const {
        T m(0);
        for (const auto& r : residuals)
            if (r.value > m) m = r.value;
        return m;
    }
    bool passes(const T& tol) const {
        for (const auto& r : residuals)
            if (!(r.value <= tol)) return false;
        return true;
    }
    const Residual<T>& at(const std::string& name) const {
        for (const auto& r : residuals)
            if (r.name == name) return r;
        throw index_error("residual report: no entry " + name);
    }
};

/// Max-entry relative residuals of the factorization identities on the
/// leading `chain.size` block. Prop. numbering follows the usual order:
/// H = T T^T, HT = T (J2-cI)^2, QR = J-cI, RQ = J2-cI, (J2-cI)^2 = R R^T,
/// (J-cI)^2 = R^T R, R R^T = T^T T, plus Q^T Q = I.
template <class T>
ResidualReport<T> verify_identities(const FactorizationChain<T>& ch) {
    const std::size_t n = ch.size;
    auto A = ch.shifted_J();
    auto B = ch.shifted_J2();
    auto A2 = multiply(A, A, "(J-cI)^2");
    auto B2 = multiply(B, B, "(J2-cI)^2");
    auto Tt = ch.Tm.transpose();
    auto Rt = ch.R.transpose();
    ResidualReport<T> rep;
    rep.block = n;
    auto add = [&](std::string name, std::string identity, const BandedMatrix<T>& X, const BandedMatrix<T>& Y) {
        rep.residuals.push_back({std::move(name), std::move(identity), relative_residual(X, Y, n)});
    };
    add("H=TT^T", "H = T T^T", ch.H, multiply(ch.Tm, Tt));
    add("HT=T(J2-cI)^2", "H T = T (J2 - cI)^2", multiply(ch.H, ch.Tm), multiply(ch.Tm, B2));
    add("QR=J-cI", "Q R = J - cI", multiply(ch.Q, ch.R), A);
    add("RQ=J2-cI", "R Q = J2 - cI", multiply(ch.R, ch.Q), B);
    add("(J2-cI)^2=RR^T", "(J2 - cI)^2 = R R^T", B2, multiply(ch.R, Rt));
    add("(J-cI)^2=R^TR", "(J - cI)^2 = R^T R", A2, multiply(Rt, ch.R));
    add("RR^T=T^TT", "R R^T = T^T T", multiply(ch.R, Rt), multiply(Tt, ch.Tm));
    add("Q^TQ=I", "Q^T Q = I", multiply(ch.Q.transpose(), ch.Q), identity_matrix<T>(ch.Q.nrows()));
    return rep;
}

/// max |(Q Q^T - I)_ij| over the leading k x k block, with Q cut to its
/// leading size x size exact block. Truncated Q Q^T is only approximately
/// the identity.
template <class T>
T qqt_defect(const FactorizationChain<T>& ch, std::size_t k = 5) {
    using std::abs;
    const std::size_t n = ch.size;
    if (n > ch.Q.exact_size()) throw internal_consistency("qqt_defect: size exceeds exact block of Q");
    T worst(0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            T s(0);
            for (std::size_t m = 0; m < n; ++m) s += ch.Q(i, m) * ch.Q(j, m);
            if (i == j) s -= 1;
            T v = abs(s);
            if (v > worst) worst = v;
        }
    return worst;
}

}  // namespace sobspec

#endif  // SOBSPEC_MATRIX_FACTORY_HPP
