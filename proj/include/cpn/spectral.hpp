#pragma once

// The linear spectral problem attached to a ladder of projectors: explicit
// wavefunctions rational in the spectral parameter, their inverses, residuals
// of the two linear equations, and the immersion recovered either from the
// large-parameter asymptotics or from the parameter derivative.

#include "immersion.hpp"

namespace cpn {

struct Wavefunction {
    int k = 0;
    cplx lambda{0.0};
    RationalMat value{1};
};

namespace detail {

inline void check_lambda(cplx lambda) {
    if (std::abs(lambda - 1.0) < 1e-12 || std::abs(lambda + 1.0) < 1e-12)
        throw std::domain_error("spectral parameter at a pole");
}

inline RationalMat partial_sum(const ProjectorSeq& seq, int k) {
    RationalMat S = RationalMat::identity(seq.n + 1);
    bool first = true;
    for (int j = 0; j < k; ++j) {
        S = first ? seq.projectors[j] : mat_add(S, seq.projectors[j]);
        first = false;
    }
    if (first) {
        S = RationalMat::identity(seq.n + 1);
        for (auto& e : S.num) e = MPoly::zero(2);
    }
    return S;
}

} // namespace detail

// Phi_k = I + 4 lambda/(1-lambda)^2 * sum_{j<k} P_j - 2/(1-lambda) * P_k.
inline Wavefunction phi_field(const ProjectorSeq& seq, int k, cplx lambda) {
    detail::check_lambda(lambda);
    if (k < 0 || k > seq.n) throw std::out_of_range("ladder index out of range");
    cplx om = 1.0 - lambda;
    RationalMat v = mat_add(RationalMat::identity(seq.n + 1),
                            mat_scale(detail::partial_sum(seq, k), 4.0 * lambda / (om * om)));
    v = mat_sub(v, mat_scale(seq.projectors[k], 2.0 / om));
    return {k, lambda, std::move(v)};
}

// Closed-form inverse: I - 4 lambda/(1+lambda)^2 * S - 2/(1+lambda) * P_k.
inline Wavefunction phi_inverse_field(const ProjectorSeq& seq, int k, cplx lambda) {
    detail::check_lambda(lambda);
    if (k < 0 || k > seq.n) throw std::out_of_range("ladder index out of range");
    cplx op = 1.0 + lambda;
    RationalMat v = mat_sub(RationalMat::identity(seq.n + 1),
                            mat_scale(detail::partial_sum(seq, k), 4.0 * lambda / (op * op)));
    v = mat_sub(v, mat_scale(seq.projectors[k], 2.0 / op));
    return {k, lambda, std::move(v)};
}

namespace detail {

// Dense wavefunction value assembled from projector evaluations; the symbolic
// field form multiplies every distinct rung denominator together, which only
// the low-degree standard ladders can afford.
inline std::vector<cplx> phi_dense(const ProjectorSeq& seq, int k, cplx lambda, cplx point, bool inverse) {
    check_lambda(lambda);
    if (k < 0 || k > seq.n) throw std::out_of_range("ladder index out of range");
    const int d = seq.n + 1;
    const cplx om = inverse ? 1.0 + lambda : 1.0 - lambda;
    const cplx a = (inverse ? -4.0 : 4.0) * lambda / (om * om);
    const cplx b = 2.0 / om;
    auto v = dense::identity(d);
    for (int j = 0; j < k; ++j) {
        auto p = seq.projectors[j].eval(point);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += a * p[i];
    }
    auto pk = seq.projectors[k].eval(point);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= b * pk[i];
    return v;
}

} // namespace detail

inline std::vector<cplx> phi(const ProjectorSeq& seq, int k, cplx lambda, cplx point) {
    return detail::phi_dense(seq, k, lambda, point, false);
}

inline std::vector<cplx> phi_inverse(const ProjectorSeq& seq, int k, cplx lambda, cplx point) {
    return detail::phi_dense(seq, k, lambda, point, true);
}

// Largest violation of the two linear equations
//   d Phi = 2/(1+lambda) [dP_k, P_k] Phi,   dbar Phi = 2/(1-lambda) [dbarP_k, P_k] Phi
// with all coordinate derivatives taken exactly.
inline double lsp_residual(const ProjectorSeq& seq, int k, cplx lambda,
                           const std::vector<cplx>& pts = sample_points()) {
    Wavefunction w = phi_field(seq, k, lambda);
    const RationalMat& P = seq.projectors[k];
    RationalMat dP = mat_d(P, 0), dbP = mat_d(P, 1);

    RationalMat lhs1 = mat_d(w.value, 0);
    RationalMat rhs1 = mat_scale(mat_mul(mat_sub(mat_mul(dP, P), mat_mul(P, dP)), w.value), 2.0 / (1.0 + lambda));
    double r = mat_norm_at(mat_sub(lhs1, rhs1), pts);

    RationalMat lhs2 = mat_d(w.value, 1);
    RationalMat rhs2 = mat_scale(mat_mul(mat_sub(mat_mul(dbP, P), mat_mul(P, dbP)), w.value), 2.0 / (1.0 - lambda));
    return std::max(r, mat_norm_at(mat_sub(lhs2, rhs2), pts));
}

// Same first-order system checked through pointwise jets; ladders whose
// symbolic wavefunction would be too large stay affordable this way.
inline double lsp_residual_numeric(const ProjectorSeq& seq, int k, cplx lambda,
                                   const std::vector<cplx>& pts = sample_points()) {
    detail::check_lambda(lambda);
    if (k < 0 || k > seq.n) throw std::out_of_range("ladder index out of range");
    const int d = seq.n + 1;
    const cplx a = 4.0 * lambda / ((1.0 - lambda) * (1.0 - lambda));
    const cplx b = 2.0 / (1.0 - lambda);
    double worst = 0.0;
    for (cplx z : pts) {
        auto v = dense::identity(d);
        std::vector<cplx> vz(v.size()), vzb(v.size());
        for (int j = 0; j < k; ++j) {
            MatJet pj = eval_jet(seq.projectors[j], z);
            for (std::size_t i = 0; i < v.size(); ++i) {
                v[i] += a * pj.val[i];
                vz[i] += a * pj.dz[i];
                vzb[i] += a * pj.dzb[i];
            }
        }
        MatJet pk = eval_jet(seq.projectors[k], z);
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] -= b * pk.val[i];
            vz[i] -= b * pk.dz[i];
            vzb[i] -= b * pk.dzb[i];
        }
        auto rhs1 = dense::mul(d, dense::comm(d, pk.dz, pk.val), v);
        const cplx s1 = 2.0 / (1.0 + lambda);
        for (std::size_t i = 0; i < v.size(); ++i) rhs1[i] *= s1;
        worst = std::max(worst, dense::max_abs(dense::sub(vz, rhs1)));
        auto rhs2 = dense::mul(d, dense::comm(d, pk.dzb, pk.val), v);
        for (std::size_t i = 0; i < v.size(); ++i) rhs2[i] *= b;
        worst = std::max(worst, dense::max_abs(dense::sub(vzb, rhs2)));
    }
    return worst;
}

inline double unitarity_defect(const ProjectorSeq& seq, int k, cplx lambda,
                               const std::vector<cplx>& pts = sample_points()) {
    detail::check_lambda(lambda);
    const int d = seq.n + 1;
    double worst = 0.0;
    for (cplx z : pts) {
        auto v = detail::phi_dense(seq, k, lambda, z, false);
        auto vd = v;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) vd[static_cast<std::size_t>(i) * d + j] = std::conj(v[static_cast<std::size_t>(j) * d + i]);
        worst = std::max(worst, dense::max_abs(dense::sub(dense::mul(d, vd, v), dense::identity(d))));
    }
    return worst;
}

// Finite-parameter version of X_k = (i/2) lim lambda (I - Phi_k) + i c_k I;
// the error decays like 1/|lambda|.
inline ImmersionSurface asymptotic_X(const ProjectorSeq& seq, int k, cplx lambda) {
    Wavefunction w = phi_field(seq, k, lambda);
    const cplx i{0.0, 1.0};
    const double c = (1.0 + 2.0 * k) / (seq.n + 1);
    RationalMat X = mat_add(mat_scale(mat_sub(RationalMat::identity(seq.n + 1), w.value), 0.5 * i * lambda),
                            mat_scale(RationalMat::identity(seq.n + 1), i * c));
    return {k, seq.n, c, std::move(X)};
}

// Parameter derivative of the explicit wavefunction,
//   4 (1+lambda)/(1-lambda)^3 S - 2/(1-lambda)^2 P_k.
inline RationalMat phi_lambda_derivative(const ProjectorSeq& seq, int k, cplx lambda) {
    detail::check_lambda(lambda);
    cplx om = 1.0 - lambda;
    return mat_sub(mat_scale(detail::partial_sum(seq, k), 4.0 * (1.0 + lambda) / (om * om * om)),
                   mat_scale(seq.projectors[k], 2.0 / (om * om)));
}

// alpha * Phi^{-1} d_lambda Phi + i c_k I for a caller-chosen scalar alpha.
// With alpha = -i(1 - lambda^2)/2 this reproduces X_k exactly, because
// Phi^{-1} d_lambda Phi collapses to (4S + 2P_k)/(1-lambda^2).
inline ImmersionSurface sym_tafel(const ProjectorSeq& seq, int k, cplx lambda, cplx alpha) {
    Wavefunction inv = phi_inverse_field(seq, k, lambda);
    RationalMat core = mat_mul(inv.value, phi_lambda_derivative(seq, k, lambda));
    const cplx i{0.0, 1.0};
    const double c = (1.0 + 2.0 * k) / (seq.n + 1);
    RationalMat X = mat_add(mat_scale(core, alpha),
                            mat_scale(RationalMat::identity(seq.n + 1), i * c));
    return {k, seq.n, c, std::move(X)};
}

inline std::vector<cplx> default_lambda_grid() {
    return {cplx(0, 2), cplx(0, -2), cplx(0.5), cplx(-0.5), cplx(3.0), cplx(1.0, 2.0)};
}

} // namespace cpn
