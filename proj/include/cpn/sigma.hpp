#pragma once

// Projector-valued solutions built from rational fields: the field -> projector
// map, the raising/lowering ladder, projector recurrences, and the residuals
// that certify a projector solves the equations of motion.

#include "rational.hpp"

#include <bit>
#include <optional>
#include <string>

namespace cpn {

enum class Provenance { from_field_ladder, from_recurrence, from_coherent_state };

inline const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::from_field_ladder: return "from-field-ladder";
        case Provenance::from_recurrence: return "from-recurrence";
        case Provenance::from_coherent_state: return "from-coherent-state";
    }
    return "?";
}

inline std::optional<Provenance> provenance_from_name(const std::string& s) {
    if (s == "from-field-ladder") return Provenance::from_field_ladder;
    if (s == "from-recurrence") return Provenance::from_recurrence;
    if (s == "from-coherent-state") return Provenance::from_coherent_state;
    return std::nullopt;
}

// An ordered family P_0 ... P_n of rank-one projectors spanning C^{n+1}.
// fields holds the underlying ladder members when the family came from one.
struct ProjectorSeq {
    int n = 0;
    Provenance provenance = Provenance::from_field_ladder;
    std::vector<RationalMat> projectors;
    std::vector<FieldVec> fields;
};

// P = f (x) f^dagger / (f^dagger . f).  The field's own denominator cancels in
// the quotient, so only the numerator components enter.
inline RationalMat project(const FieldVec& f) {
    if (f.dim() == 0 || f.max_abs_coeff() == 0.0) throw std::invalid_argument("projector of zero field");
    const int d = f.dim();
    RationalMat P(d, f.den.arity());
    MPoly w(f.den.arity());
    for (int i = 0; i < d; ++i) {
        MPoly ci = f.comps[i].conj_involution();
        w += f.comps[i] * ci;
        for (int j = 0; j < d; ++j) P.at(i, j) = f.comps[i] * f.comps[j].conj_involution();
    }
    P.den = std::move(w);
    return canonical_mat(P);
}

namespace detail {

// Apply (I - f f^dagger/(f^dagger f)) . D f with D one of the two formal
// derivatives, cleared of denominators:  w.Df - (f^dagger.Df) f,  w = f^dagger.f.
// A zero result (all coefficients below 1e-10 x the natural operand scale)
// signals the end of the ladder and comes back as the literal zero vector.
inline FieldVec shift_ladder(const FieldVec& f, int var) {
    const int d = f.dim();
    const int ar = f.den.arity();
    MPoly w(ar), ip(ar);
    std::vector<MPoly> df(d, MPoly(ar));
    for (int i = 0; i < d; ++i) {
        df[i] = f.comps[i].wirtinger_d(var);
        MPoly ci = f.comps[i].conj_involution();
        w += f.comps[i] * ci;
        ip += ci * df[i];
    }
    double dscale = 0.0;
    for (const auto& p : df) dscale = std::max(dscale, p.max_abs_coeff());
    const double opscale = w.max_abs_coeff() * dscale + ip.max_abs_coeff() * f.max_abs_coeff();

    FieldVec out;
    out.den = MPoly::constant(ar, 1.0);
    out.comps.reserve(d);
    for (int i = 0; i < d; ++i) out.comps.push_back(w * df[i] - ip * f.comps[i]);

    if (out.max_abs_coeff() <= 1e-10 * std::max(1.0, opscale)) {
        FieldVec zero;
        zero.den = MPoly::constant(ar, 1.0);
        zero.comps.assign(d, MPoly(ar));
        return zero;
    }
    return canonical(std::move(out));
}

} // namespace detail

inline FieldVec raise_field(const FieldVec& f) { return detail::shift_ladder(f, 0); }
inline FieldVec lower_field(const FieldVec& f) { return detail::shift_ladder(f, 1); }

inline bool is_zero_field(const FieldVec& f) { return f.max_abs_coeff() == 0.0; }

namespace detail {

// Minors of the matrix whose rows are successive derivatives of the seed,
// keyed by column bitmask, grown one row at a time via cofactor expansion
// along the new row.  rows_done counts rows already folded in.
inline std::map<std::uint32_t, MPoly> grow_minors(const std::map<std::uint32_t, MPoly>& prev,
                                                  const std::vector<MPoly>& row, int rows_done) {
    std::map<std::uint32_t, MPoly> next;
    const int d = static_cast<int>(row.size());
    for (const auto& [mask, minor] : prev) {
        for (int j = 0; j < d; ++j) {
            if (mask >> j & 1u) continue;
            const std::uint32_t grown = mask | (1u << j);
            const int pos = std::popcount(grown & ((1u << j) - 1u));
            MPoly contrib = row[j] * minor;
            if ((rows_done + pos) % 2) contrib = -std::move(contrib);
            auto it = next.find(grown);
            if (it == next.end()) next.emplace(grown, std::move(contrib));
            else it->second += contrib;
        }
    }
    return next;
}

// Component i of the orthogonal complement of the k-th derivative against the
// span of the lower ones, expressed through the minors alone: every k-column
// minor avoiding column i pairs (conjugated) with the minor that adds it.
// Each rung comes straight from the seed this way, so no roundoff travels up
// the ladder -- iterating the raising map instead compounds the error badly
// past the second rung.
inline std::vector<MPoly> minor_contraction(const std::map<std::uint32_t, MPoly>& Wk,
                                            const std::map<std::uint32_t, MPoly>& Wk1,
                                            int d, int ar) {
    std::vector<MPoly> u(d, MPoly(ar));
    for (const auto& [mask, w] : Wk) {
        const MPoly cw = w.conj_involution();
        for (int i = 0; i < d; ++i) {
            if (mask >> i & 1u) continue;
            auto it = Wk1.find(mask | (1u << i));
            if (it == Wk1.end()) continue;
            MPoly term = cw * it->second;
            if (std::popcount(mask & ((1u << i) - 1u)) % 2) term = -std::move(term);
            u[i] += term;
        }
    }
    return u;
}

} // namespace detail

// Ladder f_0, f_1, ... from a holomorphic seed, with P_k = project(f_k).
// Rung k is proportional to raise applied k times, but is computed from the
// derivative-matrix minors of the seed directly.  The ladder must close after
// exactly n+1 rungs; closing early or running past the end reports the
// offending index.
inline ProjectorSeq ladder(const FieldVec& f0, int n) {
    if (!f0.is_holomorphic()) throw std::invalid_argument("ladder seed must be holomorphic");
    if (f0.is_constant()) throw std::invalid_argument("ladder seed must be nonconstant");
    if (f0.dim() != n + 1) throw std::invalid_argument("seed dimension must be n+1");

    ProjectorSeq seq;
    seq.n = n;
    seq.provenance = Provenance::from_field_ladder;
    const int d = n + 1;
    const int ar = f0.den.arity();

    std::vector<MPoly> row = f0.comps;
    std::map<std::uint32_t, MPoly> Wk{{0u, MPoly::constant(ar, 1.0)}};
    double wk_scale = 1.0;
    for (int k = 0; k <= n; ++k) {
        if (k > 0)
            for (auto& c : row) c = c.wirtinger_d(0);
        auto Wk1 = detail::grow_minors(Wk, row, k);
        double wk1_scale = 0.0;
        for (const auto& [mask, w] : Wk1) wk1_scale = std::max(wk1_scale, w.max_abs_coeff());

        FieldVec fk;
        fk.den = MPoly::constant(ar, 1.0);
        fk.comps = detail::minor_contraction(Wk, Wk1, d, ar);
        if (fk.max_abs_coeff() <= 1e-10 * std::max(1.0, wk_scale * wk1_scale))
            throw std::runtime_error("ladder terminated early at index " + std::to_string(k));
        seq.fields.push_back(canonical(std::move(fk)));
        seq.projectors.push_back(project(seq.fields.back()));
        Wk = std::move(Wk1);
        wk_scale = wk1_scale;
    }
    if (!is_zero_field(raise_field(seq.fields.back())))
        throw std::runtime_error("ladder failed to terminate after index " + std::to_string(n));
    return seq;
}

namespace detail {

inline RationalMat projector_step(const RationalMat& P, int var_first) {
    RationalMat A = mat_d(P, var_first);
    RationalMat B = mat_d(P, 1 - var_first);
    RationalMat M = mat_mul(mat_mul(A, P), B);
    MPoly tau(M.den.arity());
    for (int i = 0; i < M.dim; ++i) tau += M.at(i, i);
    double mscale = 0.0;
    for (const auto& e : M.num) mscale = std::max(mscale, e.max_abs_coeff());
    if (tau.max_abs_coeff() <= 1e-10 * std::max(1.0, mscale))
        throw std::domain_error("projector recurrence hit the ladder end: vanishing trace");
    RationalMat R(M.dim, M.den.arity());
    R.num = M.num;
    R.den = std::move(tau); // common denominator of M and its trace cancels
    return canonical_mat(R);
}

} // namespace detail

// One rung up:  dP . P . dbarP / tr(same).  The numerator is Hermitian
// ((dP)^dagger = dbarP), so the trace denominator is real.
inline RationalMat pi_plus(const RationalMat& P) { return detail::projector_step(P, 0); }

// One rung down:  dbarP . P . dP / tr(same).
inline RationalMat pi_minus(const RationalMat& P) { return detail::projector_step(P, 1); }

// Equations-of-motion residual |[d dbar P, P]| over the points.
inline double el_residual(const RationalMat& P, const std::vector<cplx>& pts = sample_points()) {
    RationalMat mixed = mat_d(mat_d(P, 0), 1);
    return mat_norm_at(commutator(mixed, P), pts);
}

// Divergence form of the same equation: |d[dbarP, P] + dbar[dP, P]|.
inline double conservation_residual(const RationalMat& P, const std::vector<cplx>& pts = sample_points()) {
    RationalMat a = mat_d(commutator(mat_d(P, 1), P), 0);
    RationalMat b = mat_d(commutator(mat_d(P, 0), P), 1);
    return mat_norm_at(mat_add(a, b), pts);
}

// Pointwise version of el_residual built on jets; avoids expanding the
// symbolic quotient rules, which matters for high-degree ladder members.
inline double el_residual_numeric(const RationalMat& P, const std::vector<cplx>& pts = sample_points()) {
    double worst = 0.0;
    for (cplx z : pts) {
        MatJet j = eval_jet(P, z);
        worst = std::max(worst, dense::max_abs(dense::comm(j.dim, j.dzzb, j.val)));
    }
    return worst;
}

// Pointwise Hermiticity / idempotency / unit-trace defects.
inline double projector_defect_numeric(const RationalMat& P, const std::vector<cplx>& pts = sample_points()) {
    double worst = 0.0;
    for (cplx z : pts) {
        auto v = P.eval(z);
        const int d = P.dim;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                worst = std::max(worst, std::abs(v[static_cast<std::size_t>(i) * d + j] -
                                                 std::conj(v[static_cast<std::size_t>(j) * d + i])));
        worst = std::max(worst, dense::max_abs(dense::sub(dense::mul(d, v, v), v)));
        cplx tr = 0.0;
        for (int i = 0; i < d; ++i) tr += v[static_cast<std::size_t>(i) * d + i];
        worst = std::max(worst, std::abs(tr - cplx(1.0)));
    }
    return worst;
}

// Pointwise orthogonality and completeness over a whole sequence.
inline double family_defect_numeric(const ProjectorSeq& seq, const std::vector<cplx>& pts = sample_points()) {
    if (seq.projectors.empty()) throw std::invalid_argument("empty projector sequence");
    const int d = seq.projectors.front().dim;
    double worst = 0.0;
    for (cplx z : pts) {
        std::vector<std::vector<cplx>> vals;
        vals.reserve(seq.projectors.size());
        for (const auto& P : seq.projectors) vals.push_back(P.eval(z));
        std::vector<cplx> sum(static_cast<std::size_t>(d) * d, cplx(0.0));
        for (std::size_t k = 0; k < vals.size(); ++k) {
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += vals[k][i];
            for (std::size_t j = 0; j < vals.size(); ++j) {
                if (j == k) continue;
                worst = std::max(worst, dense::max_abs(dense::mul(d, vals[k], vals[j])));
            }
        }
        worst = std::max(worst, dense::max_abs(dense::sub(sum, dense::identity(d))));
    }
    return worst;
}

// Largest of the Hermiticity, idempotency and unit-trace defects.
inline double projector_defect(const RationalMat& P, const std::vector<cplx>& pts = sample_points()) {
    double h = mat_norm_at(mat_sub(P, mat_dagger(P)), pts);
    double i2 = mat_norm_at(mat_sub(mat_mul(P, P), P), pts);
    RationalScalar tr = mat_trace(P);
    double t = (tr.num - tr.den).max_abs_coeff();
    return std::max({h, i2, t});
}

// max_{k != j} |P_k P_j| over the points.
inline double orthogonality_residual(const ProjectorSeq& seq, const std::vector<cplx>& pts = sample_points()) {
    double worst = 0.0;
    const int m = static_cast<int>(seq.projectors.size());
    for (int k = 0; k < m; ++k)
        for (int j = 0; j < m; ++j) {
            if (j == k) continue;
            worst = std::max(worst, mat_norm_at(mat_mul(seq.projectors[k], seq.projectors[j]), pts));
        }
    return worst;
}

// |sum_k P_k - I| over the points.
inline double completeness_residual(const ProjectorSeq& seq, const std::vector<cplx>& pts = sample_points()) {
    if (seq.projectors.empty()) throw std::invalid_argument("empty projector sequence");
    RationalMat s = seq.projectors.front();
    for (std::size_t k = 1; k < seq.projectors.size(); ++k) s = mat_add(s, seq.projectors[k]);
    return mat_norm_at(mat_sub(s, RationalMat::identity(s.dim, s.den.arity())), pts);
}

// Veronese seed for the n-dimensional model: component k carries sqrt(C(n,k)) z^k.
inline FieldVec veronese_seed(int n) {
    if (n < 1) throw std::invalid_argument("model dimension must be >= 1");
    std::vector<MPoly> comps;
    comps.reserve(n + 1);
    double binom = 1.0;
    for (int k = 0; k <= n; ++k) {
        comps.push_back(MPoly::variable(2, 0, k) * std::sqrt(binom));
        binom = binom * (n - k) / (k + 1);
    }
    return FieldVec(std::move(comps));
}

inline ProjectorSeq veronese_ladder(int n) { return ladder(veronese_seed(n), n); }

} // namespace cpn
