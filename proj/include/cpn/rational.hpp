#pragma once

// Rational objects over the conjugate-paired polynomial ring: scalars num/den,
// projective component vectors, and square matrices with one shared scalar
// denominator.  Simplification is deliberately narrow: strip common powers of
// (1 + z zbar), strip a denominator that divides everything, and normalize the
// denominator's lex-leading coefficient to 1.  No general gcd machinery.

#include "mpoly.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace cpn {

// Nine fixed off-axis evaluation points on the rings |z| = 0.3, 1, 2.5.
// Used for residual norms and projective comparisons.
inline const std::vector<cplx>& sample_points() {
    static const std::vector<cplx> pts = [] {
        std::vector<cplx> p;
        const double radii[3] = {0.3, 1.0, 2.5};
        const double turns[3] = {0.13, 0.47, 0.81};
        for (int r = 0; r < 3; ++r)
            for (int a = 0; a < 3; ++a) {
                double phi = 2.0 * M_PI * (turns[a] + 0.07 * r);
                p.emplace_back(radii[r] * std::cos(phi), radii[r] * std::sin(phi));
            }
        return p;
    }();
    return pts;
}

namespace detail {

inline double div_tol(const MPoly& p) { return 1e-10 * std::max(1.0, p.max_abs_coeff()); }

// Largest-magnitude coefficient of p, with deterministic key-order tie-break.
// Safe to normalize by: unlike the lex-leading coefficient it can never be a
// cancellation artifact dwarfed by the rest of the polynomial.
inline cplx dominant_coeff(const MPoly& p) {
    cplx best = 0.0;
    double mag = -1.0;
    for (const auto& [k, c] : p.terms())
        if (std::abs(c) > mag) { mag = std::abs(c); best = c; }
    return best;
}

// Divide a family of polynomials and a denominator by all common powers of
// (1 + z zbar), in place.  Arity-2 only; no-op otherwise.
inline void strip_common_opz(std::vector<MPoly*> polys) {
    if (polys.empty() || polys.front()->arity() != 2) return;
    const MPoly opz = one_plus_zzbar();
    for (;;) {
        std::vector<MPoly> q;
        q.reserve(polys.size());
        bool all = true;
        for (MPoly* p : polys) {
            if (p->is_zero()) { q.push_back(*p); continue; }
            auto d = exact_div(*p, opz, div_tol(*p));
            if (!d) { all = false; break; }
            q.push_back(*d);
        }
        if (!all) return;
        for (std::size_t i = 0; i < polys.size(); ++i) *polys[i] = q[i];
    }
}

// If den divides every poly, divide through and set den = 1.
inline void strip_whole_den(std::vector<MPoly*> polys, MPoly& den) {
    if (den.is_zero()) throw std::domain_error("zero denominator");
    if (den.term_count() == 1) {
        auto lt = den.leading_term();
        bool is_const = true;
        for (int i = 0; i < 4; ++i) is_const = is_const && lt.first[i] == 0;
        if (is_const) return; // constant den handled by the monic step
    }
    std::vector<MPoly> q;
    q.reserve(polys.size());
    for (MPoly* p : polys) {
        if (p->is_zero()) { q.push_back(*p); continue; }
        auto d = exact_div(*p, den, div_tol(*p));
        if (!d) return;
        q.push_back(*d);
    }
    for (std::size_t i = 0; i < polys.size(); ++i) *polys[i] = q[i];
    den = MPoly::constant(den.arity(), 1.0);
}

inline void make_den_monic(std::vector<MPoly*> polys, MPoly& den) {
    if (den.is_zero()) throw std::domain_error("zero denominator");
    cplx lead = den.leading_term().second;
    if (std::abs(lead - cplx(1.0)) < 1e-15) return;
    cplx inv = 1.0 / lead;
    den = den * inv;
    for (MPoly* p : polys) *p = *p * inv;
}

} // namespace detail

// ---------------------------------------------------------------------------
// scalars

struct RationalScalar {
    MPoly num;
    MPoly den;

    RationalScalar() : num(MPoly::zero(2)), den(MPoly::constant(2, 1.0)) {}
    RationalScalar(MPoly n, MPoly d) : num(std::move(n)), den(std::move(d)) {}
    explicit RationalScalar(MPoly n) : num(std::move(n)), den(MPoly::constant(num.arity(), 1.0)) {}

    cplx eval(cplx z) const { return num.eval(z) / den.eval(z); }
};

inline RationalScalar canonical(RationalScalar s) {
    detail::strip_common_opz({&s.num, &s.den});
    if (!s.num.is_zero()) detail::strip_whole_den({&s.num}, s.den);
    detail::make_den_monic({&s.num}, s.den);
    return s;
}

inline RationalScalar rat_add(const RationalScalar& a, const RationalScalar& b) {
    return canonical({a.num * b.den + b.num * a.den, a.den * b.den});
}
inline RationalScalar rat_sub(const RationalScalar& a, const RationalScalar& b) {
    return canonical({a.num * b.den - b.num * a.den, a.den * b.den});
}
inline RationalScalar rat_mul(const RationalScalar& a, const RationalScalar& b) {
    return canonical({a.num * b.num, a.den * b.den});
}
inline RationalScalar rat_div(const RationalScalar& a, const RationalScalar& b) {
    if (b.num.is_zero()) throw std::domain_error("division by zero rational");
    return canonical({a.num * b.den, a.den * b.num});
}

// Quotient-rule derivative in variable var (0 = z, 1 = zbar).
inline RationalScalar rat_d(const RationalScalar& s, int var) {
    MPoly n = s.num.wirtinger_d(var) * s.den - s.num * s.den.wirtinger_d(var);
    return canonical({std::move(n), s.den * s.den});
}

// d/dz dbar/dzbar of log |num/den| for positive rational densities, computed
// through the exact log-derivative quotient rule.
inline RationalScalar log_mixed_derivative(const RationalScalar& s) {
    RationalScalar dn = canonical({s.num.wirtinger_d(1), s.num});
    RationalScalar dd = canonical({s.den.wirtinger_d(1), s.den});
    return rat_d(rat_sub(dn, dd), 0);
}

// ---------------------------------------------------------------------------
// projective component vectors

struct FieldVec {
    std::vector<MPoly> comps;
    MPoly den;

    FieldVec() : den(MPoly::constant(2, 1.0)) {}
    explicit FieldVec(std::vector<MPoly> c)
        : comps(std::move(c)), den(MPoly::constant(comps.empty() ? 2 : comps.front().arity(), 1.0)) {}
    FieldVec(std::vector<MPoly> c, MPoly d) : comps(std::move(c)), den(std::move(d)) {}

    int dim() const { return static_cast<int>(comps.size()); }

    bool is_zero(double rel = 1e-10, double scale = 1.0) const {
        double m = 0.0;
        for (const auto& c : comps) m = std::max(m, c.max_abs_coeff());
        return m <= rel * std::max(scale, 1.0);
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& c : comps) m = std::max(m, c.max_abs_coeff());
        return m;
    }

    std::vector<cplx> eval(cplx z) const {
        std::vector<cplx> v(comps.size());
        cplx d = den.eval(z);
        for (std::size_t i = 0; i < comps.size(); ++i) v[i] = comps[i].eval(z) / d;
        return v;
    }

    // f is holomorphic when no component involves the conjugate variable.
    bool is_holomorphic() const {
        for (const auto& c : comps)
            for (const auto& [k, co] : c.terms())
                if (cpn::detail::unpack_exps(k)[1] != 0) return false;
        for (const auto& [k, co] : den.terms())
            if (cpn::detail::unpack_exps(k)[1] != 0) return false;
        return true;
    }

    bool is_constant() const {
        for (const auto& c : comps)
            for (const auto& [k, co] : c.terms())
                if (k != 0) return false;
        return true;
    }
};

// Canonical projective representative: strip the common monomial factor and
// common (1 + z zbar) powers, drop the denominator (projectively irrelevant
// once recorded), and divide by the lex-leading coefficient of the first
// nonzero component so that coefficient equals 1.
inline FieldVec canonical(FieldVec f) {
    if (f.comps.empty()) return f;
    bool any = false;
    for (const auto& c : f.comps) any = any || !c.is_zero();
    if (!any) { f.den = MPoly::constant(f.den.arity(), 1.0); return f; }

    // bring the overall scale to O(1) so the division tolerances below are
    // meaningful even deep in a ladder where coefficients have grown huge
    double m = f.max_abs_coeff();
    for (auto& c : f.comps) c = c * (1.0 / m);

    // common monomial factor
    std::array<int, 4> mins{0x7fff, 0x7fff, 0x7fff, 0x7fff};
    for (const auto& c : f.comps) {
        if (c.is_zero()) continue;
        for (const auto& [k, co] : c.terms()) {
            auto e = cpn::detail::unpack_exps(k);
            for (int i = 0; i < 4; ++i) mins[i] = std::min(mins[i], e[i]);
        }
    }
    bool nontrivial = false;
    for (int i = 0; i < 4; ++i) nontrivial = nontrivial || mins[i] > 0;
    if (nontrivial) {
        MPoly mono(f.comps.front().arity());
        std::array<int, 4> e{};
        for (int i = 0; i < f.comps.front().arity(); ++i) e[i] = mins[i];
        mono.set_term(e, 1.0);
        for (auto& c : f.comps)
            if (!c.is_zero()) c = *exact_div(c, mono, detail::div_tol(c));
    }

    std::vector<MPoly*> ptrs;
    for (auto& c : f.comps) ptrs.push_back(&c);
    detail::strip_common_opz(ptrs);

    f.den = MPoly::constant(f.den.arity(), 1.0);

    for (auto& c : f.comps) {
        if (c.is_zero()) continue;
        cplx inv = 1.0 / detail::dominant_coeff(c);
        for (auto& cc : f.comps) cc = cc * inv;
        break;
    }
    return f;
}

// Componentwise quotient-rule derivative; not canonicalized (the caller may
// need the honest value rather than a projective representative).
inline FieldVec field_d(const FieldVec& f, int var) {
    FieldVec r;
    r.den = f.den * f.den;
    r.comps.reserve(f.comps.size());
    for (const auto& c : f.comps)
        r.comps.push_back(c.wirtinger_d(var) * f.den - c * f.den.wirtinger_d(var));
    return r;
}

// Projective agreement at a set of points: all 2x2 cross determinants of the
// evaluated components must vanish relative to the component magnitudes.
inline double projective_mismatch(const FieldVec& a, const FieldVec& b, const std::vector<cplx>& pts = sample_points()) {
    if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
    double worst = 0.0;
    for (cplx z : pts) {
        auto va = a.eval(z);
        auto vb = b.eval(z);
        double ma = 0.0, mb = 0.0;
        for (auto& x : va) ma = std::max(ma, std::abs(x));
        for (auto& x : vb) mb = std::max(mb, std::abs(x));
        if (ma == 0.0 || mb == 0.0) { worst = std::max(worst, ma + mb); continue; }
        for (int i = 0; i < a.dim(); ++i)
            for (int j = i + 1; j < a.dim(); ++j)
                worst = std::max(worst, std::abs(va[i] * vb[j] - va[j] * vb[i]) / (ma * mb));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// matrices

struct RationalMat {
    int dim = 0;
    std::vector<MPoly> num; // row-major dim*dim
    MPoly den;

    RationalMat() : den(MPoly::constant(2, 1.0)) {}
    RationalMat(int d, int arity = 2)
        : dim(d), num(static_cast<std::size_t>(d) * d, MPoly::zero(arity)), den(MPoly::constant(arity, 1.0)) {}

    MPoly& at(int i, int j) { return num[static_cast<std::size_t>(i) * dim + j]; }
    const MPoly& at(int i, int j) const { return num[static_cast<std::size_t>(i) * dim + j]; }

    static RationalMat identity(int d, int arity = 2) {
        RationalMat m(d, arity);
        for (int i = 0; i < d; ++i) m.at(i, i) = MPoly::constant(arity, 1.0);
        return m;
    }

    std::vector<cplx> eval(cplx z) const {
        std::vector<cplx> v(num.size());
        cplx d = den.eval(z);
        for (std::size_t i = 0; i < num.size(); ++i) v[i] = num[i].eval(z) / d;
        return v;
    }
};

inline RationalMat canonical_mat(RationalMat m) {
    std::vector<MPoly*> ptrs{&m.den};
    for (auto& e : m.num) ptrs.push_back(&e);
    detail::strip_common_opz(ptrs);

    std::vector<MPoly*> nums(ptrs.begin() + 1, ptrs.end());
    detail::strip_whole_den(nums, m.den);

    cplx lead = m.den.leading_term().second;
    if (std::abs(lead - cplx(1.0)) > 1e-15) {
        cplx inv = 1.0 / lead;
        m.den = m.den * inv;
        for (auto& e : m.num) e = e * inv;
    }
    return m;
}

inline RationalMat mat_add(const RationalMat& a, const RationalMat& b) {
    if (a.dim != b.dim) throw std::invalid_argument("dimension mismatch");
    RationalMat r(a.dim, a.den.arity());
    for (std::size_t i = 0; i < r.num.size(); ++i) r.num[i] = a.num[i] * b.den + b.num[i] * a.den;
    r.den = a.den * b.den;
    return canonical_mat(r);
}

inline RationalMat mat_sub(const RationalMat& a, const RationalMat& b) {
    if (a.dim != b.dim) throw std::invalid_argument("dimension mismatch");
    RationalMat r(a.dim, a.den.arity());
    for (std::size_t i = 0; i < r.num.size(); ++i) r.num[i] = a.num[i] * b.den - b.num[i] * a.den;
    r.den = a.den * b.den;
    return canonical_mat(r);
}

inline RationalMat mat_scale(const RationalMat& a, cplx s) {
    RationalMat r = a;
    for (auto& e : r.num) e = e * s;
    return r;
}

inline RationalMat mat_mul(const RationalMat& a, const RationalMat& b) {
    if (a.dim != b.dim) throw std::invalid_argument("dimension mismatch");
    RationalMat r(a.dim, a.den.arity());
    for (int i = 0; i < a.dim; ++i)
        for (int j = 0; j < a.dim; ++j) {
            MPoly s(a.den.arity());
            for (int k = 0; k < a.dim; ++k) s += a.at(i, k) * b.at(k, j);
            r.at(i, j) = std::move(s);
        }
    r.den = a.den * b.den;
    return canonical_mat(r);
}

inline RationalMat commutator(const RationalMat& a, const RationalMat& b) {
    return mat_sub(mat_mul(a, b), mat_mul(b, a));
}

inline RationalScalar mat_trace(const RationalMat& a) {
    MPoly t(a.den.arity());
    for (int i = 0; i < a.dim; ++i) t += a.at(i, i);
    return canonical(RationalScalar{std::move(t), a.den});
}

// Conjugate transpose through the ring involution.
inline RationalMat mat_dagger(const RationalMat& a) {
    RationalMat r(a.dim, a.den.arity());
    for (int i = 0; i < a.dim; ++i)
        for (int j = 0; j < a.dim; ++j) r.at(i, j) = a.at(j, i).conj_involution();
    r.den = a.den.conj_involution();
    return canonical_mat(r);
}

// Entrywise quotient-rule derivative.
inline RationalMat mat_d(const RationalMat& a, int var) {
    RationalMat r(a.dim, a.den.arity());
    MPoly dden = a.den.wirtinger_d(var);
    for (std::size_t i = 0; i < r.num.size(); ++i)
        r.num[i] = a.num[i].wirtinger_d(var) * a.den - a.num[i] * dden;
    r.den = a.den * a.den;
    return canonical_mat(r);
}

// Pointwise values of a matrix together with its two first derivatives and the
// mixed second derivative, row-major.  Derivatives of each entry N/D are
// assembled from polynomial derivatives of N and D, so no symbolic expansion
// of quotient rules happens; this stays cheap even for large numerators.
struct MatJet {
    int dim = 0;
    std::vector<cplx> val, dz, dzb, dzzb;
};

inline MatJet eval_jet(const RationalMat& m, cplx z) {
    MatJet j;
    j.dim = m.dim;
    const std::size_t n2 = m.num.size();
    j.val.resize(n2);
    j.dz.resize(n2);
    j.dzb.resize(n2);
    j.dzzb.resize(n2);

    const MPoly Dz = m.den.wirtinger_d(0);
    const MPoly Dzb = m.den.wirtinger_d(1);
    const MPoly Dzzb = Dz.wirtinger_d(1);
    const cplx D = m.den.eval(z);
    const cplx dZ = Dz.eval(z);
    const cplx dZb = Dzb.eval(z);
    const cplx dZZb = Dzzb.eval(z);
    const cplx D2 = D * D, D3 = D2 * D;

    for (std::size_t i = 0; i < n2; ++i) {
        const MPoly& Np = m.num[i];
        const MPoly Nz = Np.wirtinger_d(0);
        const MPoly Nzb = Np.wirtinger_d(1);
        const MPoly Nzzb = Nz.wirtinger_d(1);
        const cplx N = Np.eval(z);
        const cplx nZ = Nz.eval(z);
        const cplx nZb = Nzb.eval(z);
        const cplx nZZb = Nzzb.eval(z);
        j.val[i] = N / D;
        j.dz[i] = (nZ * D - N * dZ) / D2;
        j.dzb[i] = (nZb * D - N * dZb) / D2;
        j.dzzb[i] = (nZZb * D2 - nZb * dZ * D - nZ * dZb * D - N * dZZb * D + 2.0 * N * dZ * dZb) / D3;
    }
    return j;
}

namespace dense {

inline std::vector<cplx> mul(int dim, const std::vector<cplx>& a, const std::vector<cplx>& b) {
    std::vector<cplx> r(static_cast<std::size_t>(dim) * dim, cplx(0.0));
    for (int i = 0; i < dim; ++i)
        for (int k = 0; k < dim; ++k) {
            cplx aik = a[static_cast<std::size_t>(i) * dim + k];
            if (aik == cplx(0.0)) continue;
            for (int j = 0; j < dim; ++j)
                r[static_cast<std::size_t>(i) * dim + j] += aik * b[static_cast<std::size_t>(k) * dim + j];
        }
    return r;
}

inline std::vector<cplx> sub(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    std::vector<cplx> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline std::vector<cplx> comm(int dim, const std::vector<cplx>& a, const std::vector<cplx>& b) {
    return sub(mul(dim, a, b), mul(dim, b, a));
}

inline double max_abs(const std::vector<cplx>& a) {
    double m = 0.0;
    for (const auto& x : a) m = std::max(m, std::abs(x));
    return m;
}

inline std::vector<cplx> identity(int dim) {
    std::vector<cplx> r(static_cast<std::size_t>(dim) * dim, cplx(0.0));
    for (int i = 0; i < dim; ++i) r[static_cast<std::size_t>(i) * dim + i] = 1.0;
    return r;
}

} // namespace dense

// Largest entry magnitude over the given points.
inline double mat_norm_at(const RationalMat& a, const std::vector<cplx>& pts = sample_points()) {
    double worst = 0.0;
    for (cplx z : pts) {
        auto v = a.eval(z);
        for (auto& x : v) worst = std::max(worst, std::abs(x));
    }
    return worst;
}

inline double mat_coeff_dist(const RationalMat& a, const RationalMat& b) {
    RationalMat d = mat_sub(a, b);
    double m = 0.0;
    for (auto& e : d.num) m = std::max(m, e.max_abs_coeff());
    return m;
}

} // namespace cpn
