#pragma once

// Irreducible representations of the unit-determinant 2x2 unitary group on
// homogeneous polynomial spaces, their matrix elements (directly and through
// Jacobi polynomials), coherent-state fields, weight-shift operators, and the
// fibration S^3 -> S^2 with its stereographic chart.
//
// Half-integer labels are carried as doubled integers (j2 = 2j) so label
// arithmetic stays exact.  Weight-indexed containers are ordered from the
// highest weight k = j down to k = -j; with this ordering the highest-weight
// coherent field is the holomorphic rational normal curve.

#include "sigma.hpp"

#include <array>
#include <optional>

namespace cpn {

// ---------------------------------------------------------------------------
// labels and group elements

inline void check_label(int j2, int m2) {
    if (j2 < 0) throw std::invalid_argument("negative spin label");
    if (m2 < -j2 || m2 > j2) throw std::invalid_argument("weight out of range");
    if ((j2 - m2) % 2 != 0) throw std::invalid_argument("weight parity mismatch");
}

struct GroupElement {
    cplx u{1.0, 0.0};
    cplx v{0.0, 0.0};

    static GroupElement identity() { return {}; }

    double norm_defect() const { return std::abs(std::norm(u) + std::norm(v) - 1.0); }

    // First column of the matrix product; composition of the 2x2 forms.
    GroupElement times(const GroupElement& o) const {
        return {u * o.u - std::conj(v) * o.v, v * o.u + std::conj(u) * o.v};
    }

    GroupElement inverse() const { return {std::conj(u), -v}; }

    // Row-major [[u, -conj(v)], [v, conj(u)]].
    std::array<cplx, 4> matrix() const { return {u, -std::conj(v), v, std::conj(u)}; }
};

struct EulerAngles {
    double theta = 0.0, phi = 0.0, psi = 0.0;

    GroupElement to_group() const {
        const cplx i{0.0, 1.0};
        return {std::cos(theta / 2) * std::exp(i * ((phi + psi) / 2)),
                i * std::sin(theta / 2) * std::exp(i * ((psi - phi) / 2))};
    }
};

inline GroupElement from_euler(double theta, double phi, double psi) {
    return EulerAngles{theta, phi, psi}.to_group();
}

// Square matrix indexed by doubled weights, highest weight first.
struct WeightMatrix {
    int j2 = 0;
    std::vector<cplx> a;

    explicit WeightMatrix(int j2_) : j2(j2_), a(static_cast<std::size_t>(j2_ + 1) * (j2_ + 1), cplx(0.0)) {}

    int dim() const { return j2 + 1; }
    int row(int k2) const {
        check_label(j2, k2);
        return (j2 - k2) / 2;
    }
    cplx& at(int k2, int m2) { return a[static_cast<std::size_t>(row(k2)) * dim() + row(m2)]; }
    const cplx& at(int k2, int m2) const { return a[static_cast<std::size_t>(row(k2)) * dim() + row(m2)]; }
};

namespace detail {

inline double fact(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

inline double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

// a(a-1)...(a-k+1); valid for negative a.
inline double falling(int a, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= a - i;
    return r;
}

inline cplx unit_ipow(int e) {
    switch (((e % 4) + 4) % 4) {
        case 0: return {1, 0};
        case 1: return {0, 1};
        case 2: return {-1, 0};
        default: return {0, -1};
    }
}

inline WeightMatrix wm_mul(const WeightMatrix& x, const WeightMatrix& y) {
    WeightMatrix r(x.j2);
    const int d = x.dim();
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            cplx xik = x.a[static_cast<std::size_t>(i) * d + k];
            if (xik == cplx(0.0)) continue;
            for (int j = 0; j < d; ++j) r.a[static_cast<std::size_t>(i) * d + j] += xik * y.a[static_cast<std::size_t>(k) * d + j];
        }
    return r;
}

inline WeightMatrix wm_dagger(const WeightMatrix& x) {
    WeightMatrix r(x.j2);
    const int d = x.dim();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) r.a[static_cast<std::size_t>(i) * d + j] = std::conj(x.a[static_cast<std::size_t>(j) * d + i]);
    return r;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Jacobi polynomials by expanding the Rodrigues derivative; integer parameters
// of either sign are fine since no weight-function integrability is needed.

inline std::vector<double> jacobi_poly(int n, int alpha, int beta) {
    if (n < 0) throw std::invalid_argument("negative Jacobi degree");
    std::vector<double> coeffs(n + 1, 0.0);
    const double pref = ((n % 2) ? -1.0 : 1.0) / (std::pow(2.0, n) * detail::fact(n));
    for (int i = 0; i <= n; ++i) {
        double ci = pref * detail::binom(n, i) * ((i % 2) ? -1.0 : 1.0) *
                    detail::falling(n + alpha, i) * detail::falling(n + beta, n - i);
        if (ci == 0.0) continue;
        // expand (1-x)^{n-i} (1+x)^i
        for (int r = 0; r <= n - i; ++r)
            for (int s = 0; s <= i; ++s)
                coeffs[r + s] += ci * detail::binom(n - i, r) * ((r % 2) ? -1.0 : 1.0) * detail::binom(i, s);
    }
    return coeffs;
}

inline double eval_poly(const std::vector<double>& ascending, double x) {
    double r = 0.0;
    for (std::size_t i = ascending.size(); i-- > 0;) r = r * x + ascending[i];
    return r;
}

// ---------------------------------------------------------------------------
// weight basis and the differential-pairing inner product

// Basis monomial z1^{j+m} z2^{j-m} / sqrt((j+m)!(j-m)!), held in an arity-2
// container whose two slots are reinterpreted here as the independent
// variables (z1, z2); only coefficient-level operations are applied to it.
inline MPoly weight_vector(int j2, int m2) {
    check_label(j2, m2);
    MPoly p(2);
    int e1 = (j2 + m2) / 2, e2 = (j2 - m2) / 2;
    p.set_term({e1, e2, 0, 0}, 1.0 / std::sqrt(detail::fact(e1) * detail::fact(e2)));
    return p;
}

// (p|q) = qbar(d/dz) p: sum over matching exponents of p_e conj(q_e) prod(e!).
inline cplx fischer_inner(const MPoly& p, const MPoly& q) {
    cplx s = 0.0;
    const auto& qt = q.terms();
    for (const auto& [k, c] : p.terms()) {
        auto it = qt.find(k);
        if (it == qt.end()) continue;
        auto e = cpn::detail::unpack_exps(k);
        double w = 1.0;
        for (int i = 0; i < 4; ++i) w *= detail::fact(e[i]);
        s += c * std::conj(it->second) * w;
    }
    return s;
}

// ---------------------------------------------------------------------------
// matrix elements

// t_{km}(g) from the substitution action (z1, z2) -> (u z1 + v z2,
// -vbar z1 + ubar z2) on the weight basis, projected back with the pairing.
inline WeightMatrix rep_matrix(int j2, const GroupElement& g) {
    if (g.norm_defect() > 1e-9) throw std::invalid_argument("group element not unit-norm");
    WeightMatrix t(j2);
    MPoly z1 = MPoly::variable(2, 0), z2 = MPoly::variable(2, 1);
    MPoly q1 = z1 * g.u + z2 * g.v;
    MPoly q2 = z1 * (-std::conj(g.v)) + z2 * std::conj(g.u);

    std::vector<MPoly> p1(j2 + 1), p2(j2 + 1);
    p1[0] = MPoly::constant(2, 1.0);
    p2[0] = MPoly::constant(2, 1.0);
    for (int i = 1; i <= j2; ++i) {
        p1[i] = p1[i - 1] * q1;
        p2[i] = p2[i - 1] * q2;
    }

    for (int m2 = j2; m2 >= -j2; m2 -= 2) {
        int e1 = (j2 + m2) / 2, e2 = (j2 - m2) / 2;
        MPoly img = p1[e1] * p2[e2] * (1.0 / std::sqrt(detail::fact(e1) * detail::fact(e2)));
        for (int k2 = j2; k2 >= -j2; k2 -= 2) t.at(k2, m2) = fischer_inner(img, weight_vector(j2, k2));
    }
    return t;
}

// Reduced element at Euler angles (theta, 0, 0) in closed Jacobi form:
//   i^{m-k} * sqrt((j+k)!(j-k)!) / sqrt((j+m)!(j-m)!)
//     * sin(theta/2)^{m-k} * cos(theta/2)^{-(k+m)} * P_{j+k}^{(m-k, -(k+m))}(cos theta).
// Near theta in {0, pi} the negative powers turn singular (removably); there
// the polynomial substitution route is used instead.
inline cplx reduced_element_jacobi(int j2, int k2, int m2, double theta) {
    check_label(j2, k2);
    check_label(j2, m2);
    double s = std::sin(theta / 2), c = std::cos(theta / 2);
    if (std::abs(s) < 1e-8 || std::abs(c) < 1e-8)
        return rep_matrix(j2, from_euler(theta, 0, 0)).at(k2, m2);

    int alpha = (m2 - k2) / 2;
    int beta = -(k2 + m2) / 2;
    int n = (j2 + k2) / 2;
    double pref = std::sqrt(detail::fact((j2 + k2) / 2) * detail::fact((j2 - k2) / 2)) /
                  std::sqrt(detail::fact((j2 + m2) / 2) * detail::fact((j2 - m2) / 2));
    double shape = std::pow(s, alpha) * std::pow(c, beta) * eval_poly(jacobi_poly(n, alpha, beta), std::cos(theta));
    return detail::unit_ipow(alpha) * pref * shape;
}

// Angular phase carried by the z-rotation parts: exp(2i(a phi + b psi)).
// The full element at Euler angles factorizes as
//   t_{km}(theta, phi, psi) = split_factor(k, m, phi/2, psi/2) * t_{km}(theta, 0, 0).
inline cplx split_factor(double a, double b, double phi, double psi) {
    return std::exp(cplx(0.0, 2.0 * (a * phi + b * psi)));
}

// ---------------------------------------------------------------------------
// coherent-state fields

// Column m of the matrix elements with the group entry substituted by the
// chart value (u, v) -> (1, zeta): a (2j+1)-component rational field whose
// highest-weight member is the holomorphic rational normal curve.
inline FieldVec coherent_field(int j2, int m2) {
    check_label(j2, m2);
    const int jm = (j2 + m2) / 2, jmm = (j2 - m2) / 2;
    std::vector<MPoly> comps;
    comps.reserve(j2 + 1);
    for (int k2 = j2; k2 >= -j2; k2 -= 2) {
        const int jk = (j2 + k2) / 2, jkm = (j2 - k2) / 2;
        double norm = std::sqrt(detail::fact(jk) * detail::fact(jkm)) /
                      std::sqrt(detail::fact(jm) * detail::fact(jmm));
        MPoly comp(2);
        int alo = std::max(0, (m2 + k2) / 2), ahi = std::min(jm, jk);
        for (int a = alo; a <= ahi; ++a) {
            double coeff = detail::binom(jm, a) * detail::binom(jmm, jk - a) * ((jk - a) % 2 ? -1.0 : 1.0) * norm;
            if (coeff == 0.0) continue;
            comp.set_term({jm - a, jk - a, 0, 0}, coeff);
        }
        comps.push_back(std::move(comp));
    }
    return canonical(FieldVec(std::move(comps)));
}

inline RationalMat coherent_projector(int j2, int m2) { return project(coherent_field(j2, m2)); }

// ---------------------------------------------------------------------------
// weight-shift operators

// Matrix of the normalized shift pi_{+-} in the weight basis: for direction
// +1, w_m -> sqrt((j-m)(j+m+1)/2) w_{m+1}; for -1 the mirror image.
inline WeightMatrix shift_matrix(int j2, int direction) {
    if (direction != 1 && direction != -1) throw std::invalid_argument("direction must be +-1");
    WeightMatrix s(j2);
    const double j = j2 / 2.0;
    for (int m2 = -j2; m2 <= j2; m2 += 2) {
        int t2 = m2 + 2 * direction;
        if (t2 < -j2 || t2 > j2) continue;
        double m = direction * m2 / 2.0;
        s.at(t2, m2) = std::sqrt(0.5 * (j - m) * (j + m + 1.0));
    }
    return s;
}

inline WeightMatrix conjugated_shift(int j2, int direction, const GroupElement& g) {
    WeightMatrix t = rep_matrix(j2, g);
    return detail::wm_mul(detail::wm_mul(t, shift_matrix(j2, direction)), detail::wm_dagger(t));
}

// ---------------------------------------------------------------------------
// harmonicity of matrix elements

// t_{km} as a homogeneous polynomial of degree 2j in (u, ubar, v, vbar).
inline MPoly harmonic_extension(int j2, int k2, int m2) {
    check_label(j2, k2);
    check_label(j2, m2);
    const int jm = (j2 + m2) / 2, jmm = (j2 - m2) / 2;
    const int jk = (j2 + k2) / 2, jkm = (j2 - k2) / 2;
    double norm = std::sqrt(detail::fact(jk) * detail::fact(jkm)) /
                  std::sqrt(detail::fact(jm) * detail::fact(jmm));
    MPoly ext(4);
    int alo = std::max(0, (m2 + k2) / 2), ahi = std::min(jm, jk);
    for (int a = alo; a <= ahi; ++a) {
        double coeff = detail::binom(jm, a) * detail::binom(jmm, jk - a) * ((jk - a) % 2 ? -1.0 : 1.0) * norm;
        if (coeff == 0.0) continue;
        // u^a ubar^{a-m-k} v^{j+m-a} vbar^{j+k-a}
        ext.set_term({a, a - (m2 + k2) / 2, jm - a, jk - a}, coeff);
    }
    return ext;
}

// Largest coefficient of 4(d_u d_ubar + d_v d_vbar) applied to the extension;
// zero means the matrix element is a degree-2j spherical harmonic.
inline double harmonic_residual(int j2, int k2, int m2) {
    MPoly ext = harmonic_extension(j2, k2, m2);
    MPoly lap = (ext.wirtinger_d(0).wirtinger_d(1) + ext.wirtinger_d(2).wirtinger_d(3)) * 4.0;
    return lap.max_abs_coeff();
}

// ---------------------------------------------------------------------------
// fibration and charts

// Fiber-invariant image of (u, v): x1 + i x2 = 2 conj(u) v, x3 = |u|^2 - |v|^2.
inline std::array<double, 3> hopf(const GroupElement& g) {
    if (g.norm_defect() > 1e-9) throw std::invalid_argument("fibration input not unit-norm");
    cplx w = 2.0 * std::conj(g.u) * g.v;
    return {w.real(), w.imag(), std::norm(g.u) - std::norm(g.v)};
}

// Chart from the south pole; the pole itself has no finite image.
inline std::optional<cplx> stereo(const std::array<double, 3>& x) {
    if (std::abs(1.0 + x[2]) < 1e-14) return std::nullopt;
    return cplx(x[0], x[1]) / (1.0 + x[2]);
}

inline std::array<double, 3> stereo_inv(cplx w) {
    double d = 1.0 + std::norm(w);
    return {2.0 * w.real() / d, 2.0 * w.imag() / d, (1.0 - std::norm(w)) / d};
}

} // namespace cpn
