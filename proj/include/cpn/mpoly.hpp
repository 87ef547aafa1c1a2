#pragma once

// Sparse polynomials over C in formally independent variables that come in
// conjugate pairs: variable 2i is paired with variable 2i+1.  With arity 2 the
// pair is (z, zbar); with arity 4 the pairs are (u, ubar), (v, vbar).  All
// derivative operators treat the paired variables as independent, evaluation
// ties them back together.

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cpn {

using cplx = std::complex<double>;

// Coefficients with magnitude below this are dropped after every operation.
inline double& drop_threshold() {
    static double eps = 1e-13;
    return eps;
}

namespace detail {

// Exponent tuples are packed into one 64-bit key, 16 bits per variable,
// variable 0 in the highest bits.  Numeric order on keys is then exactly
// lexicographic order on exponent tuples, so the map's last entry is the
// lex-leading term.
inline std::uint64_t pack_exps(const std::array<int, 4>& e) {
    std::uint64_t k = 0;
    for (int i = 0; i < 4; ++i) {
        if (e[i] < 0 || e[i] > 0xffff) throw std::invalid_argument("exponent out of range");
        k = (k << 16) | static_cast<std::uint64_t>(e[i]);
    }
    return k;
}

inline std::array<int, 4> unpack_exps(std::uint64_t k) {
    std::array<int, 4> e{};
    for (int i = 3; i >= 0; --i) {
        e[i] = static_cast<int>(k & 0xffff);
        k >>= 16;
    }
    return e;
}

} // namespace detail

class MPoly {
  public:
    using term_map = std::map<std::uint64_t, cplx>;

    MPoly() : arity_(2) {}
    explicit MPoly(int arity) : arity_(arity) { check_arity(arity); }

    static MPoly zero(int arity) { return MPoly(arity); }

    static MPoly constant(int arity, cplx c) {
        MPoly p(arity);
        if (std::abs(c) > 0.0) p.terms_[0] = c;
        p.prune();
        return p;
    }

    static MPoly variable(int arity, int var, int power = 1) {
        check_arity(arity);
        if (var < 0 || var >= arity) throw std::invalid_argument("variable index out of range");
        if (power < 0) throw std::invalid_argument("negative power");
        MPoly p(arity);
        std::array<int, 4> e{};
        e[var] = power;
        p.terms_[detail::pack_exps(e)] = 1.0;
        return p;
    }

    int arity() const { return arity_; }
    const term_map& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    void set_term(const std::array<int, 4>& exps, cplx c) {
        for (int i = arity_; i < 4; ++i)
            if (exps[i] != 0) throw std::invalid_argument("exponent beyond arity");
        terms_[detail::pack_exps(exps)] += c;
        prune();
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
        return m;
    }

    // Total degree of the lex-leading term, -1 for the zero polynomial.
    int total_degree() const {
        int d = -1;
        for (const auto& [k, c] : terms_) {
            auto e = detail::unpack_exps(k);
            d = std::max(d, e[0] + e[1] + e[2] + e[3]);
        }
        return d;
    }

    MPoly& operator+=(const MPoly& o) {
        require_same_arity(o);
        for (const auto& [k, c] : o.terms_) terms_[k] += c;
        prune();
        return *this;
    }

    MPoly& operator-=(const MPoly& o) {
        require_same_arity(o);
        for (const auto& [k, c] : o.terms_) terms_[k] -= c;
        prune();
        return *this;
    }

    friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }

    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        a.require_same_arity(b);
        MPoly r(a.arity_);
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_)
                r.terms_[ka + kb] += ca * cb; // packed keys add componentwise (no overflow at sane degrees)
        r.prune();
        return r;
    }

    friend MPoly operator*(MPoly a, cplx s) {
        for (auto& [k, c] : a.terms_) c *= s;
        a.prune();
        return a;
    }

    friend MPoly operator*(cplx s, MPoly a) { return std::move(a) * s; }

    friend MPoly operator-(MPoly a) { return std::move(a) * cplx(-1.0); }

    // Formal partial derivative with respect to one variable; the conjugate
    // partner is held fixed.
    MPoly wirtinger_d(int var) const {
        if (var < 0 || var >= arity_) throw std::invalid_argument("variable index out of range");
        MPoly r(arity_);
        for (const auto& [k, c] : terms_) {
            auto e = detail::unpack_exps(k);
            if (e[var] == 0) continue;
            int n = e[var];
            e[var] -= 1;
            r.terms_[detail::pack_exps(e)] += c * static_cast<double>(n);
        }
        r.prune();
        return r;
    }

    // Conjugation: swap each variable with its partner and conjugate the
    // coefficients.  An involutive ring anti-automorphism (here the ring is
    // commutative, so simply an involution).
    MPoly conj_involution() const {
        MPoly r(arity_);
        for (const auto& [k, c] : terms_) {
            auto e = detail::unpack_exps(k);
            for (int i = 0; i + 1 < arity_; i += 2) std::swap(e[i], e[i + 1]);
            r.terms_[detail::pack_exps(e)] += std::conj(c);
        }
        r.prune();
        return r;
    }

    bool is_conj_invariant(double tol = 1e-12) const {
        MPoly d = conj_involution() - *this;
        return d.max_abs_coeff() <= tol;
    }

    // Evaluate at a point with one complex value per conjugate pair: variable
    // 2i takes point[i], variable 2i+1 takes conj(point[i]).
    cplx eval(const std::vector<cplx>& point) const {
        if (static_cast<int>(point.size()) != arity_ / 2)
            throw std::invalid_argument("point size must equal arity/2");
        int maxdeg = 0;
        for (const auto& [k, c] : terms_) {
            auto e = detail::unpack_exps(k);
            for (int i = 0; i < arity_; ++i) maxdeg = std::max(maxdeg, e[i]);
        }
        // power tables per variable
        std::array<std::vector<cplx>, 4> pw;
        for (int i = 0; i < arity_; ++i) {
            cplx base = (i % 2 == 0) ? point[i / 2] : std::conj(point[i / 2]);
            pw[i].resize(maxdeg + 1);
            pw[i][0] = 1.0;
            for (int d = 1; d <= maxdeg; ++d) pw[i][d] = pw[i][d - 1] * base;
        }
        cplx s = 0.0;
        for (const auto& [k, c] : terms_) {
            auto e = detail::unpack_exps(k);
            cplx t = c;
            for (int i = 0; i < arity_; ++i)
                if (e[i]) t *= pw[i][e[i]];
            s += t;
        }
        return s;
    }

    cplx eval(cplx z) const { return eval(std::vector<cplx>{z}); }

    // Lex-leading term (largest packed key).
    std::pair<std::array<int, 4>, cplx> leading_term() const {
        if (terms_.empty()) throw std::domain_error("leading term of zero polynomial");
        auto it = terms_.rbegin();
        return {detail::unpack_exps(it->first), it->second};
    }

    void prune() { prune_below(drop_threshold()); }

    // Drop every coefficient with magnitude below eps.
    void prune_below(double eps) {
        for (auto it = terms_.begin(); it != terms_.end();)
            it = (std::abs(it->second) < eps) ? terms_.erase(it) : std::next(it);
    }

  private:
    static void check_arity(int a) {
        if (a != 2 && a != 4) throw std::invalid_argument("arity must be 2 or 4");
    }
    void require_same_arity(const MPoly& o) const {
        if (arity_ != o.arity_) throw std::invalid_argument("arity mismatch");
    }

    int arity_;
    term_map terms_;

    friend std::optional<MPoly> exact_div(const MPoly&, const MPoly&, double);
};

// Division p / q by lex leading-term elimination against the single divisor q.
// Returns the quotient when the remainder is negligible (max coefficient below
// tol), std::nullopt otherwise.
inline std::optional<MPoly> exact_div(const MPoly& p, const MPoly& q, double tol = 1e-10) {
    if (p.arity() != q.arity()) throw std::invalid_argument("arity mismatch");
    if (q.is_zero()) throw std::invalid_argument("division by zero polynomial");

    const auto qt = q.terms_.rbegin();
    const std::uint64_t qkey = qt->first;
    const auto qexp = detail::unpack_exps(qkey);
    const cplx qc = qt->second;

    MPoly rem = p;
    MPoly quot(p.arity());
    double rem_max = 0.0;

    while (!rem.terms_.empty()) {
        auto lt = rem.terms_.rbegin();
        const auto rexp = detail::unpack_exps(lt->first);
        bool divisible = true;
        for (int i = 0; i < 4; ++i)
            if (rexp[i] < qexp[i]) { divisible = false; break; }

        if (!divisible) {
            rem_max = std::max(rem_max, std::abs(lt->second));
            rem.terms_.erase(std::prev(rem.terms_.end()));
            continue;
        }

        std::array<int, 4> de{};
        for (int i = 0; i < 4; ++i) de[i] = rexp[i] - qexp[i];
        const cplx fac = lt->second / qc;
        MPoly mono(p.arity());
        mono.terms_[detail::pack_exps(de)] = fac;
        quot.terms_[detail::pack_exps(de)] += fac;
        rem -= mono * q;
        // guard: the leading term must actually cancel
        if (!rem.terms_.empty() && rem.terms_.rbegin()->first == detail::pack_exps(rexp)) {
            rem_max = std::max(rem_max, std::abs(rem.terms_.rbegin()->second));
            rem.terms_.erase(std::prev(rem.terms_.end()));
        }
    }

    if (rem_max > tol) return std::nullopt;
    quot.prune();
    return quot;
}

// The ubiquitous real factor 1 + z*zbar of the arity-2 ring.
inline MPoly one_plus_zzbar() {
    MPoly p(2);
    p.set_term({0, 0, 0, 0}, 1.0);
    p.set_term({1, 1, 0, 0}, 1.0);
    return p;
}

} // namespace cpn
