#include <catch2/catch_amalgamated.hpp>

#include <cpn/su2rep.hpp>

#include <random>

using namespace cpn;

namespace {

const cplx I{0.0, 1.0};
const double R2 = std::sqrt(2.0);

GroupElement random_group(std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    cplx u{nd(rng), nd(rng)}, v{nd(rng), nd(rng)};
    double n = std::sqrt(std::norm(u) + std::norm(v));
    return {u / n, v / n};
}

double wm_dist(const WeightMatrix& a, const WeightMatrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.a.size(); ++i) m = std::max(m, std::abs(a.a[i] - b.a[i]));
    return m;
}

WeightMatrix wm_identity(int j2) {
    WeightMatrix r(j2);
    for (int i = 0; i < r.dim(); ++i) r.a[static_cast<std::size_t>(i) * r.dim() + i] = 1.0;
    return r;
}

// largest 2x2 cross determinant between two vectors, scaled: zero iff parallel
double prop_dist(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double ma = 0.0, mb = 0.0;
    for (const auto& x : a) ma = std::max(ma, std::abs(x));
    for (const auto& x : b) mb = std::max(mb, std::abs(x));
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) m = std::max(m, std::abs(a[i] * b[j] - a[j] * b[i]));
    return m / std::max(ma * mb, 1e-300);
}

MPoly mono(int a, int b, cplx c = 1.0) {
    MPoly p(2);
    p.set_term({a, b, 0, 0}, c);
    return p;
}

} // namespace

TEST_CASE("group elements compose like their matrices") {
    std::mt19937_64 rng(2026);
    GroupElement e = GroupElement::identity();
    CHECK(e.norm_defect() == 0.0);
    CHECK(from_euler(0, 0, 0).norm_defect() < 1e-15);

    for (int rep = 0; rep < 6; ++rep) {
        GroupElement g = random_group(rng), h = random_group(rng);
        CHECK(g.norm_defect() < 1e-12);

        GroupElement gh = g.times(h);
        auto gm = g.matrix(), hm = h.matrix();
        // row-major 2x2 product
        cplx p00 = gm[0] * hm[0] + gm[1] * hm[2];
        cplx p10 = gm[2] * hm[0] + gm[3] * hm[2];
        CHECK(std::abs(gh.u - p00) < 1e-14);
        CHECK(std::abs(gh.v - p10) < 1e-14);

        GroupElement gi = g.times(g.inverse());
        CHECK(std::abs(gi.u - 1.0) < 1e-14);
        CHECK(std::abs(gi.v) < 1e-14);
    }

    std::uniform_real_distribution<double> ang(-3.0, 3.0);
    for (int rep = 0; rep < 6; ++rep) {
        GroupElement g = from_euler(ang(rng), ang(rng), ang(rng));
        CHECK(g.norm_defect() < 1e-14);
    }

    // Euler factorization g = a(phi/2) r(theta) a(psi/2)
    double th = 1.1, ph = 0.7, ps = -0.4;
    GroupElement a1 = from_euler(0, ph, 0), r = from_euler(th, 0, 0), a2 = from_euler(0, 0, ps);
    GroupElement g = a1.times(r).times(a2), direct = from_euler(th, ph, ps);
    CHECK(std::abs(g.u - direct.u) < 1e-14);
    CHECK(std::abs(g.v - direct.v) < 1e-14);
}

TEST_CASE("Jacobi polynomials including negative integer parameters") {
    auto p10 = jacobi_poly(1, 0, 0); // x
    REQUIRE(p10.size() == 2);
    CHECK(p10[0] == Catch::Approx(0.0).margin(1e-15));
    CHECK(p10[1] == Catch::Approx(1.0));

    auto p20 = jacobi_poly(2, 0, 0); // (3x^2 - 1)/2
    CHECK(p20[0] == Catch::Approx(-0.5));
    CHECK(p20[1] == Catch::Approx(0.0).margin(1e-15));
    CHECK(p20[2] == Catch::Approx(1.5));

    auto p111 = jacobi_poly(1, 1, 1); // 2x
    CHECK(p111[0] == Catch::Approx(0.0).margin(1e-15));
    CHECK(p111[1] == Catch::Approx(2.0));

    auto p2m = jacobi_poly(2, 0, -1); // (3x^2 + 2x - 1)/4
    CHECK(p2m[0] == Catch::Approx(-0.25));
    CHECK(p2m[1] == Catch::Approx(0.5));
    CHECK(p2m[2] == Catch::Approx(0.75));

    auto pdeg = jacobi_poly(1, -1, -1); // identically zero
    CHECK(std::abs(pdeg[0]) < 1e-15);
    CHECK(std::abs(pdeg[1]) < 1e-15);

    // value at +1 is binom(n + alpha, n) for nonnegative alpha
    for (int n = 0; n <= 4; ++n)
        for (int al = 0; al <= 3; ++al)
            CHECK(eval_poly(jacobi_poly(n, al, 2), 1.0) == Catch::Approx(detail::binom(n + al, n)).margin(1e-12));

    CHECK(eval_poly({1.0, -2.0, 3.0}, 0.5) == Catch::Approx(1.0 - 1.0 + 0.75));
    CHECK_THROWS_AS(jacobi_poly(-1, 0, 0), std::invalid_argument);
}

TEST_CASE("weight basis is orthonormal under the differential pairing") {
    for (int j2 : {0, 1, 2, 3, 4}) {
        for (int m2 = -j2; m2 <= j2; m2 += 2)
            for (int k2 = -j2; k2 <= j2; k2 += 2) {
                cplx ip = fischer_inner(weight_vector(j2, m2), weight_vector(j2, k2));
                CHECK(std::abs(ip - (m2 == k2 ? 1.0 : 0.0)) < 1e-14);
            }
    }

    // (z1^2 | z1^2) = 2!
    MPoly z1sq(2);
    z1sq.set_term({2, 0, 0, 0}, 1.0);
    CHECK(std::abs(fischer_inner(z1sq, z1sq) - 2.0) < 1e-14);

    CHECK_THROWS_AS(weight_vector(2, 1), std::invalid_argument);
    CHECK_THROWS_AS(weight_vector(2, 4), std::invalid_argument);
    CHECK_THROWS_AS(weight_vector(-2, 0), std::invalid_argument);
}

TEST_CASE("representation matrices: identity, unitarity, homomorphism") {
    std::mt19937_64 rng(77);
    for (int j2 : {1, 2, 3, 4}) CHECK(wm_dist(rep_matrix(j2, GroupElement::identity()), wm_identity(j2)) < 1e-14);

    // the doubled-weight-1 representation is the defining one
    GroupElement g = random_group(rng);
    WeightMatrix t1 = rep_matrix(1, g);
    auto gm = g.matrix();
    CHECK(std::abs(t1.at(1, 1) - gm[0]) < 1e-13);
    CHECK(std::abs(t1.at(1, -1) - gm[1]) < 1e-13);
    CHECK(std::abs(t1.at(-1, 1) - gm[2]) < 1e-13);
    CHECK(std::abs(t1.at(-1, -1) - gm[3]) < 1e-13);

    for (int j2 : {1, 2, 3, 4, 5}) {
        GroupElement h = random_group(rng);
        WeightMatrix t = rep_matrix(j2, h);
        CHECK(wm_dist(detail::wm_mul(t, detail::wm_dagger(t)), wm_identity(j2)) < 1e-10);

        GroupElement k = random_group(rng);
        WeightMatrix prod = detail::wm_mul(rep_matrix(j2, h), rep_matrix(j2, k));
        CHECK(wm_dist(rep_matrix(j2, h.times(k)), prod) < 1e-9);
    }

    // diagonal covariance under the phase subgroup
    GroupElement a = from_euler(0, 0.9, 0.3);
    for (int j2 : {2, 3}) {
        WeightMatrix t = rep_matrix(j2, a);
        for (int k2 = -j2; k2 <= j2; k2 += 2)
            for (int m2 = -j2; m2 <= j2; m2 += 2) {
                cplx want = (k2 == m2) ? std::exp(I * (m2 * (0.9 + 0.3) / 2.0)) : cplx(0.0);
                CHECK(std::abs(t.at(k2, m2) - want) < 1e-12);
            }
    }

    GroupElement bad{cplx(1.0), cplx(0.5)};
    CHECK_THROWS_AS(rep_matrix(2, bad), std::invalid_argument);
}

TEST_CASE("doubled-weight-2 matrix elements match their closed forms") {
    double th = 0.83, ph = 1.21, ps = -0.56;
    WeightMatrix t = rep_matrix(2, from_euler(th, ph, ps));
    double c = std::cos(th / 2), s = std::sin(th / 2);
    auto e = [&](double x) { return std::exp(I * x); };

    CHECK(std::abs(t.at(2, 2) - c * c * e(ps + ph)) < 1e-13);
    CHECK(std::abs(t.at(2, 0) - I / R2 * std::sin(th) * e(ph)) < 1e-13);
    CHECK(std::abs(t.at(2, -2) - (-s * s * e(ph - ps))) < 1e-13);
    CHECK(std::abs(t.at(0, 2) - I / R2 * std::sin(th) * e(ps)) < 1e-13);
    CHECK(std::abs(t.at(0, 0) - std::cos(th)) < 1e-13);
    CHECK(std::abs(t.at(0, -2) - I / R2 * std::sin(th) * e(-ps)) < 1e-13);
    CHECK(std::abs(t.at(-2, 2) - (-s * s * e(ps - ph))) < 1e-13);
    CHECK(std::abs(t.at(-2, 0) - I / R2 * std::sin(th) * e(-ph)) < 1e-13);
    CHECK(std::abs(t.at(-2, -2) - c * c * e(-ps - ph)) < 1e-13);
}

TEST_CASE("reduced elements in Jacobi form agree with the substitution route") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> thd(0.05, M_PI - 0.05);
    for (int j2 : {1, 2, 3, 4, 5}) {
        for (int rep = 0; rep < 20; ++rep) {
            double th = thd(rng);
            WeightMatrix t = rep_matrix(j2, from_euler(th, 0, 0));
            for (int k2 = -j2; k2 <= j2; k2 += 2)
                for (int m2 = -j2; m2 <= j2; m2 += 2)
                    CHECK(std::abs(reduced_element_jacobi(j2, k2, m2, th) - t.at(k2, m2)) < 1e-10);
        }
        // endpoints go through the fallback
        for (int k2 = -j2; k2 <= j2; k2 += 2)
            CHECK(std::abs(reduced_element_jacobi(j2, k2, k2, 0.0) - 1.0) < 1e-12);
    }

    double th = 1.37;
    double c = std::cos(th / 2), s = std::sin(th / 2);

    // doubled-weight-2 reduced table
    CHECK(std::abs(reduced_element_jacobi(2, 2, 2, th) - c * c) < 1e-13);
    CHECK(std::abs(reduced_element_jacobi(2, 2, 0, th) - I / R2 * std::sin(th)) < 1e-13);
    CHECK(std::abs(reduced_element_jacobi(2, 0, 2, th) - I / R2 * std::sin(th)) < 1e-13);
    CHECK(std::abs(reduced_element_jacobi(2, 0, 0, th) - std::cos(th)) < 1e-13);
    CHECK(std::abs(reduced_element_jacobi(2, -2, 2, th) + s * s) < 1e-13);
    CHECK(std::abs(reduced_element_jacobi(2, 2, -2, th) + s * s) < 1e-13);

    // doubled-weight-3 spot values
    CHECK(std::abs(reduced_element_jacobi(3, 3, 3, th) - c * c * c) < 1e-13);
    CHECK(std::abs(reduced_element_jacobi(3, 3, -3, th) - (-I * s * s * s)) < 1e-13);
    CHECK(std::abs(reduced_element_jacobi(3, 1, 1, th) - c * (1.0 - 3.0 * s * s)) < 1e-13);

    CHECK_THROWS_AS(reduced_element_jacobi(2, 1, 0, th), std::invalid_argument);
}

TEST_CASE("angular phases split off the polar part") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> thd(0.1, M_PI - 0.1), angd(-3.0, 3.0);
    for (int j2 : {1, 2, 3}) {
        double th = thd(rng), ph = angd(rng), ps = angd(rng);
        WeightMatrix full = rep_matrix(j2, from_euler(th, ph, ps));
        WeightMatrix pol = rep_matrix(j2, from_euler(th, 0, 0));
        for (int k2 = -j2; k2 <= j2; k2 += 2)
            for (int m2 = -j2; m2 <= j2; m2 += 2) {
                cplx want = split_factor(k2 / 2.0, m2 / 2.0, ph / 2, ps / 2) * pol.at(k2, m2);
                CHECK(std::abs(full.at(k2, m2) - want) < 1e-12);
            }
    }
    CHECK(std::abs(split_factor(1.0, -0.5, 0.3, 0.8) - std::exp(I * (2.0 * (0.3 - 0.4)))) < 1e-15);
}

TEST_CASE("coherent fields reproduce the displayed representatives") {
    // highest weight: rational normal curve
    FieldVec top = coherent_field(2, 2);
    REQUIRE(top.dim() == 3);
    CHECK(top.is_holomorphic());
    CHECK(mat_coeff_dist(project(top), project(FieldVec({mono(0, 0), mono(1, 0, R2), mono(2, 0)}))) < 1e-13);

    FieldVec mid = coherent_field(2, 0);
    FieldVec mid_ref({mono(0, 1, -R2), mono(0, 0) - mono(1, 1), mono(1, 0, R2)});
    CHECK(projective_mismatch(mid, mid_ref, sample_points()) < 1e-12);

    FieldVec bot = coherent_field(2, -2);
    FieldVec bot_ref({mono(0, 2), mono(0, 1, -R2), mono(0, 0)});
    CHECK(projective_mismatch(bot, bot_ref, sample_points()) < 1e-12);

    // weight 1/2 of the 4-component family, in both published representatives
    FieldVec half = coherent_field(3, 1);
    FieldVec half_ref({mono(0, 1, -std::sqrt(3.0)), mono(0, 0) - mono(1, 1, 2.0),
                       mono(1, 0, 2.0) - mono(2, 1), mono(2, 0, std::sqrt(3.0))});
    CHECK(projective_mismatch(half, half_ref, sample_points()) < 1e-12);
    FieldVec half_alt({mono(1, 1, 3.0), mono(2, 1, 2.0 * std::sqrt(3.0)) - mono(1, 0, std::sqrt(3.0)),
                       mono(3, 1, std::sqrt(3.0)) - mono(2, 0, 2.0 * std::sqrt(3.0)), mono(3, 0, -3.0)});
    CHECK(projective_mismatch(half, half_alt, sample_points()) < 1e-12);

    CHECK_THROWS_AS(coherent_field(3, 0), std::invalid_argument);
}

TEST_CASE("coherent projectors coincide with the ladder construction") {
    for (int n : {1, 2, 3}) {
        ProjectorSeq seq = veronese_ladder(n);
        int j2 = n;
        for (int k = 0; k <= n; ++k) {
            int m2 = j2 - 2 * k;
            RationalMat pc = coherent_projector(j2, m2);
            CHECK(mat_coeff_dist(pc, seq.projectors[k]) < 1e-9);
            CHECK(mat_norm_at(mat_sub(pc, seq.projectors[k]), sample_points()) < 1e-9);
        }
    }
}

TEST_CASE("representation columns evaluate to coherent fields on the chart") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> rd(-1.2, 1.2);
    for (int j2 : {2, 3}) {
        for (int rep = 0; rep < 4; ++rep) {
            cplx z{rd(rng), rd(rng)};
            double w = std::sqrt(1.0 + std::norm(z));
            GroupElement g{1.0 / w, z / w};
            WeightMatrix t = rep_matrix(j2, g);
            for (int m2 = -j2; m2 <= j2; m2 += 2) {
                std::vector<cplx> col;
                for (int k2 = j2; k2 >= -j2; k2 -= 2) col.push_back(t.at(k2, m2));
                CHECK(prop_dist(col, coherent_field(j2, m2).eval(z)) < 1e-12);
            }
        }
    }
}

TEST_CASE("shift matrices and their conjugates") {
    WeightMatrix sp = shift_matrix(2, +1), sm = shift_matrix(2, -1);
    WeightMatrix sp_ref(2), sm_ref(2);
    sp_ref.at(2, 0) = 1.0;
    sp_ref.at(0, -2) = 1.0;
    sm_ref.at(0, 2) = 1.0;
    sm_ref.at(-2, 0) = 1.0;
    CHECK(wm_dist(sp, sp_ref) < 1e-15);
    CHECK(wm_dist(sm, sm_ref) < 1e-15);

    // raising annihilates the top weight, lowering the bottom
    for (int j2 : {1, 2, 3, 4}) {
        WeightMatrix p = shift_matrix(j2, +1);
        for (int k2 = -j2; k2 <= j2; k2 += 2) CHECK(p.at(k2, j2) == cplx(0.0));
        WeightMatrix m = shift_matrix(j2, -1);
        for (int k2 = -j2; k2 <= j2; k2 += 2) CHECK(m.at(k2, -j2) == cplx(0.0));
        // entries: sqrt((j -+ m)(j +- m + 1)/2)
        for (int m2 = -j2; m2 < j2; m2 += 2) {
            double j = j2 / 2.0, mm = m2 / 2.0;
            CHECK(std::abs(p.at(m2 + 2, m2) - std::sqrt((j - mm) * (j + mm + 1) / 2)) < 1e-15);
            CHECK(std::abs(m.at(m2, m2 + 2) - std::sqrt((j - mm) * (j + mm + 1) / 2)) < 1e-15);
        }
    }

    std::mt19937_64 rng(7);
    GroupElement g = random_group(rng);
    cplx u = g.u, v = g.v, ub = std::conj(u), vb = std::conj(v);

    WeightMatrix cp = conjugated_shift(2, +1, g);
    WeightMatrix cp_ref(2);
    cp_ref.at(2, 2) = -R2 * u * v;
    cp_ref.at(2, 0) = u * u;
    cp_ref.at(0, 2) = -v * v;
    cp_ref.at(0, -2) = u * u;
    cp_ref.at(-2, 0) = -v * v;
    cp_ref.at(-2, -2) = R2 * u * v;
    CHECK(wm_dist(cp, cp_ref) < 1e-13);

    WeightMatrix cm = conjugated_shift(2, -1, g);
    WeightMatrix cm_ref(2);
    cm_ref.at(2, 2) = -R2 * ub * vb;
    cm_ref.at(2, 0) = -vb * vb;
    cm_ref.at(0, 2) = ub * ub;
    cm_ref.at(0, -2) = -vb * vb;
    cm_ref.at(-2, 0) = ub * ub;
    cm_ref.at(-2, -2) = R2 * ub * vb;
    CHECK(wm_dist(cm, cm_ref) < 1e-13);
    CHECK(wm_dist(cm, detail::wm_dagger(cp)) < 1e-13);

    // conjugated raising maps the rotated weight states up the ladder
    for (int j2 : {2, 3}) {
        GroupElement h = random_group(rng);
        WeightMatrix t = rep_matrix(j2, h);
        WeightMatrix c = conjugated_shift(j2, +1, h);
        for (int m2 = -j2; m2 < j2; m2 += 2) {
            double j = j2 / 2.0, mm = m2 / 2.0;
            double gain = std::sqrt((j - mm) * (j + mm + 1) / 2);
            for (int k2 = -j2; k2 <= j2; k2 += 2) {
                cplx lhs = 0.0;
                for (int l2 = -j2; l2 <= j2; l2 += 2) lhs += c.at(k2, l2) * t.at(l2, m2);
                CHECK(std::abs(lhs - gain * t.at(k2, m2 + 2)) < 1e-11);
            }
        }
    }

    CHECK_THROWS_AS(shift_matrix(2, 0), std::invalid_argument);
}

TEST_CASE("matrix elements extend to harmonic polynomials") {
    for (int j2 : {0, 1, 2, 3, 4}) {
        for (int k2 = -j2; k2 <= j2; k2 += 2)
            for (int m2 = -j2; m2 <= j2; m2 += 2) {
                MPoly ext = harmonic_extension(j2, k2, m2);
                CHECK(ext.total_degree() == j2);
                CHECK(harmonic_residual(j2, k2, m2) < 1e-10);
            }
    }

    // the diagonal middle element of the three-state family is |u|^2 - |v|^2
    MPoly ext = harmonic_extension(2, 0, 0);
    MPoly want(4);
    want.set_term({1, 1, 0, 0}, 1.0);
    want.set_term({0, 0, 1, 1}, -1.0);
    CHECK((ext - want).max_abs_coeff() < 1e-14);

    // extensions evaluate to the matrix elements on the unit sphere
    std::mt19937_64 rng(555);
    for (int j2 : {1, 2, 3}) {
        GroupElement g = random_group(rng);
        WeightMatrix t = rep_matrix(j2, g);
        for (int k2 = -j2; k2 <= j2; k2 += 2)
            for (int m2 = -j2; m2 <= j2; m2 += 2) {
                cplx val = harmonic_extension(j2, k2, m2).eval({g.u, g.v});
                CHECK(std::abs(val - t.at(k2, m2)) < 1e-12);
            }
    }
}

TEST_CASE("fibration to the sphere and its stereographic chart") {
    std::mt19937_64 rng(808);

    auto x = hopf(GroupElement::identity());
    CHECK(x[0] == Catch::Approx(0.0).margin(1e-15));
    CHECK(x[1] == Catch::Approx(0.0).margin(1e-15));
    CHECK(x[2] == Catch::Approx(1.0));

    for (int rep = 0; rep < 8; ++rep) {
        GroupElement g = random_group(rng);
        auto p = hopf(g);
        CHECK(std::abs(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] - 1.0) < 1e-12);

        // invariance along the fiber
        double al = 0.9;
        GroupElement gf = g.times(from_euler(0, 0, 2 * al));
        auto pf = hopf(gf);
        for (int i = 0; i < 3; ++i) CHECK(std::abs(p[i] - pf[i]) < 1e-12);

        // chart triangle: stereo of the fiber point is v/u
        auto w = stereo(p);
        REQUIRE(w.has_value());
        CHECK(std::abs(*w - g.v / g.u) < 1e-11);

        auto back = stereo_inv(*w);
        for (int i = 0; i < 3; ++i) CHECK(std::abs(p[i] - back[i]) < 1e-12);
    }

    CHECK_FALSE(stereo({0.0, 0.0, -1.0}).has_value());
    auto south = hopf(GroupElement{cplx(0.0), cplx(1.0)});
    CHECK(south[2] == Catch::Approx(-1.0));
    CHECK_FALSE(stereo(south).has_value());

    auto north = stereo_inv(cplx(0.0));
    CHECK(north[2] == Catch::Approx(1.0));

    GroupElement bad{cplx(2.0), cplx(0.0)};
    CHECK_THROWS_AS(hopf(bad), std::invalid_argument);
}
