#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "adic/koszul.hpp"

using namespace adic;
using Q = RationalField;

static Ring<Q> rqx()
{
    return make_poly_ring(Q{}, {"x"});
}
static Ring<Q> rqxy()
{
    return make_poly_ring(Q{}, {"x", "y"});
}
static Ring<Q> rqx_mod_x2()
{
    Q k;
    return make_ring(k, {"x"}, {}, {parse_poly_raw(k, {"x"}, "x^2")});
}

static ElementSequence<Q> seq_of(const Ring<Q>& r,
                                 std::initializer_list<const char*> es)
{
    std::vector<RElt<Q>> v;
    for (auto* s : es)
        v.push_back(parse_elt(r, s));
    return ElementSequence<Q>(r, v);
}

TEST_CASE("construction rejects d^2 != 0")
{
    auto r = rqx();
    auto A = free_module(r, 1);
    std::map<int, FpModule<Q>> comps{{0, A}, {1, A}, {2, A}};
    std::map<int, Matrix<Q>> diffs{{0, {{parse_elt(r, "x")}}},
                                   {1, {{parse_elt(r, "x")}}}};
    CHECK_THROWS_AS(make_complex(r, comps, diffs), std::domain_error);
}

TEST_CASE("stupid truncation of a three-term complex")
{
    auto r = rqx();
    auto A = free_module(r, 1);
    std::map<int, FpModule<Q>> comps{{-1, A}, {0, A}, {1, A}};
    std::map<int, Matrix<Q>> diffs{{-1, {{parse_elt(r, "x")}}},
                                   {0, {{parse_elt(r, "0")}}}};
    auto X = make_complex(r, comps, diffs);
    auto T = stupid_truncate(X, 0, 0);
    CHECK(complex_inf(T) == 0);
    CHECK(complex_sup(T) == 0);
    CHECK(T.component(0).gens == 1);
}

TEST_CASE("truncation pieces assemble to a degreewise exact sequence")
{
    auto r = rqxy();
    auto X = koszul_complex(seq_of(r, {"x", "y"}));
    int cut = -1;
    auto below = stupid_truncate(X, complex_inf(X), cut);
    auto above = stupid_truncate(X, cut + 1, complex_sup(X));
    // inclusion of `below`... the sub-complex here is the one supported in
    // high degrees (kernel of the projection onto low degrees)
    std::map<int, Matrix<Q>> incl, proj;
    for (auto& [k, m] : above.comp)
        incl.emplace(k, identity_matrix(r, m.gens));
    for (auto& [k, m] : below.comp)
        proj.emplace(k, identity_matrix(r, m.gens));
    auto inc = make_complex_map(above, X, incl);
    auto prj = make_complex_map(X, below, proj);
    for (int k = complex_inf(X); k <= complex_sup(X); ++k) {
        // ker(proj_k) = im(inc_k) inside X^k
        auto pk = prj.level(k);
        auto ck = module_calculus(pk);
        Matrix<Q> kergens = ck.kernel_inclusion.mat;
        Matrix<Q> imgens = inc.map_at(k);
        CHECK(submodule_eq(r, kergens, imgens, X.component(k).gens));
    }
}

TEST_CASE("cone of the identity on K(Q[x]; x) is acyclic")
{
    auto r = rqx();
    auto kz = koszul_complex(seq_of(r, {"x"}));
    auto c = cone(identity_complex_map(kz));
    verify_complex(c);
    CHECK(complex_acyclic(c));
}

TEST_CASE("shift negates the differential")
{
    auto r = rqx();
    auto kz = koszul_complex(seq_of(r, {"x"}));
    auto s = shift_complex(kz, 1);
    CHECK(complex_inf(s) == -2);
    CHECK(complex_sup(s) == -1);
    auto d = s.differential(-2);
    CHECK(req(d[0][0], parse_elt(r, "-x")));
    verify_complex(s);
}

TEST_CASE("tensor of K(x) and K(y) has rank profile 1,2,1")
{
    auto r = rqxy();
    auto t = tensor(koszul_complex(seq_of(r, {"x"})),
                    koszul_complex(seq_of(r, {"y"})));
    CHECK(t.component(-2).gens == 1);
    CHECK(t.component(-1).gens == 2);
    CHECK(t.component(0).gens == 1);
    verify_complex(t);
}

TEST_CASE("tensor with the unit complex is the identity on the nose")
{
    auto r = rqxy();
    auto X = koszul_complex(seq_of(r, {"x", "y"}));
    auto t = tensor(X, unit_complex(r));
    for (int k = -2; k <= 0; ++k) {
        CHECK(t.component(k).gens == X.component(k).gens);
        auto a = t.differential(k);
        auto b = X.differential(k);
        REQUIRE(a.size() == b.size());
        for (std::size_t j = 0; j < a.size(); ++j)
            for (std::size_t i = 0; i < a[j].size(); ++i)
                CHECK(req(a[j][i], b[j][i]));
    }
}

TEST_CASE("d^2 = 0 on K(A;x) (x) K(A;x) over A = Q[x]/(x^2)")
{
    auto r = rqx_mod_x2();
    auto kz = koszul_complex(seq_of(r, {"x"}));
    auto t = tensor(kz, kz);
    verify_complex(t);
    // oracle: direct matrix multiplication of the two differentials
    auto d0 = t.differential(-2); // 1 -> 2
    auto d1 = t.differential(-1); // 2 -> 1
    auto prod = mat_compose(d1, d0, r, 1);
    for (auto& col : prod)
        for (auto& e : col)
            CHECK(e.is_zero());
}

TEST_CASE("tensor of two non-free complexes is rejected")
{
    auto r = rqx();
    auto M = cyclic_module(r, {parse_elt(r, "x")});
    auto X = one_term_complex(M, 0);
    CHECK_THROWS_AS(tensor(X, X), std::domain_error);
}

TEST_CASE("hom from the unit complex is the identity")
{
    auto r = rqx();
    auto M = cyclic_module(r, {parse_elt(r, "x^2")});
    std::map<int, FpModule<Q>> comps{{0, free_module(r, 1)}, {1, M}};
    std::map<int, Matrix<Q>> diffs{{0, {{parse_elt(r, "x")}}}};
    auto N = make_complex(r, comps, diffs);
    auto h = hom_from_free(unit_complex(r), N);
    for (int k = 0; k <= 1; ++k) {
        CHECK(h.component(k).gens == N.component(k).gens);
        CHECK(h.component(k).relations.size() ==
              N.component(k).relations.size());
    }
    auto a = h.differential(0);
    CHECK(req(a[0][0], parse_elt(r, "x")));
}

TEST_CASE("hom_from_free(K(Q[x];x), A) is the dual Koszul complex")
{
    auto r = rqx();
    auto h = hom_from_free(koszul_complex(seq_of(r, {"x"})), unit_complex(r));
    CHECK(complex_inf(h) == 0);
    CHECK(complex_sup(h) == 1);
    auto d = h.differential(0);
    CHECK(req(d[0][0], parse_elt(r, "x"))); // +x, A sitting in degrees 0 and 1
}

TEST_CASE("hom_from_free rejects non-free sources")
{
    auto r = rqx();
    auto M = cyclic_module(r, {parse_elt(r, "x")});
    CHECK_THROWS_AS(hom_from_free(one_term_complex(M, 0), unit_complex(r)),
                    std::domain_error);
}

namespace {

Complex<Q> random_free_complex(const Ring<Q>& r, std::mt19937& rng)
{
    // two-term complexes with arbitrary matrices have d^2 = 0; tensor a pair
    auto rand_mat = [&](std::size_t c, std::size_t rr) {
        Matrix<Q> m;
        Q k;
        for (std::size_t j = 0; j < c; ++j) {
            Column<Q> col;
            for (std::size_t i = 0; i < rr; ++i) {
                Monomial mm(r->nvars());
                for (std::size_t v = 0; v < r->nvars(); ++v)
                    mm.e[v] = rng() % 2;
                long coef = (long)(rng() % 5) - 2;
                col.push_back(RElt<Q>(r, poly_term(Q{}, mm, Q{}.from_int(coef))));
            }
            m.push_back(col);
        }
        return m;
    };
    auto mk = [&]() {
        std::size_t a = 1 + rng() % 2, b = 1 + rng() % 2;
        int base = (int)(rng() % 3) - 1;
        return two_term_complex(free_module(r, a), free_module(r, b),
                                rand_mat(a, b), base);
    };
    return tensor(mk(), mk(), false);
}

} // namespace

TEST_CASE("d^2 = 0 is closed under tensor, hom and cone")
{
    std::mt19937 rng(4242);
    auto r = rqxy();
    for (int iter = 0; iter < 8; ++iter) {
        auto X = random_free_complex(r, rng);
        auto Y = random_free_complex(r, rng);
        verify_complex(X);
        verify_complex(Y);
        auto t = tensor(X, Y, false);
        verify_complex(t);
        auto h = hom_from_free(X, Y, false);
        verify_complex(h);
        auto c = cone(identity_complex_map(X));
        verify_complex(c);
    }
}

TEST_CASE("hom-tensor adjunction comparison is a degreewise isomorphism")
{
    std::mt19937 rng(1717);
    auto r = rqxy();
    for (int iter = 0; iter < 4; ++iter) {
        auto P = random_free_complex(r, rng);
        auto Qc = random_free_complex(r, rng);
        auto M = random_free_complex(r, rng);

        auto lhs = hom_from_free(tensor(P, Qc, false), M, false);
        auto rhs = hom_from_free(P, hom_from_free(Qc, M, false), false);

        auto Lpq = tensor_layout(P, Qc);
        auto Ll = hom_layout(tensor(P, Qc, false), M);
        auto Lr = hom_layout(P, hom_from_free(Qc, M, false));

        std::map<int, Matrix<Q>> maps;
        for (auto& [k, bl] : Ll.blocks) {
            if (!lhs.has(k) || !rhs.has(k))
                continue;
            Matrix<Q> m(lhs.component(k).gens,
                        Column<Q>(rhs.component(k).gens, relt_zero(r)));
            for (auto& b : bl) {
                // source block: dual of (P (x) Q)^{b.i} against M^{b.i + k}
                auto tlit = Lpq.blocks.find(b.i);
                if (tlit == Lpq.blocks.end())
                    continue;
                for (auto& tb : tlit->second) {
                    int i1 = tb.i, i2 = b.i - tb.i;
                    auto* rb = Lr.find(k, i1);
                    if (!rb)
                        continue;
                    // inner layout of Hom(Q, M)^{k+i1}: block i2
                    auto Linner = hom_layout(Qc, M);
                    auto* ib = Linner.find(k + i1, i2);
                    if (!ib)
                        continue;
                    std::size_t gp = P.component(i1).gens;
                    std::size_t gq = Qc.component(i2).gens;
                    std::size_t gm = M.component(b.i + k).gens;
                    for (std::size_t p = 0; p < gp; ++p)
                        for (std::size_t q2 = 0; q2 < gq; ++q2)
                            for (std::size_t mm = 0; mm < gm; ++mm) {
                                std::size_t si =
                                    b.offset +
                                    (tb.offset + p * gq + q2) * b.ng + mm;
                                std::size_t ti =
                                    rb->offset +
                                    p * rb->ng +
                                    (ib->offset + q2 * ib->ng + mm);
                                m[si][ti] = relt_const(r, 1);
                            }
                }
            }
            maps.emplace(k, m);
        }
        auto cmp = make_complex_map(lhs, rhs, std::move(maps), true);
        for (int k = std::min(complex_inf(lhs), complex_inf(rhs));
             k <= std::max(complex_sup(lhs), complex_sup(rhs)); ++k) {
            CHECK(lhs.component(k).gens == rhs.component(k).gens);
            if (lhs.component(k).gens)
                CHECK(map_is_iso(cmp.level(k)));
        }
    }
}

TEST_CASE("hom (x) hom collapse comparison is a chain isomorphism")
{
    std::mt19937 rng(5150);
    auto r = rqxy();
    for (int iter = 0; iter < 3; ++iter) {
        auto X = random_free_complex(r, rng);
        auto Y = random_free_complex(r, rng);
        auto c = hom_tensor_collapse(X, Y, true);
        for (int k = complex_inf(c.source); k <= complex_sup(c.source); ++k)
            if (c.source.component(k).gens)
                CHECK(map_is_iso(c.level(k)));
    }
}

TEST_CASE("H^0 of K(Q[x,y]; (x,y)) is the residue field presentation")
{
    auto r = rqxy();
    auto kz = koszul_complex(seq_of(r, {"x", "y"}));
    auto h0 = cohomology(kz, 0);
    // compare against A/(x,y) via the canonical generator comparison
    auto target = cyclic_module(r, {parse_elt(r, "x"), parse_elt(r, "y")});
    REQUIRE(h0.gens == 1);
    ModuleMap<Q> cmp(h0, target, identity_matrix(r, 1));
    CHECK(map_is_iso(cmp));
    CHECK(module_is_zero(cohomology(kz, -1)));
    CHECK(module_is_zero(cohomology(kz, -2)));
}

TEST_CASE("H^{-1} of K(A; x^2) over A = Q[x]/(x^2) is free of rank one")
{
    auto r = rqx_mod_x2();
    auto kz = koszul_complex(seq_of(r, {"x^2"}));
    // x^2 = 0 in A: the differential vanishes and H^{-1} = A
    auto d = kz.differential(-1);
    CHECK(d[0][0].is_zero());
    auto h = cohomology(kz, -1);
    REQUIRE(h.gens == 1);
    ModuleMap<Q> cmp(h, free_module(r, 1), identity_matrix(r, 1));
    CHECK(map_is_iso(cmp));
}

TEST_CASE("is_quasi_iso on identity, augmentation and a non-example")
{
    auto r = rqx();
    auto kz = koszul_complex(seq_of(r, {"x"}));
    CHECK(is_quasi_iso(identity_complex_map(kz)).is_quasi_iso);

    // augmentation K(A;x) -> A/(x) in degree 0
    auto q = one_term_complex(cyclic_module(r, {parse_elt(r, "x")}), 0);
    std::map<int, Matrix<Q>> maps{{0, identity_matrix(r, 1)}};
    auto aug = make_complex_map(kz, q, maps);
    CHECK(is_quasi_iso(aug).is_quasi_iso);

    // multiplication by x on A as one-term complexes: cokernel witness
    auto A = unit_complex(r);
    std::map<int, Matrix<Q>> mx{{0, Matrix<Q>{{parse_elt(r, "x")}}}};
    auto f = make_complex_map(A, A, mx);
    auto rep = is_quasi_iso(f);
    CHECK_FALSE(rep.is_quasi_iso);
    bool has_coker = false;
    for (auto& fl : rep.failures)
        if (fl.reason.find("cokernel") != std::string::npos &&
            !fl.witness.empty())
            has_coker = true;
    CHECK(has_coker);
}

TEST_CASE("free resolution of the residue field over Q[x,y]")
{
    auto r = rqxy();
    auto M = cyclic_module(r, {parse_elt(r, "x"), parse_elt(r, "y")});
    auto res = free_resolution(M, 3);
    CHECK(res.terminated);
    CHECK(res.length == 2);
    CHECK(res.complex.component(0).gens == 1);
    CHECK(res.complex.component(-1).gens == 2);
    CHECK(res.complex.component(-2).gens == 1);
    // exactness via the augmentation being a quasi-isomorphism
    CHECK(is_quasi_iso(res.augmentation).is_quasi_iso);
}

TEST_CASE("free resolution of A/(x) over Q[x]/(x^2) is periodic")
{
    auto r = rqx_mod_x2();
    auto M = cyclic_module(r, {parse_elt(r, "x")});
    auto res = free_resolution(M, 4);
    CHECK_FALSE(res.terminated);
    CHECK(res.length == 4);
    for (int k = -4; k <= 0; ++k)
        CHECK(res.complex.component(k).gens == 1);
    for (int k = -4; k < 0; ++k) {
        auto d = res.complex.differential(k);
        CHECK(req(d[0][0], parse_elt(r, "x")));
    }
}

TEST_CASE("free module resolves as itself")
{
    auto r = rqxy();
    auto M = free_module(r, 2);
    auto res = free_resolution(M, 5);
    CHECK(res.terminated);
    CHECK(res.length == 0);
    CHECK(res.complex.component(0).gens == 2);
}

TEST_CASE("exact functor commutation for tensoring with a free module")
{
    std::mt19937 rng(31337);
    auto r = rqxy();
    for (int iter = 0; iter < 5; ++iter) {
        auto X = random_free_complex(r, rng);
        std::size_t rank = 1 + rng() % 2;
        auto F = one_term_complex(free_module(r, rank), 0);
        auto FX = tensor(X, F, false);
        for (int k = complex_inf(X); k <= complex_sup(X); ++k) {
            Matrix<Q> u;
            auto H = cohomology(X, k, &u);
            auto HF = module_tensor(H, free_module(r, rank));
            Matrix<Q> uf;
            auto HFX = cohomology(FX, k, &uf);
            // comparison H^k(X) (x) A^rank -> H^k(X (x) A^rank)
            // generator (i, s) -> class of u_i placed in copy s
            Matrix<Q> span = uf;
            Matrix<Q> kill = FX.component(k).relations;
            if (FX.component(k - 1).gens)
                for (auto& c : FX.differential(k - 1))
                    kill.push_back(c);
            for (auto& c : kill)
                span.push_back(c);
            auto gb = module_gb(r, span, FX.component(k).gens);
            Matrix<Q> cmp;
            for (std::size_t i = 0; i < H.gens; ++i)
                for (std::size_t s = 0; s < rank; ++s) {
                    Column<Q> col(FX.component(k).gens, relt_zero(r));
                    // X^k gens index p -> FX^k index p*rank + s
                    for (std::size_t p = 0; p < X.component(k).gens; ++p)
                        col[p * rank + s] = u[i][p];
                    auto lift = modgb_lift(*gb, col);
                    Column<Q> out(uf.size(), relt_zero(r));
                    for (std::size_t t = 0; t < uf.size(); ++t)
                        out[t] = lift[t];
                    cmp.push_back(out);
                }
            ModuleMap<Q> cm(HF, HFX, cmp, false);
            CHECK(map_is_iso(cm));
        }
    }
}
