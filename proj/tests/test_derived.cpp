#include <catch2/catch_amalgamated.hpp>

#include "adic/derived.hpp"

using namespace adic;
using Q = RationalField;

static ElementSequence<Q> seq_of(const Ring<Q>& r,
                                 std::initializer_list<const char*> es)
{
    std::vector<RElt<Q>> v;
    for (auto* s : es)
        v.push_back(parse_elt(r, s));
    return ElementSequence<Q>(r, v);
}

static Ring<Q> graded_qxy()
{
    return make_ring(Q{}, {"x", "y"}, {1, 1}, {});
}
static Ring<Q> graded_qt()
{
    return make_ring(Q{}, {"t"}, {1}, {});
}
static Ring<Q> graded_qx()
{
    return make_ring(Q{}, {"x"}, {1}, {});
}

TEST_CASE("complex_resolution of a two-term complex of torsion modules")
{
    auto r = graded_qx();
    auto M0 = cyclic_module(r, {parse_elt(r, "x^2")});
    auto M1 = cyclic_module(r, {parse_elt(r, "x^2")});
    std::map<int, FpModule<Q>> comps{{0, M0}, {1, M1}};
    std::map<int, Matrix<Q>> diffs{{0, {{parse_elt(r, "x")}}}};
    auto m = make_complex(r, comps, diffs);
    auto res = complex_resolution(m, 4);
    CHECK(complex_is_free(res.complex));
    verify_complex(res.complex);
    verify_complex_map(res.augmentation);
    CHECK(is_quasi_iso(res.augmentation).is_quasi_iso);
}

TEST_CASE("rgamma of the graded plane: H^2 dimensions grow like j^2")
{
    auto r = graded_qxy();
    auto seq = seq_of(r, {"x", "y"});
    auto rg = rgamma(unit_complex(r), seq, 3);
    for (std::uint32_t j = 1; j <= 3; ++j) {
        std::size_t total = 0;
        for (std::int64_t d = -(std::int64_t)2 * j; d <= 0; ++d)
            total += slice_cohomology(rg.system.levels[j - 1], 2, d).dim;
        CHECK(total == (std::size_t)j * j);
        for (std::int64_t d = -4; d <= 2; ++d) {
            CHECK(slice_cohomology(rg.system.levels[j - 1], 0, d).dim == 0);
            CHECK(slice_cohomology(rg.system.levels[j - 1], 1, d).dim == 0);
        }
    }
}

TEST_CASE("rgamma of the residue field: cone of sigma dies at offset one")
{
    // the ideal kills M, so every transition of the cone system is zero on
    // cohomology: the colimit comparison RGamma(M) -> M is an isomorphism
    auto r = graded_qxy();
    auto seq = seq_of(r, {"x", "y"});
    auto m = one_term_complex(
        cyclic_module(r, {parse_elt(r, "x"), parse_elt(r, "y")}), 0);
    auto rep = torsion_char_verify(m, seq, 3);
    CHECK(rep.report.pass);
    CHECK(rep.onset == 1);
}

TEST_CASE("rgamma cohomology vanishes outside the dimension window")
{
    auto r = graded_qxy();
    auto seq = seq_of(r, {"x", "y"});
    auto m = one_term_complex(cyclic_module(r, {parse_elt(r, "x^2")}), 0);
    auto rg = rgamma(m, seq, 3);
    // inf H(M) = 0, sup H(M) = 0, n = 2: cohomology lives in [0, 2]
    for (auto& lvl : rg.system.levels) {
        for (int k = complex_inf(lvl); k <= complex_sup(lvl); ++k) {
            if (k >= 0 && k <= 2)
                continue;
            CHECK(module_is_zero(cohomology(lvl, k)));
        }
    }
}

TEST_CASE("llambda tower of Q[t]: H^0 realizes the power series levels")
{
    auto r = graded_qt();
    auto seq = seq_of(r, {"t"});
    auto ll = llambda(unit_complex(r), seq, 4);
    for (std::uint32_t j = 1; j <= 4; ++j) {
        auto& lvl = ll.tower.levels[j - 1];
        auto h0 = cohomology(lvl, 0);
        auto tgt = cyclic_module(r, {rpow(relt_var(r, 0), j)});
        // H^0(xi_j) identifies H^0 with A/(t^j)
        auto hx = induced_map(ll.xi[j - 1], 0);
        CHECK(map_is_iso(hx));
        // all other cohomology vanishes on the nose over a domain
        CHECK(module_is_zero(cohomology(lvl, -1)));
        (void)h0;
        (void)tgt;
    }
    // per-degree stable dimension 1 = the power series ring seen levelwise
    for (std::int64_t d = 0; d <= 3; ++d) {
        CHECK(slice_cohomology(ll.tower.levels[3], 0, d).dim == 1);
    }
}

TEST_CASE("llambda of the residue field: stable H^0 and pro-zero edges")
{
    auto r = graded_qxy();
    auto seq = seq_of(r, {"x", "y"});
    auto m = one_term_complex(
        cyclic_module(r, {parse_elt(r, "x"), parse_elt(r, "y")}), 0);
    auto ll = llambda(m, seq, 3);
    for (std::uint32_t j = 1; j <= 3; ++j) {
        auto h0 = induced_map(ll.tau[j - 1], 0);
        CHECK(map_is_iso(h0));
    }
    // nonzero cohomological degrees: the inverse systems are pro-zero
    for (int k = -2; k <= -1; ++k) {
        auto ht = cohomology_tower(ll.tower, k);
        auto cert = pro_zero_check(ht);
        CHECK(cert.certified);
    }
}

TEST_CASE("llambda xi comparison for a free module is a levelwise quasi-iso")
{
    auto r = graded_qt();
    auto seq = seq_of(r, {"t"});
    auto ll = llambda(unit_complex(r), seq, 3);
    for (std::uint32_t j = 1; j <= 3; ++j)
        CHECK(is_quasi_iso(ll.xi[j - 1]).is_quasi_iso);
}

TEST_CASE("u-compatibility: xi after tau is the completion tau levelwise")
{
    auto r = graded_qxy();
    auto seq = seq_of(r, {"x", "y"});
    auto m = one_term_complex(
        cyclic_module(r, {parse_elt(r, "x"), parse_elt(r, "y")}), 0);
    auto ll = llambda(m, seq, 3);
    auto ct = completion_tower(seq, ll.res.complex, 3);
    for (std::uint32_t j = 1; j <= 3; ++j) {
        auto lhs = compose(ll.xi[j - 1], ll.tau[j - 1]);
        auto& rhs = ct.tau[j - 1];
        for (auto& [k, mm] : lhs.maps) {
            auto rm = rhs.map_at(k);
            REQUIRE(mm.size() == rm.size());
            FpModule<Q> tgt = lhs.target.component(k);
            if (!tgt.gens)
                continue;
            ModuleMap<Q> a(lhs.source.component(k), tgt, mm, false);
            ModuleMap<Q> b(lhs.source.component(k), tgt, rm, false);
            CHECK(maps_equal(a, b));
        }
    }
}

TEST_CASE("llambda validity window raises on out-of-window requests")
{
    Q k;
    auto r = make_ring(k, {"x"}, {1}, {parse_poly_raw(k, {"x"}, "x^2")});
    auto m = one_term_complex(cyclic_module(r, {parse_elt(r, "x")}), 0);
    auto ll = llambda(m, seq_of(r, {"x"}), 2, 3);
    CHECK(ll.valid_lo > std::numeric_limits<int>::min() / 4);
    CHECK_THROWS_AS(ll.require_valid(ll.valid_lo - 1), LevelCapError);
    CHECK_NOTHROW(ll.require_valid(ll.valid_lo));
}

TEST_CASE("triangle consistency: (e (x) 1) o v equals sigma as matrices")
{
    // v embeds the torsion submodule into the degree-0 component of
    // K^vee_j (x) M once j reaches the stabilization level; composing with
    // e^vee (x) 1 returns the inclusion into M on the nose
    auto r = graded_qxy();
    auto seq = seq_of(r, {"x", "y"});
    auto M = cyclic_module(r, {parse_elt(r, "x^2"), parse_elt(r, "y")});
    auto t = torsion_submodule(M, seq);
    REQUIRE(map_is_iso(t.inclusion));
    auto mcx = one_term_complex(M, 0);
    for (std::uint32_t j = 2; j <= 3; ++j) {
        auto kvm = tensor(dual_koszul_level(seq, j), mcx, false);
        // v: Gamma in degree 0 (chain map because a^j kills Gamma)
        std::map<int, Matrix<Q>> vmaps{{0, t.inclusion.mat}};
        auto v = make_complex_map(one_term_complex(t.torsion, 0), kvm,
                                  std::move(vmaps), true);
        auto e = hom_precompose(koszul_unit(seq, j), unit_complex(r), false);
        auto sig = tensor_map(e, identity_complex_map(mcx), false);
        sig.target = mcx;
        auto lhs = compose(sig, v);
        ModuleMap<Q> a(t.torsion, M, lhs.map_at(0), false);
        CHECK(maps_equal(a, t.inclusion));
    }
}

TEST_CASE("idempotence of both derived functors over Q[x]")
{
    auto r = graded_qx();
    auto seq = seq_of(r, {"x"});

    auto m1 = one_term_complex(cyclic_module(r, {parse_elt(r, "x")}), 0);
    auto rep1 = idempotence_verify(m1, seq, 6, -2, 1);
    CHECK(rep1.rgamma_side.pass);
    CHECK(rep1.llambda_side.pass);
    CHECK(rep1.principal_kernel.pass);

    auto rep2 = idempotence_verify(unit_complex(r), seq, 6, -2, 1);
    CHECK(rep2.rgamma_side.pass);
    CHECK(rep2.llambda_side.pass);
    CHECK(rep2.principal_kernel.pass);
}

TEST_CASE("torsion characterization onset for A/(x^2, y)")
{
    auto r = graded_qxy();
    auto seq = seq_of(r, {"x", "y"});
    auto m = one_term_complex(
        cyclic_module(r, {parse_elt(r, "x^2"), parse_elt(r, "y")}), 0);
    auto rep = torsion_char_verify(m, seq, 4);
    CHECK(rep.report.pass);
    CHECK(rep.onset == 2);
}

TEST_CASE("torsion characterization rejects the free module")
{
    auto r = graded_qxy();
    auto seq = seq_of(r, {"x", "y"});
    auto rep = torsion_char_verify(unit_complex(r), seq, 3);
    CHECK(rep.report.verdict == "not-applicable");
    REQUIRE_FALSE(rep.report.notes.empty());
    CHECK(rep.report.notes[0].find("witness") != std::string::npos);
}

TEST_CASE("torsion characterization on a two-term torsion complex")
{
    auto r = graded_qx();
    auto seq = seq_of(r, {"x"});
    auto M = cyclic_module(r, {parse_elt(r, "x^2")});
    std::map<int, FpModule<Q>> comps{{0, M}, {1, M}};
    std::map<int, Matrix<Q>> diffs{{0, {{parse_elt(r, "x")}}}};
    auto m = make_complex(r, comps, diffs);
    auto rep = torsion_char_verify(m, seq, 4);
    CHECK(rep.report.pass);
}

TEST_CASE("mgm equivalence for the residue field and for the ring")
{
    auto r = graded_qxy();
    auto seq = seq_of(r, {"x", "y"});

    auto m = one_term_complex(
        cyclic_module(r, {parse_elt(r, "x"), parse_elt(r, "y")}), 0);
    auto rep = mgm_verify(m, seq, 5, -3, 1);
    CHECK(rep.llambda_sigma.pass);
    CHECK(rep.rgamma_tau.pass);
    CHECK(rep.round_trip.pass);

    auto repA = mgm_verify(unit_complex(r), seq, 5, -3, 1);
    CHECK(repA.llambda_sigma.pass);
    CHECK(repA.rgamma_tau.pass);
    CHECK(repA.round_trip.pass);
}

TEST_CASE("mgm on the zero complex passes trivially")
{
    auto r = graded_qxy();
    auto seq = seq_of(r, {"x", "y"});
    Complex<Q> zero;
    zero.ring = r;
    auto rep = mgm_verify(zero, seq, 3, -2, 1);
    CHECK(rep.pass());
}

TEST_CASE("gm duality for the principal case")
{
    auto r = graded_qx();
    auto seq = seq_of(r, {"x"});
    auto rep = gm_duality_verify(unit_complex(r), unit_complex(r), seq, 4, 0,
                                 3);
    CHECK(rep.map1.pass);
    CHECK(rep.map2.pass);
    CHECK(rep.map3.pass);
    CHECK(rep.map4.pass);
    CHECK(rep.rho.pass);
}

TEST_CASE("gm duality with a torsion module on the left")
{
    auto r = graded_qx();
    auto seq = seq_of(r, {"x"});
    auto m = one_term_complex(cyclic_module(r, {parse_elt(r, "x")}), 0);
    auto rep = gm_duality_verify(m, unit_complex(r), seq, 4, -2, 2);
    CHECK(rep.pass());
}

TEST_CASE("permanence for (x, y) versus (x^2, y)")
{
    auto r = graded_qxy();
    auto a = seq_of(r, {"x", "y"});
    auto b = seq_of(r, {"x^2", "y"});
    auto rep = permanence_verify(a, b, 5, -4, 0);
    CHECK(rep.radical_ok);
    CHECK(rep.report.pass);
}

TEST_CASE("permanence detects failing radical hypotheses")
{
    auto r = graded_qxy();
    auto rep = permanence_verify(seq_of(r, {"x"}), seq_of(r, {"y"}), 3, -2, 0);
    CHECK_FALSE(rep.radical_ok);
    CHECK(rep.report.verdict == "hypothesis fails");
    REQUIRE_FALSE(rep.report.notes.empty());
}

TEST_CASE("permanence for equal ideals")
{
    auto r = graded_qxy();
    auto rep = permanence_verify(seq_of(r, {"x", "y"}),
                                 seq_of(r, {"x+y", "y"}), 4, -3, 0);
    CHECK(rep.radical_ok);
    CHECK(rep.report.pass);
}

TEST_CASE("base change from Q[u] into the graded plane")
{
    auto a = make_ring(Q{}, {"u"}, {1}, {});
    auto b = graded_qxy();
    RingMap<Q> f(a, b, {parse_poly_raw(Q{}, {"x", "y"}, "x")});
    auto seq_a = seq_of(a, {"u"});
    auto seq_b = seq_of(b, {"x"});
    auto rep = base_change_verify(f, seq_a, seq_b, unit_complex(b), 5, -2, 1);
    CHECK(rep.radical_ok);
    CHECK(rep.report.pass);
}

TEST_CASE("base change along the identity is trivial")
{
    auto b = graded_qxy();
    auto a = b;
    RingMap<Q> f(a, b,
                 {parse_poly_raw(Q{}, {"x", "y"}, "x"),
                  parse_poly_raw(Q{}, {"x", "y"}, "y")});
    auto s = seq_of(b, {"x", "y"});
    auto rep = base_change_verify(f, s, s, unit_complex(b), 5, -2, 1);
    CHECK(rep.radical_ok);
    CHECK(rep.report.pass);
}

TEST_CASE("base change into the dual numbers")
{
    Q k;
    auto a = make_ring(k, {"u"}, {1}, {});
    auto b = make_ring(k, {"x"}, {1}, {parse_poly_raw(k, {"x"}, "x^2")});
    RingMap<Q> f(a, b, {parse_poly_raw(k, {"x"}, "x")});
    auto rep = base_change_verify(f, seq_of(a, {"u"}), seq_of(b, {"x"}),
                                  unit_complex(b), 5, -2, 1);
    CHECK(rep.radical_ok);
    CHECK(rep.report.pass);
}
