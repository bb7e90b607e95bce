#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sseq/couples.hpp"
#include "sseq/filtered.hpp"

using namespace sseq;

namespace {

// C = (k -> k) with d = id, filtered in two steps: F_1 = C_0, F_2 = C.
FilteredComplex two_term()
{
    FilteredComplex fc;
    fc.p = 3;
    fc.t0 = 0;
    fc.t1 = 2;
    fc.a = 0;
    fc.b = 2;
    fc.C[0] = FinSpace(3, 1);
    fc.C[1] = FinSpace(3, 1);
    Mat d(3, 1, 1);
    d.at(0, 0) = 1;
    fc.d[1] = LinMap(fc.C[1], fc.C[0], d);
    for (int t = 0; t < 2; ++t) {
        fc.F[{0, t}] = zero_subspace(fc.C[t]);
        fc.F[{1, t}] = t == 0 ? full_subspace(fc.C[0]) : zero_subspace(fc.C[1]);
        fc.F[{2, t}] = full_subspace(fc.C[t]);
    }
    return fc;
}

RandomParams small_params(int p)
{
    RandomParams par;
    par.p = p;
    par.max_dim = 4;
    par.degrees = 3;
    par.window = 3;
    return par;
}

}  // namespace

TEST_CASE("zero couple is valid and has zero limits")
{
    ExactCouple c;
    c.p = 5;
    c.smin = 0;
    c.smax = 3;
    ValidationReport rep = validate_couple(c);
    CHECK(rep.ok);
    CoupleLimits lim = couple_limits(c);
    CHECK(lim.cc_colimit);
    CHECK(lim.cc_limit);
    CHECK(lim.filt_lim_complete_hausdorff);
}

TEST_CASE("right and left couples of a filtered complex validate")
{
    CESystem sys = from_filtered_complex(two_term());
    for (Side side : {Side::RIGHT, Side::LEFT}) {
        ExactCouple c = build_couple(sys, side);
        ValidationReport rep = validate_couple(c);
        for (auto& f : rep.failures)
            MESSAGE(f);
        CHECK(rep.ok);
    }
    ExactCouple cr = build_couple(sys, Side::RIGHT);
    CHECK(cr.beta_deg() == -1);
    CHECK(cr.gamma_deg() == 0);
    ExactCouple cl = build_couple(sys, Side::LEFT);
    CHECK(cl.beta_deg() == 0);
    CHECK(cl.gamma_deg() == -1);
}

TEST_CASE("first page of a couple is E^1 with no boundaries")
{
    CESystem sys = from_filtered_complex(two_term());
    ExactCouple c = build_couple(sys, Side::RIGHT);
    PageEntry p2 = couple_pages(c, 1, 2);
    CHECK(p2.E == sys.H(1, 2));
    for (int t : graded_degrees(p2.E1)) {
        CHECK(sub_eq(p2.Z.at(t), sub_full(p2.E1.at(t))));
        CHECK(coord_is_zero(p2.B.at(t).obj));
    }
    GradedMap d1 = couple_differential(c, 1, 2);
    CHECK(d1.deg == -1);
    CHECK_FALSE(map_is_zero(d1.at(1)));
    CoordKic kc = coord_kic(d1.at(1));
    CHECK(coord_is_zero(kc.kernel.obj));
    CHECK(coord_is_zero(kc.coker));
}

TEST_CASE("couple pages agree with the system pages")
{
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        CESystem sys = random_system(seed, small_params(3));
        for (Side side : {Side::RIGHT, Side::LEFT}) {
            ExactCouple c = build_couple(sys, side);
            for (int r = 1; r <= 3; ++r)
                for (int s = 0; s <= 4; ++s) {
                    PageEntry pc = couple_pages(c, r, s);
                    PageEntry pe = page_objects(sys, r, s);
                    CHECK(pc.E1 == pe.E1);
                    for (int t : graded_degrees(pc.E1)) {
                        CHECK(sub_eq(pc.Z.at(t), pe.Z.at(t)));
                        CHECK(sub_eq(pc.B.at(t), pe.B.at(t)));
                    }
                }
        }
    }
}

TEST_CASE("couple page turning on random systems")
{
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        CESystem sys = random_system(seed, small_params(2));
        for (Side side : {Side::RIGHT, Side::LEFT}) {
            ExactCouple c = build_couple(sys, side);
            for (int r = 1; r <= 3; ++r) {
                PageTurn cert = couple_turn_verify(c, r, 0, 4);
                for (auto& f : cert.failures)
                    MESSAGE("seed=" << seed << " r=" << r << ": " << f);
                CHECK(cert.ok);
            }
        }
    }
}

TEST_CASE("comparison morphism from the right couple to the left couple")
{
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        CESystem sys = random_system(seed, small_params(3));
        CoupleMorphism cm = couple_comparison(sys, 3);
        for (auto& f : cm.failures)
            MESSAGE("seed=" << seed << ": " << f);
        CHECK(cm.ok);
        for (auto& [s, f] : cm.phi)
            CHECK(f.deg == -1);
    }
}

TEST_CASE("couple limits and conditional convergence flags")
{
    CESystem sys = random_system(2, small_params(5));
    ExactCouple cr = build_couple(sys, Side::RIGHT);
    CoupleLimits lr = couple_limits(cr);
    CHECK(lr.cc_limit);  // A''_inf = colim_s H(s, inf) = 0
    CHECK(lr.filt_lim_complete_hausdorff);
    ExactCouple cl = build_couple(sys, Side::LEFT);
    CoupleLimits ll = couple_limits(cl);
    CHECK(ll.cc_colimit);  // A'_{-inf} = RA'_{-inf} = 0
    CHECK(ll.filt_lim_complete_hausdorff);
    // the colimit of the left couple is the total homology
    GradedObject total = sys.H(kNegInf, kPosInf);
    CHECK(ll.Ainf == total);
    // the limit of the right couple is also the total homology
    CHECK(lr.Alim == total);
    CHECK(graded_is_zero(lr.RAlim));
}

TEST_CASE("endpoint propositions for both couples")
{
    CESystem sys = random_system(4, small_params(3));
    ValidationReport rr = right_couple_limit_check(sys);
    for (auto& f : rr.failures)
        MESSAGE(f);
    CHECK(rr.ok);
    for (int j = 1; j <= 3; ++j) {
        ValidationReport rl = left_couple_ses_check(sys, j);
        for (auto& f : rl.failures)
            MESSAGE(f);
        CHECK(rl.ok);
    }
}

TEST_CASE("a broken triangle is reported")
{
    CESystem sys = from_filtered_complex(two_term());
    ExactCouple c = build_couple(sys, Side::LEFT);
    int s = 1;  // A'_1 = H(F_1) and E_1 = H(0,1) are both nonzero
    REQUIRE_FALSE(graded_is_zero(c.Aat(s)));
    REQUIRE_FALSE(graded_is_zero(c.Eat(s)));
    c.beta[s] = graded_zero_map(c.Aat(s), c.Eat(s), c.beta_deg());
    ValidationReport rep = validate_couple(c);
    CHECK_FALSE(rep.ok);
    bool found = false;
    for (auto& f : rep.failures)
        found = found || f.find("E_1") != std::string::npos ||
                f.find("A_1") != std::string::npos;
    CHECK(found);
}
