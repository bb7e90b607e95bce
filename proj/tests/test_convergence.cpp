#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sseq/convergence.hpp"
#include "sseq/filtered.hpp"

using namespace sseq;

namespace {

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

TEST_CASE("obstruction groups of bounded couples vanish")
{
    for (std::uint64_t seed = 0; seed < 2; ++seed) {
        CESystem sys = random_system(seed, small_params(3));
        GradedObject total = sys.H(kNegInf, kPosInf);
        ExactCouple cl = build_couple(sys, Side::LEFT);
        ObstructionData odl = boardman_groups(cl, 6);
        CHECK(graded_is_zero(odl.W));
        CHECK(graded_is_zero(odl.Alim));
        CHECK(graded_is_zero(odl.RAlim));
        CHECK(graded_dim(odl.Ainf) == graded_dim(total));
        for (auto& [s, g] : odl.Q)
            CHECK(graded_is_zero(g));
        for (auto& [s, g] : odl.RK)
            CHECK(graded_is_zero(g));

        ExactCouple cr = build_couple(sys, Side::RIGHT);
        ObstructionData odr = boardman_groups(cr, 6);
        CHECK(graded_is_zero(odr.W));
        CHECK(graded_is_zero(odr.Ainf));
        CHECK(graded_dim(odr.Alim) == graded_dim(total));
        for (auto& [s, g] : odr.RK)
            CHECK(graded_is_zero(g));
    }
}

TEST_CASE("six-term sequence holds on random couples")
{
    for (std::uint64_t seed = 0; seed < 2; ++seed) {
        CESystem sys = random_system(seed, small_params(2));
        for (Side side : {Side::RIGHT, Side::LEFT}) {
            ExactCouple c = build_couple(sys, side);
            ObstructionData od = boardman_groups(c, 6);
            ValidationReport rep = six_term_diagnostics(od);
            for (auto& f : rep.failures)
                MESSAGE("seed=" << seed << ": " << f);
            CHECK(rep.ok);
            CHECK(rep.checks > 0);
        }
    }
}

TEST_CASE("colimit convergence of the left couple is strong")
{
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        CESystem sys = random_system(seed, small_params(3));
        ExactCouple c = build_couple(sys, Side::LEFT);
        ObstructionData od = boardman_groups(c, 6);
        ConvergenceCertificate cert = verify_colimit_convergence(od);
        for (auto& f : cert.report.failures)
            MESSAGE("seed=" << seed << ": " << f);
        CHECK(cert.report.ok);
        CHECK(cert.mode == ConvMode::STRONG);
        CHECK(cert.exhaustive);
        CHECK(cert.hausdorff);
        CHECK(cert.complete);
        CHECK(graded_is_zero(cert.error));
        CHECK(graded_is_zero(cert.W));
        CHECK(graded_dim(cert.target) == graded_dim(sys.H(kNegInf, kPosInf)));
    }
}

TEST_CASE("limit convergence of the right couple is strong")
{
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        CESystem sys = random_system(seed, small_params(3));
        ExactCouple c = build_couple(sys, Side::RIGHT);
        ObstructionData od = boardman_groups(c, 6);
        ConvergenceCertificate cert = verify_limit_convergence(od);
        for (auto& f : cert.report.failures)
            MESSAGE("seed=" << seed << ": " << f);
        CHECK(cert.report.ok);
        CHECK(cert.mode == ConvMode::STRONG);
        CHECK(graded_is_zero(cert.error));
        CHECK(graded_is_zero(cert.W));
        CHECK(graded_dim(cert.target) == graded_dim(sys.H(kNegInf, kPosInf)));
    }
}

TEST_CASE("convergence checkers reject couples missing the hypotheses")
{
    CESystem sys = random_system(2, small_params(5));
    REQUIRE_FALSE(graded_is_zero(sys.H(kNegInf, kPosInf)));
    ExactCouple cl = build_couple(sys, Side::LEFT);
    ObstructionData odl = boardman_groups(cl, 6);
    CHECK_THROWS_AS(verify_limit_convergence(odl), HypothesesUnmet);
    ExactCouple cr = build_couple(sys, Side::RIGHT);
    ObstructionData odr = boardman_groups(cr, 6);
    CHECK_THROWS_AS(verify_colimit_convergence(odr), HypothesesUnmet);
}

TEST_CASE("W maps isomorphically onto ker(kappa) on both sides")
{
    for (std::uint64_t seed = 0; seed < 2; ++seed) {
        CESystem sys = random_system(seed, small_params(2));
        for (Side side : {Side::RIGHT, Side::LEFT}) {
            WKappa wk = w_kappa_iso(sys, side, 6);
            for (auto& f : wk.report.failures)
                MESSAGE("seed=" << seed << ": " << f);
            CHECK(wk.report.ok);
            CHECK(graded_is_zero(wk.W));
            CHECK(graded_is_zero(wk.ker_kappa));
            CHECK(wk.iso.deg == (side == Side::RIGHT ? -1 : 0));
            CHECK(graded_map_is_zero(wk.iso));
        }
    }
}
