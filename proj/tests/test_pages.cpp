#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sseq/filtered.hpp"
#include "sseq/pages.hpp"

using namespace sseq;

namespace {

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

// Chain-level connecting map of 0 -> F_{j}/F_i -> F_k/F_i -> F_k/F_j -> 0,
// computed directly from the complex as an independent oracle.
LinMap snake(const FilteredComplex& fc, int i, int j, int k, int t)
{
    auto pres = [&](int lo, int hi, int tt) {
        Subquotient q{fc.space(tt), fc.filt(hi, tt), fc.filt(lo, tt)};
        return subquotient_present(q);
    };
    auto hpres = [&](int lo, int hi, int tt) {
        SubqPres qp = pres(lo, hi, tt);
        auto dq = [&](int td) {
            return compose(pres(lo, hi, td - 1).project,
                           compose(fc.diff(td), pres(lo, hi, td).lift));
        };
        Subquotient q{qp.space, kernel(dq(tt)), image(dq(tt + 1))};
        return subquotient_present(q);
    };
    SubqPres hs = hpres(j, k, t), ht = hpres(i, j, t - 1);
    LinMap rep = compose(pres(j, k, t).lift, hs.lift);
    LinMap cls = compose(ht.project, pres(i, j, t - 1).project);
    return compose(cls, compose(fc.diff(t), rep));
}

CoordMap as_coord(const LinMap& f)
{
    CoordObject cs = coord_fin(f.src.p, f.src.dim());
    CoordObject ct = coord_fin(f.tgt.p, f.tgt.dim());
    std::map<int, SparseVec> cols;
    for (int c = 0; c < f.src.dim(); ++c)
        for (int r = 0; r < f.tgt.dim(); ++r)
            if (int x = f.m.at(r, c))
                cols[c][r] = x;
    return coord_map(cs, ct, {}, cols);
}

}  // namespace

TEST_CASE("two-term complex: first page and the d^1 isomorphism")
{
    CESystem s = from_filtered_complex(two_term());
    PageEntry p1 = page_objects(s, 1, 1);
    CHECK(p1.E == graded_single(0, coord_fin(3, 1)));
    CHECK(sub_eq(p1.Z.at(0), sub_full(p1.E1.at(0))));
    CHECK(coord_is_zero(p1.B.at(0).obj));
    PageEntry p2 = page_objects(s, 1, 2);
    CHECK(p2.E == graded_single(1, coord_fin(3, 1)));

    GradedMap d1 = page_differential(s, p2, p1);
    CHECK(d1.deg == -1);
    CHECK_FALSE(map_is_zero(d1.at(1)));
    CoordKic kc = coord_kic(d1.at(1));
    CHECK(coord_is_zero(kc.kernel.obj));
    CHECK(coord_is_zero(kc.coker));

    for (int ss = 0; ss <= 3; ++ss)
        CHECK(graded_is_zero(page_objects(s, 2, ss).E));
    PageTurn cert = turn_page_verify(s, 1, 0, 3);
    for (auto& f : cert.failures)
        MESSAGE(f);
    CHECK(cert.ok);

    LimitPage lp = limit_page(s, 0, 3);
    for (auto& [ss, le] : lp.at_s) {
        CHECK(le.stabilized);
        CHECK(graded_is_zero(le.Einf));
        CHECK(graded_is_zero(le.REinf));
    }
}

TEST_CASE("boundary components agree with the chain-level snake map")
{
    RandomParams par;
    par.p = 3;
    par.max_dim = 4;
    par.degrees = 3;
    par.window = 3;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        FilteredComplex fc = random_filtered_complex(seed, par);
        CESystem sys = from_filtered_complex(fc);
        for (int s = 1; s <= 3; ++s)
            for (int t = 0; t < 3; ++t) {
                GradedMap del = sys.del(s - 2, s - 1, s);
                CHECK(del.at(t) == as_coord(snake(fc, s - 2, s - 1, s, t)));
            }
    }
}

TEST_CASE("page turning and the limit page on random filtered complexes")
{
    RandomParams par;
    par.p = 2;
    par.max_dim = 4;
    par.degrees = 4;
    par.window = 4;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        FilteredComplex fc = random_filtered_complex(seed, par);
        CESystem sys = from_filtered_complex(fc);
        for (int r = 1; r <= 4; ++r) {
            PageTurn cert = turn_page_verify(sys, r, -1, 6);
            for (auto& f : cert.failures)
                MESSAGE("seed=" << seed << " r=" << r << ": " << f);
            CHECK(cert.ok);
        }
        // d^r d^r = 0
        for (int r = 1; r <= 3; ++r)
            for (int s = 1; s <= 4; ++s)
                CHECK(graded_map_is_zero(graded_compose(page_differential(sys, r, s - r),
                                                        page_differential(sys, r, s))));
        // dim sum over the limit page recovers the homology of the complex
        LimitPage lp = limit_page(sys, 0, par.window + 1);
        std::map<int, int> got;
        for (auto& [s, le] : lp.at_s) {
            CHECK(le.stabilized);
            CHECK(graded_is_zero(le.REinf));
            for (int t : graded_degrees(le.Einf))
                got[t] += *coord_dim(le.Einf.at(t));
        }
        std::map<int, int> want = homology_dims(fc);
        CHECK(got == want);
    }
}
