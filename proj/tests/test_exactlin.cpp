#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sseq/exactlin.hpp"

#include <random>

using namespace sseq;

namespace {

Mat mat(int p, int rows, int cols, std::initializer_list<int> entries)
{
    Mat m(p, rows, cols);
    int k = 0;
    for (int e : entries)
        m.a[k++] = normalize_mod(e, p);
    return m;
}

Mat random_mat(int p, int rows, int cols, std::mt19937_64& rng)
{
    Mat m(p, rows, cols);
    std::uniform_int_distribution<int> dist(0, p - 1);
    for (auto& e : m.a)
        e = dist(rng);
    return m;
}

}  // namespace

TEST_CASE("kic on the zero map")
{
    FinSpace k2(3, 2), k2b(3, 2);
    Kic r = kic(LinMap::zero(k2, k2b));
    CHECK(r.kernel.dim() == 2);
    CHECK(r.image.dim() == 0);
    CHECK(r.coker.dim() == 2);
}

TEST_CASE("kic on the identity")
{
    FinSpace k3(5, 3);
    Kic r = kic(LinMap::identity(k3));
    CHECK(r.kernel.dim() == 0);
    CHECK(r.image.dim() == 3);
    CHECK(r.coker.dim() == 0);
}

TEST_CASE("kic of [1 1] over F_2")
{
    FinSpace k2(2, 2), k1(2, 1);
    LinMap f(k2, k1, mat(2, 1, 2, {1, 1}));
    Kic r = kic(f);
    CHECK(r.kernel.dim() == 1);
    Mat v = mat(2, 2, 1, {1, 1});
    CHECK(contains(r.kernel, v));
    CHECK(r.image.dim() == 1);
    CHECK(r.coker.dim() == 0);
}

TEST_CASE("rank-nullity and cokernel exactness on random maps")
{
    std::mt19937_64 rng(7);
    for (int p : {2, 3, 5}) {
        for (int trial = 0; trial < 40; ++trial) {
            int n = 1 + int(rng() % 5), m = 1 + int(rng() % 5);
            FinSpace src(p, n), tgt(p, m);
            LinMap f(src, tgt, random_mat(p, m, n, rng));
            Kic r = kic(f);
            CHECK(r.kernel.dim() + r.image.dim() == n);
            CHECK(r.coker.dim() == m - r.image.dim());
            // proj surjective with kernel = image
            CHECK(rank(r.proj.m) == r.coker.dim());
            CHECK((r.proj.m * r.image.basis).is_zero());
            CHECK((f.m * r.kernel.basis).is_zero());
        }
    }
}

TEST_CASE("canonical subspaces compare bit-equal")
{
    std::mt19937_64 rng(11);
    FinSpace amb(3, 4);
    for (int trial = 0; trial < 50; ++trial) {
        Mat v = random_mat(3, 4, 2, rng);
        Subspace u = span(amb, v);
        // re-span from shuffled/scaled generators of the same span
        Mat w = v.hconcat(v.col(0) + v.col(1));
        Subspace u2 = span(amb, w.hconcat(v));
        if (u.dim() == u2.dim())
            CHECK(u == u2);
        CHECK(subspace_leq(u, u2));
    }
}

TEST_CASE("subquotient_present")
{
    SUBCASE("full over zero")
    {
        FinSpace amb(3, 3);
        Subquotient q{amb, full_subspace(amb), zero_subspace(amb)};
        SubqPres pr = subquotient_present(q);
        CHECK(pr.space.dim() == 3);
        CHECK(compose(pr.project, pr.lift).m == Mat::identity(3, 3));
    }
    SUBCASE("z equals b")
    {
        FinSpace amb(3, 3);
        Mat v = mat(3, 3, 1, {1, 2, 0});
        Subquotient q{amb, span(amb, v), span(amb, v)};
        CHECK(subquotient_present(q).space.dim() == 0);
    }
    SUBCASE("spec example p=3")
    {
        FinSpace amb(3, 3);
        Mat z = mat(3, 3, 2, {1, 0, 0, 1, 0, 0});
        Mat b = mat(3, 3, 1, {1, 1, 0});
        Subquotient q{amb, span(amb, z), span(amb, b)};
        SubqPres pr = subquotient_present(q);
        CHECK(pr.space.dim() == 1);
        CHECK(compose(pr.project, pr.lift).m == Mat::identity(3, 1));
        // project kills b
        CHECK((pr.project.m * b).is_zero());
    }
    SUBCASE("rejects b not inside z")
    {
        FinSpace amb(2, 2);
        Mat z = mat(2, 2, 1, {1, 0});
        Mat b = mat(2, 2, 1, {0, 1});
        Subquotient q{amb, span(amb, z), span(amb, b)};
        CHECK_THROWS(subquotient_present(q));
    }
}

TEST_CASE("acb_iso")
{
    SUBCASE("identity span")
    {
        FinSpace c(2, 2);
        AcbIso r = acb_iso(LinMap::identity(c), LinMap::identity(c));
        CHECK(r.left_pres.space.dim() == 2);
        CHECK(rank(r.iso.m) == 2);
    }
    SUBCASE("zero f")
    {
        FinSpace c(3, 2), a(3, 2), b(3, 2);
        AcbIso r = acb_iso(LinMap::zero(c, a), LinMap::identity(c));
        CHECK(r.left_pres.space.dim() == 0);
        CHECK(r.right_pres.space.dim() == 0);
    }
    SUBCASE("spec hand example p=2")
    {
        FinSpace c(2, 2), a(2, 1), b(2, 1);
        LinMap f(c, a, mat(2, 1, 2, {1, 0}));
        LinMap g(c, b, mat(2, 1, 2, {0, 1}));
        AcbIso r = acb_iso(f, g);
        CHECK(r.left_pres.space.dim() == 0);

        LinMap g2(c, b, mat(2, 1, 2, {1, 1}));
        AcbIso r2 = acb_iso(f, g2);
        CHECK(r2.left_pres.space.dim() == 0);
        CHECK(r2.right_pres.space.dim() == 0);
    }
    SUBCASE("inverse composition is the identity on random spans")
    {
        std::mt19937_64 rng(23);
        for (int trial = 0; trial < 30; ++trial) {
            int p = trial % 2 ? 3 : 2;
            FinSpace c(p, 3), a(p, 2), b(p, 2);
            LinMap f(c, a, random_mat(p, 2, 3, rng));
            LinMap g(c, b, random_mat(p, 2, 3, rng));
            AcbIso fw = acb_iso(f, g);
            AcbIso bw = acb_iso(g, f);
            CHECK(fw.left_pres.space.dim() == fw.right_pres.space.dim());
            // the two presentations of each side are the same subquotient
            CHECK(bw.left.z == fw.right.z);
            CHECK(bw.left.b == fw.right.b);
        }
    }
}

TEST_CASE("preimage and intersect")
{
    FinSpace c(5, 3), t(5, 2);
    LinMap f(c, t, mat(5, 2, 3, {1, 0, 2, 0, 1, 1}));
    Subspace u = span(t, mat(5, 2, 1, {1, 0}));
    Subspace pre = preimage(f, u);
    // check: f(pre) <= u and dim correct (kernel dim + solvable dims)
    CHECK(subspace_leq(image_of(f, pre), u));
    Subspace whole = preimage(f, full_subspace(t));
    CHECK(whole.dim() == 3);
    Subspace i = subspace_intersect(pre, kernel(f));
    CHECK(i == kernel(f));
}
