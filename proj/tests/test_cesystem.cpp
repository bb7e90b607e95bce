#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sseq/cesystem.hpp"

using namespace sseq;

namespace {

const int P = 3;

// Split model: block s (1 <= s <= 4) is one copy of F_p at index s, internal
// degree s mod 2; H(i,j) collects the blocks in (i, j] and all eta are the
// coordinate inclusions/projections, with zero boundary.
GradedObject hobj(int i, int j)
{
    std::vector<int> ev, od;
    for (int s = std::max(i + 1, 1); s <= std::min(j, 4); ++s)
        (s % 2 == 0 ? ev : od).push_back(s);
    std::map<int, CoordObject> comp;
    if (!ev.empty())
        comp.emplace(0, make_coord(P, Kind::SUM, IndexSet::finite(ev)));
    if (!od.empty())
        comp.emplace(1, make_coord(P, Kind::SUM, IndexSet::finite(od)));
    return graded_object(P, comp);
}

GradedMap clip0(const GradedObject& s, const GradedObject& t)
{
    std::map<int, CoordMap> comp;
    for (int d : graded_degrees(s))
        comp.emplace(d, coord_diagonal(s.at(d), t.at(d), 0, 1));
    return graded_map(s, t, 0, comp);
}

CESystem split_system()
{
    CESystem s;
    s.p = P;
    s.a = 0;
    s.b = 4;
    s.tail = TailMode::CLAMP;
    for (int i = 0; i <= 4; ++i)
        for (int j = i + 1; j <= 4; ++j) {
            GradedObject v = hobj(i, j);
            if (graded_is_zero(v))
                continue;
            s.obj[{i, j}] = v;
            if (j < 4)
                s.stepj[{i, j}] = clip0(v, hobj(i, j + 1));
            if (!graded_is_zero(hobj(i + 1, j)))
                s.stepi[{i, j}] = clip0(v, hobj(i + 1, j));
        }
    for (int j = 1; j <= 4; ++j)
        if (!graded_is_zero(hobj(j, 4)) && !graded_is_zero(hobj(0, j)))
            s.delgen[j] = graded_zero_map(hobj(j, 4), hobj(0, j), -1);
    return s;
}

// Symbolic variant: one block per integer s >= 1, all in degree 0, so
// H(i,j) = SUM over (max(i,0), j] and the colimit over j is an infinite sum.
CESystem symbolic_system()
{
    CESystem s;
    s.p = P;
    s.a = 0;
    s.b = 2;
    s.tail = TailMode::SYMBOLIC;
    auto ob = [](int i, int j) {
        IndexSet blocks = IndexSet::range(std::max(i, 0) + 1, j + 1);
        return graded_single(0, make_coord(P, Kind::SUM, blocks));
    };
    s.ext_obj = ob;
    s.ext_eta = [ob](int i, int j, int i2, int j2) { return clip0(ob(i, j), ob(i2, j2)); };
    s.ext_del = [ob](int i, int j, int k) { return graded_zero_map(ob(j, k), ob(i, j), -1); };
    for (int i = 0; i <= 2; ++i)
        for (int j = i + 1; j <= 2; ++j) {
            s.obj[{i, j}] = ob(i, j);
            if (j < 2)
                s.stepj[{i, j}] = clip0(ob(i, j), ob(i, j + 1));
            if (i + 1 < j)
                s.stepi[{i, j}] = clip0(ob(i, j), ob(i + 1, j));
            s.delgen[j] = graded_zero_map(ob(j, 2), ob(0, j), -1);
        }
    return s;
}

}  // namespace

TEST_CASE("zero system validates")
{
    CESystem z;
    z.p = P;
    z.a = 0;
    z.b = 3;
    ValidationReport rep = validate(z);
    CHECK(rep.ok);
    CHECK(rep.checks > 0);
    CHECK(graded_is_zero(z.H(0, 3)));
    CHECK(graded_map_is_zero(z.eta(0, 1, 1, 3)));
}

TEST_CASE("split filtration system validates")
{
    CESystem s = split_system();
    ValidationReport rep = validate(s);
    for (auto& f : rep.failures)
        MESSAGE(f);
    CHECK(rep.ok);
}

TEST_CASE("eta composites are the clipped diagonals")
{
    CESystem s = split_system();
    CHECK(s.eta(0, 2, 1, 4) == clip0(hobj(0, 2), hobj(1, 4)));
    CHECK(graded_map_is_zero(s.eta(0, 1, 2, 4)));
    GradedMap d = s.del(0, 2, 4);
    CHECK(d.deg == -1);
    CHECK(d.src == hobj(2, 4));
    CHECK(d.tgt == hobj(0, 2));
    CHECK(graded_map_is_zero(d));
}

TEST_CASE("tail policies on out-of-window queries")
{
    CESystem s = split_system();
    CHECK(s.H(0, 9) == s.H(0, 4));
    CHECK(s.H(-3, 2) == s.H(0, 2));
    s.tail = TailMode::NONE;
    CHECK_THROWS_AS(s.H(0, 9), std::out_of_range);
}

TEST_CASE("corrupted eta generator is reported with its triangle")
{
    CESystem s = split_system();
    s.stepj[{0, 1}] = graded_zero_map(hobj(0, 1), hobj(0, 2), 0);
    ValidationReport rep = validate(s);
    CHECK_FALSE(rep.ok);
    bool named = false;
    for (auto& f : rep.failures)
        named = named || f.find("triangle (0,1,2)") != std::string::npos;
    CHECK(named);
}

TEST_CASE("corrupted boundary generator is reported")
{
    CESystem s = split_system();
    std::map<int, CoordMap> comp;
    comp.emplace(1, coord_diagonal(hobj(2, 4).at(1), hobj(0, 2).at(0), -1, 1));
    s.delgen[2] = graded_map(hobj(2, 4), hobj(0, 2), -1, comp);
    ValidationReport rep = validate(s);
    CHECK_FALSE(rep.ok);
    bool named = false;
    for (auto& f : rep.failures)
        named = named || f.find("exactness") != std::string::npos;
    CHECK(named);
}

TEST_CASE("prolong_right of a clamped system is attained at the window edge")
{
    CESystem s = split_system();
    CESystem pr = prolong_right(s);
    CHECK(pr.has_pos);
    for (int i = 0; i <= 4; ++i)
        CHECK(pr.H(i, kPosInf) == s.H(i, 4));
    CHECK(pr.eta(0, 4, 0, kPosInf) == graded_identity(s.H(0, 4)));
    ValidationReport rep = validate(pr);
    for (auto& f : rep.failures)
        MESSAGE(f);
    CHECK(rep.ok);
}

TEST_CASE("restrict_underlying round trip")
{
    CESystem s = split_system();
    CESystem pr = prolong_right(s);
    CESystem ru = restrict_underlying(pr);
    CHECK_FALSE(ru.has_pos);
    CHECK(ru.obj == s.obj);
    CHECK(ru.stepj == s.stepj);
    CHECK(ru.stepi == s.stepi);
    CHECK(validate(ru).ok);
    CESystem pr2 = prolong_right(ru);
    CHECK(pr2.obj == pr.obj);
    CHECK(pr2.delgen == pr.delgen);
    CESystem ru2 = restrict_underlying(ru);
    CHECK(ru2.obj == ru.obj);
    CHECK(ru2.delgen == ru.delgen);
}

TEST_CASE("prolong_right computes genuine symbolic colimits")
{
    CESystem s = symbolic_system();
    CESystem pr = prolong_right(s);
    for (int i = 0; i <= 2; ++i)
        CHECK(pr.H(i, kPosInf) ==
              graded_single(0, make_coord(P, Kind::SUM, IndexSet::ray(i + 1))));
    GradedObject h0 = pr.H(0, kPosInf), h1 = pr.H(1, kPosInf);
    CHECK(pr.eta(0, kPosInf, 1, kPosInf) == clip0(h0, h1));
    CHECK(pr.eta(0, 2, 0, kPosInf) == clip0(s.H(0, 2), h0));
    ValidationReport rep = validate(pr);
    for (auto& f : rep.failures)
        MESSAGE(f);
    CHECK(rep.ok);
}
