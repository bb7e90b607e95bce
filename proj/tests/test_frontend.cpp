#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "sseq/convergence.hpp"
#include "sseq/frontend.hpp"

using namespace sseq;

TEST_CASE("example81 validates and matches the product-tower pattern")
{
    CESystem sys = example_8_1(2);
    ValidationReport vr = validate(sys);
    for (auto& f : vr.failures)
        MESSAGE(f);
    CHECK(vr.ok);

    // E^1_s = k at t=0 for s <= 0, k at t=1 for s >= 1
    for (int s = sys.a + 1; s <= sys.b; ++s) {
        GradedObject e1 = sys.H(s - 1, s);
        int t = s <= 0 ? 0 : 1;
        CHECK(graded_degrees(e1) == std::vector<int>{t});
        CHECK(coord_dim(e1.at(t)) == 1);
    }

    // column and row endpoints of the coordinate rule
    CHECK(sys.H(kNegInf, 3).at(0) ==
          make_coord(2, Kind::PROD, IndexSet::ray(3)));
    CHECK(sys.H(-4, kPosInf).at(1) ==
          make_coord(2, Kind::SUM, IndexSet::ray(4)));
    CHECK(sys.H(kNegInf, kPosInf).at(0) ==
          make_coord(2, Kind::PMS, IndexSet::ray(0)));
    CHECK(graded_is_zero(sys.H(-3, 3)));
    CHECK(to_string(sys.H(-2, 5).at(1)) == "sum({2, 3, 4})");
}

TEST_CASE("example81 differentials d^{2r-1} are isomorphisms")
{
    CESystem sys = example_8_1(2);
    for (int r = 1; r <= 6; ++r) {
        int s = r, sr = 1 - r, rr = 2 * r - 1;
        if (sr - rr < sys.a - 1)
            break;
        GradedMap d = page_differential(sys, rr, s);
        CHECK(!graded_map_is_zero(d));
        auto kic = coord_kic(d.at(1));
        CHECK(coord_is_zero(kic.kernel.obj));
        CHECK(coord_is_zero(kic.coker));
    }
}

TEST_CASE("ces round-trip is byte-identical")
{
    for (std::uint64_t seed : {0, 1, 7}) {
        RandomParams rp;
        rp.window = 4;
        CESystem sys = random_system(seed, rp);
        std::string text = write_ces(sys);
        CESystem back = read_ces(text);
        CHECK(write_ces(back) == text);
        CHECK(back.obj == sys.obj);
        CHECK(back.stepj == sys.stepj);
        CHECK(back.stepi == sys.stepi);
        CHECK(back.delgen == sys.delgen);
    }
    CESystem e81 = example_8_1(2);
    std::string text = write_ces(e81);
    CESystem back = read_ces(text);
    CHECK(write_ces(back) == text);
    CHECK(back.tail == TailMode::SYMBOLIC);
    CHECK(back.builtin == "example81");
    // the restored symbolic tail answers out-of-window queries
    CHECK(back.H(-9, 9).at(1) == e81.H(-9, 9).at(1));
    CHECK(validate(back).ok);
}

TEST_CASE("digest is deterministic and separates instances")
{
    RandomParams rp;
    std::set<std::string> seen;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        CESystem sys = random_system(seed, rp);
        CHECK(system_digest(sys) == system_digest(random_system(seed, rp)));
        seen.insert(system_digest(sys));
    }
    CHECK(seen.size() == 20);
}

TEST_CASE("read_ces rejects malformed containers")
{
    CHECK_THROWS(read_ces("p 2\n"));
    CHECK_THROWS(read_ces("[system]\np 2\nwindow 3 1\n"));
    CHECK_THROWS(read_ces("[system]\np 2\nwindow 0 2\nbogus line\n"));
    CHECK_THROWS(read_ces("[system]\np 2\nwindow 0 2\n[eta 0 1 -> 0 3]\n"));
    CHECK_THROWS(read_ces("[system]\np 2\nwindow 0 2\nbuiltin nosuch\n"));
}

TEST_CASE("csv and svg emission are pure functions of the system")
{
    CESystem sys = random_system(3, {});
    std::string c1 = pages_csv(sys, 3), c2 = pages_csv(sys, 3);
    CHECK(c1 == c2);
    CHECK(c1.substr(0, c1.find('\n')) == "r,s,t,descriptor,dim");
    std::string s1 = pages_svg(sys, 2), s2 = pages_svg(sys, 2);
    CHECK(s1 == s2);
    CHECK(s1.find("<svg") == 0);
    CHECK(s1.find("</svg>") != std::string::npos);
}

TEST_CASE("diagnose is deterministic and flags validity")
{
    CESystem sys = random_system(5, {});
    ReportOptions opt;
    opt.rmax = 3;
    opt.theorems = false;
    DiagnoseResult a = diagnose(sys, opt), b = diagnose(sys, opt);
    CHECK(a.text == b.text);
    CHECK(a.valid);
    CHECK(a.text.find("\"digest\"") != std::string::npos);

    // corrupt one boundary generator; diagnose must report invalid
    CESystem bad = sys;
    for (auto& [j, f] : bad.delgen) {
        bool done = false;
        for (auto& [t, cm] : f.comp) {
            if (map_is_zero(cm) || coord_is_zero(cm.tgt))
                continue;
            int w = cm.tgt.s.elems.empty() ? 0 : cm.tgt.s.elems.front();
            std::map<int, SparseVec> ex = cm.except;
            int v = cm.src.s.elems.empty() ? 0 : cm.src.s.elems.front();
            ex[v][w] = ex[v].count(w) ? 0 : 1;
            cm = coord_map(cm.src, cm.tgt, cm.diag, ex);
            done = true;
            break;
        }
        if (done)
            break;
    }
    DiagnoseResult d = diagnose(bad, opt);
    if (!d.valid)
        CHECK(d.text.find("\"ok\": false") != std::string::npos);
}
