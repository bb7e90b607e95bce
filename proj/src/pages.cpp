#include "sseq/pages.hpp"

#include <stdexcept>

namespace sseq {

namespace {

std::string st_str(int s, int t)
{
    return "(s=" + std::to_string(s) + ",t=" + std::to_string(t) + ")";
}

}  // namespace

PageEntry page_objects(const CESystem& sys, int r, int s)
{
    if (r < 1)
        throw std::invalid_argument("page_objects: r must be >= 1");
    PageEntry e;
    e.r = r;
    e.s = s;
    e.E1 = sys.H(s - 1, s);
    GradedMap delZ = sys.del(s - r, s - 1, s);
    GradedMap etaZ = sys.eta(s - r, s, s - 1, s);
    GradedMap delB = sys.del(s - 1, s, s + r - 1);
    GradedMap etaB = sys.eta(s - 1, s, s - 1, s + r - 1);
    std::map<int, CoordObject> ecomp;
    for (int t : graded_degrees(e.E1)) {
        Subobject z = sub_kernel(delZ.at(t));
        if (!sub_eq(z, sub_image(etaZ.at(t))))
            throw HypothesesUnmet("cycle formulas disagree at " + st_str(s, t) +
                                  ", r=" + std::to_string(r));
        Subobject bb = sub_image(delB.at(t + 1));
        if (!sub_eq(bb, sub_kernel(etaB.at(t))))
            throw HypothesesUnmet("boundary formulas disagree at " + st_str(s, t) +
                                  ", r=" + std::to_string(r));
        if (!sub_leq(bb, z))
            throw HypothesesUnmet("boundaries not inside cycles at " + st_str(s, t));
        SubqData q = sub_quotient(z, bb);
        if (!coord_is_zero(q.obj))
            ecomp.emplace(t, q.obj);
        e.Z.emplace(t, std::move(z));
        e.B.emplace(t, std::move(bb));
        e.pres.emplace(t, std::move(q));
    }
    e.E = graded_object(sys.p, ecomp);
    return e;
}

GradedMap page_differential(const CESystem& sys, const PageEntry& at_s,
                            const PageEntry& at_sr)
{
    if (at_sr.r != at_s.r || at_sr.s != at_s.s - at_s.r)
        throw std::invalid_argument("page_differential: entries do not line up");
    int r = at_s.r, s = at_s.s;
    GradedMap etaM = sys.eta(s - r, s, s - 1, s);
    GradedMap delM = sys.del(s - r - 1, s - r, s);
    std::map<int, CoordMap> comp;
    for (int t : graded_degrees(at_s.E)) {
        auto qd = at_sr.pres.find(t - 1);
        if (qd == at_sr.pres.end() || coord_is_zero(qd->second.obj))
            continue;
        CoordMap psi = coord_compose(qd->second.project, delM.at(t));
        // independence of the representative: psi must kill the eta-preimage
        // of the boundaries (which contains ker eta)
        Subobject pre = sub_preimage(etaM.at(t), at_s.B.at(t));
        if (!coord_is_zero(sub_image_of(psi, pre).obj))
            throw HypothesesUnmet("page differential not well-defined at " + st_str(s, t));
        CoordMap chi = lift_through(etaM.at(t), at_s.pres.at(t).lift);
        CoordMap m = coord_compose(psi, chi);
        if (!map_is_zero(m))
            comp.emplace(t, m);
    }
    return graded_map(at_s.E, at_sr.E, -1, comp);
}

GradedMap page_differential(const CESystem& sys, int r, int s)
{
    return page_differential(sys, page_objects(sys, r, s), page_objects(sys, r, s - r));
}

PageTurn turn_page_verify(const CESystem& sys, int r, int smin, int smax)
{
    PageTurn out;
    auto fail = [&](const std::string& msg) {
        out.ok = false;
        out.failures.push_back(msg);
    };
    std::map<int, PageEntry> pe;
    auto page = [&](int s) -> const PageEntry& {
        auto it = pe.find(s);
        if (it == pe.end())
            it = pe.emplace(s, page_objects(sys, r, s)).first;
        return it->second;
    };
    for (int s = smin; s <= smax; ++s) {
        try {
            const PageEntry& ps = page(s);
            PageEntry pn = page_objects(sys, r + 1, s);
            GradedMap dout = page_differential(sys, ps, page(s - r));
            GradedMap din = page_differential(sys, page(s + r), ps);
            for (int t : graded_degrees(ps.E1)) {
                ++out.checks;
                const SubqData& q = ps.pres.at(t);
                Subobject kerd = sub_kernel(dout.at(t));
                if (!sub_eq(kerd, sub_image_of(q.project, pn.Z.at(t)))) {
                    fail("ker d^r != Z^{r+1}/B^r at " + st_str(s, t));
                    continue;
                }
                Subobject imd = sub_image(din.at(t + 1));
                if (!sub_eq(imd, sub_image_of(q.project, pn.B.at(t)))) {
                    fail("im d^r != B^{r+1}/B^r at " + st_str(s, t));
                    continue;
                }
                SubqData hq = sub_quotient(kerd, imd);
                CoordMap iso = coord_compose(
                    hq.project, coord_compose(q.project, pn.pres.at(t).lift));
                CoordKic kc = coord_kic(iso);
                if (!coord_is_zero(kc.kernel.obj) || !coord_is_zero(kc.coker))
                    fail("page-turn map is not an isomorphism at " + st_str(s, t));
            }
        } catch (const std::exception& e) {
            fail("page turn at s=" + std::to_string(s) + ": exception: " + e.what());
        }
    }
    return out;
}

LimitPage limit_page(const CESystem& sys, int smin, int smax, int probe)
{
    // the corner cells of a window of width w can keep moving until page
    // w + 2, and the stability certificate wants three constant steps after
    int n = probe > 0 ? probe : std::max(10, sys.b - sys.a + 8);
    LimitPage out;
    for (int s = smin; s <= smax; ++s) {
        LimitEntry le;
        GradedObject E1 = sys.H(s - 1, s);
        if (graded_is_zero(E1)) {
            le.Zinf = le.Binf = le.Einf = le.REinf = graded_zero(sys.p);
            le.stabilized = true;
            le.stable_r = 1;
            out.at_s.emplace(s, std::move(le));
            continue;
        }
        std::vector<PageEntry> pg;
        for (int r = 1; r <= n; ++r)
            pg.push_back(page_objects(sys, r, s));

        // certificate: both towers constant from stable_r on
        std::vector<bool> eq(n, false);
        for (int k = 0; k + 1 < n; ++k) {
            bool same = true;
            for (int t : graded_degrees(E1))
                same = same && sub_eq(pg[k].Z.at(t), pg[k + 1].Z.at(t)) &&
                       sub_eq(pg[k].B.at(t), pg[k + 1].B.at(t));
            eq[k] = same;
        }
        int r0 = n;
        for (int k = n - 2; k >= 0 && eq[k]; --k)
            r0 = k + 1;
        le.stabilized = r0 + 3 <= n;
        le.stable_r = le.stabilized ? r0 : 0;

        std::map<int, CoordObject> zc, bc, ec, rc;
        for (int t : graded_degrees(E1)) {
            CoordObject e1t = E1.at(t);
            Subobject zs, bs;
            if (le.stabilized) {
                zs = pg[r0 - 1].Z.at(t);
                bs = pg[r0 - 1].B.at(t);
            } else {
                Tower zt = make_tower(
                    sys.p, Dir::DESC, 1, n,
                    [&](int k) { return pg[k].Z.at(t).obj; },
                    [&](int k) {
                        return lift_through_mono(pg[k].Z.at(t).incl,
                                                 pg[k + 1].Z.at(t).incl);
                    });
                TowerLimit zl = tower_lim(zt);
                Tower ce = constant_tower(Dir::DESC, 1, n, e1t);
                TowerLimit cl = tower_lim(ce);
                CoordMap zincl = induced_lim(zt, zl, ce, cl,
                                             [&](int k) { return pg[k].Z.at(t).incl; });
                zs = Subobject{zl.value, zincl};
                TowerLimit rl = tower_rlim(zt);
                if (!coord_is_zero(rl.value))
                    rc.emplace(t, rl.value);

                Tower bt = make_tower(
                    sys.p, Dir::ASC, 1, n,
                    [&](int k) { return pg[k].B.at(t).obj; },
                    [&](int k) {
                        return lift_through_mono(pg[k + 1].B.at(t).incl,
                                                 pg[k].B.at(t).incl);
                    });
                TowerLimit bl = tower_colim(bt);
                Tower ca = constant_tower(Dir::ASC, 1, n, e1t);
                TowerLimit ccl = tower_colim(ca);
                CoordMap bincl = induced_colim(bt, bl, ca, ccl,
                                               [&](int k) { return pg[k].B.at(t).incl; });
                bs = Subobject{bl.value, bincl};
            }
            if (!sub_leq(bs, zs))
                throw HypothesesUnmet("limit boundaries not inside limit cycles at " +
                                      st_str(s, t));
            CoordObject einf = sub_quotient(zs, bs).obj;
            if (!coord_is_zero(zs.obj))
                zc.emplace(t, zs.obj);
            if (!coord_is_zero(bs.obj))
                bc.emplace(t, bs.obj);
            if (!coord_is_zero(einf))
                ec.emplace(t, einf);
            le.Zsub.emplace(t, std::move(zs));
            le.Bsub.emplace(t, std::move(bs));
        }
        le.Zinf = graded_object(sys.p, zc);
        le.Binf = graded_object(sys.p, bc);
        le.Einf = graded_object(sys.p, ec);
        le.REinf = graded_object(sys.p, rc);
        out.at_s.emplace(s, std::move(le));
    }
    return out;
}

}  // namespace sseq
