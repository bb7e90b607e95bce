#include "sseq/couples.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace sseq {

namespace {

std::string st_str(int s, int t)
{
    return "(s=" + std::to_string(s) + ",t=" + std::to_string(t) + ")";
}

// Inverse of an isomorphism presented as a CoordMap.
CoordMap coord_inverse(const CoordMap& f)
{
    return lift_through(f, coord_identity(f.tgt));
}

}  // namespace

GradedObject ExactCouple::Aat(int s) const
{
    if (s >= smin - 1 && s <= smax) {
        auto it = A.find(s);
        return it == A.end() ? graded_zero(p) : it->second;
    }
    if (ext_A)
        return ext_A(s);
    switch (tail) {
        case TailMode::CLAMP:
            return Aat(std::clamp(s, smin - 1, smax));
        case TailMode::SYMBOLIC:
            throw std::logic_error("couple: missing ext_A");
        case TailMode::NONE:
            throw std::out_of_range("couple: A index outside window");
    }
    return graded_zero(p);
}

GradedObject ExactCouple::Eat(int s) const
{
    if (s >= smin && s <= smax) {
        auto it = E.find(s);
        return it == E.end() ? graded_zero(p) : it->second;
    }
    if (ext_E)
        return ext_E(s);
    switch (tail) {
        case TailMode::CLAMP:
            return graded_zero(p);
        case TailMode::SYMBOLIC:
            throw std::logic_error("couple: missing ext_E");
        case TailMode::NONE:
            throw std::out_of_range("couple: E index outside window");
    }
    return graded_zero(p);
}

GradedMap ExactCouple::al(int s) const
{
    if (s >= smin && s <= smax) {
        auto it = alpha.find(s);
        return it == alpha.end() ? graded_zero_map(Aat(s - 1), Aat(s), 0) : it->second;
    }
    if (ext_alpha)
        return ext_alpha(s);
    switch (tail) {
        case TailMode::CLAMP:
            return graded_identity(Aat(s));
        case TailMode::SYMBOLIC:
            throw std::logic_error("couple: missing ext_alpha");
        case TailMode::NONE:
            throw std::out_of_range("couple: alpha index outside window");
    }
    return graded_zero_map(Aat(s - 1), Aat(s), 0);
}

GradedMap ExactCouple::be(int s) const
{
    if (s >= smin && s <= smax) {
        auto it = beta.find(s);
        return it == beta.end() ? graded_zero_map(Aat(s), Eat(s), beta_deg()) : it->second;
    }
    if (ext_beta)
        return ext_beta(s);
    switch (tail) {
        case TailMode::CLAMP:
            return graded_zero_map(Aat(s), Eat(s), beta_deg());
        case TailMode::SYMBOLIC:
            throw std::logic_error("couple: missing ext_beta");
        case TailMode::NONE:
            throw std::out_of_range("couple: beta index outside window");
    }
    return graded_zero_map(Aat(s), Eat(s), beta_deg());
}

GradedMap ExactCouple::ga(int s) const
{
    if (s >= smin && s <= smax) {
        auto it = gamma.find(s);
        return it == gamma.end() ? graded_zero_map(Eat(s), Aat(s - 1), gamma_deg())
                                 : it->second;
    }
    if (ext_gamma)
        return ext_gamma(s);
    switch (tail) {
        case TailMode::CLAMP:
            return graded_zero_map(Eat(s), Aat(s - 1), gamma_deg());
        case TailMode::SYMBOLIC:
            throw std::logic_error("couple: missing ext_gamma");
        case TailMode::NONE:
            throw std::out_of_range("couple: gamma index outside window");
    }
    return graded_zero_map(Eat(s), Aat(s - 1), gamma_deg());
}

GradedMap alpha_pow(const ExactCouple& c, int s, int r)
{
    if (r < 0)
        throw std::invalid_argument("alpha_pow: r must be >= 0");
    GradedMap res = graded_identity(c.Aat(s - r));
    for (int k = s - r + 1; k <= s; ++k)
        res = graded_compose(c.al(k), res);
    return res;
}

ValidationReport validate_couple(const ExactCouple& c)
{
    ValidationReport rep;
    auto fail = [&](const std::string& msg) {
        rep.ok = false;
        rep.failures.push_back(msg);
    };
    auto exact_at = [&](const GradedObject& mid, const GradedMap& f, const GradedMap& g,
                        const std::string& where) {
        for (int u : graded_degrees(mid)) {
            ++rep.checks;
            if (!sub_eq(sub_image(f.at(u - f.deg)), sub_kernel(g.at(u))))
                fail("not exact at " + where + ", t=" + std::to_string(u));
        }
    };
    for (int s = c.smin; s <= c.smax; ++s) {
        try {
            exact_at(c.Aat(s), c.al(s), c.be(s), "A_" + std::to_string(s));
            exact_at(c.Eat(s), c.be(s), c.ga(s), "E_" + std::to_string(s));
            exact_at(c.Aat(s - 1), c.ga(s), c.al(s), "A_" + std::to_string(s - 1));
        } catch (const std::exception& e) {
            fail("triangle s=" + std::to_string(s) + ": exception: " + e.what());
        }
    }
    return rep;
}

PageEntry couple_pages(const ExactCouple& c, int r, int s)
{
    if (r < 1)
        throw std::invalid_argument("couple_pages: r must be >= 1");
    PageEntry e;
    e.r = r;
    e.s = s;
    e.E1 = c.Eat(s);
    int dg = c.gamma_deg(), db = c.beta_deg();
    GradedMap g = c.ga(s);
    GradedMap b = c.be(s);
    GradedMap apZ = alpha_pow(c, s - 1, r - 1);      // A_{s-r} -> A_{s-1}
    GradedMap apB = alpha_pow(c, s + r - 1, r - 1);  // A_s -> A_{s+r-1}
    std::map<int, CoordObject> ecomp;
    for (int t : graded_degrees(e.E1)) {
        Subobject z = sub_preimage(g.at(t), sub_image(apZ.at(t + dg)));
        Subobject bb = sub_image_of(b.at(t - db), sub_kernel(apB.at(t - db)));
        if (!sub_leq(bb, z))
            throw HypothesesUnmet("couple boundaries not inside cycles at " + st_str(s, t));
        SubqData q = sub_quotient(z, bb);
        if (!coord_is_zero(q.obj))
            ecomp.emplace(t, q.obj);
        e.Z.emplace(t, std::move(z));
        e.B.emplace(t, std::move(bb));
        e.pres.emplace(t, std::move(q));
    }
    e.E = graded_object(c.p, ecomp);
    return e;
}

GradedMap couple_differential(const ExactCouple& c, const PageEntry& at_s,
                              const PageEntry& at_sr)
{
    if (at_sr.r != at_s.r || at_sr.s != at_s.s - at_s.r)
        throw std::invalid_argument("couple_differential: entries do not line up");
    int r = at_s.r, s = at_s.s;
    int dg = c.gamma_deg();
    GradedMap g = c.ga(s);
    GradedMap ap = alpha_pow(c, s - 1, r - 1);
    GradedMap bsr = c.be(s - r);
    std::map<int, CoordMap> comp;
    for (int t : graded_degrees(at_s.E)) {
        const CoordMap& zincl = at_s.Z.at(t).incl;
        CoordMap gz = coord_compose(g.at(t), zincl);
        CoordMap y = lift_through(ap.at(t + dg), gz);
        CoordMap m = coord_compose(bsr.at(t + dg), y);  // Z^r_s -> E^1_{s-r}[t-1]
        auto qd = at_sr.pres.find(t - 1);
        if (qd == at_sr.pres.end() || coord_is_zero(qd->second.obj))
            continue;
        if (!sub_leq(sub_image(m), at_sr.Z.at(t - 1)))
            throw HypothesesUnmet("couple differential leaves the cycles at " + st_str(s, t));
        CoordMap md = coord_compose(qd->second.project, m);
        CoordMap binz = lift_through_mono(zincl, at_s.B.at(t).incl);
        if (!map_is_zero(coord_compose(md, binz)))
            throw HypothesesUnmet("couple differential not well-defined at " + st_str(s, t));
        CoordMap d = coord_compose(md, lift_through_mono(zincl, at_s.pres.at(t).lift));
        if (!map_is_zero(d))
            comp.emplace(t, d);
    }
    return graded_map(at_s.E, at_sr.E, -1, comp);
}

GradedMap couple_differential(const ExactCouple& c, int r, int s)
{
    return couple_differential(c, couple_pages(c, r, s), couple_pages(c, r, s - r));
}

PageTurn couple_turn_verify(const ExactCouple& c, int r, int smin, int smax)
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
            it = pe.emplace(s, couple_pages(c, r, s)).first;
        return it->second;
    };
    for (int s = smin; s <= smax; ++s) {
        try {
            const PageEntry& ps = page(s);
            PageEntry pn = couple_pages(c, r + 1, s);
            GradedMap dout = couple_differential(c, ps, page(s - r));
            GradedMap din = couple_differential(c, page(s + r), ps);
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

ExactCouple build_couple(const CESystem& sys, Side side)
{
    ExactCouple c;
    c.p = sys.p;
    c.smin = sys.a;
    c.smax = sys.b;
    c.tail = sys.tail;
    if (side == Side::RIGHT) {
        if (!sys.has_pos)
            throw std::invalid_argument("build_couple: system has no +inf column");
        c.conv = DegreeConvention::BETA_M1_GAMMA0;
        for (int s = c.smin - 1; s <= c.smax; ++s)
            c.A[s] = sys.H(s, kPosInf);
        for (int s = c.smin; s <= c.smax; ++s) {
            c.E[s] = sys.H(s - 1, s);
            c.alpha[s] = sys.eta(s - 1, kPosInf, s, kPosInf);
            c.beta[s] = sys.del(s - 1, s, kPosInf);
            c.gamma[s] = sys.eta(s - 1, s, s - 1, kPosInf);
        }
        c.ext_A = [sys](int s) { return sys.H(s, kPosInf); };
        c.ext_E = [sys](int s) { return sys.H(s - 1, s); };
        c.ext_alpha = [sys](int s) { return sys.eta(s - 1, kPosInf, s, kPosInf); };
        c.ext_beta = [sys](int s) { return sys.del(s - 1, s, kPosInf); };
        c.ext_gamma = [sys](int s) { return sys.eta(s - 1, s, s - 1, kPosInf); };
    } else {
        if (!sys.has_neg)
            throw std::invalid_argument("build_couple: system has no -inf row");
        c.conv = DegreeConvention::BETA0_GAMMA_M1;
        for (int s = c.smin - 1; s <= c.smax; ++s)
            c.A[s] = sys.H(kNegInf, s);
        for (int s = c.smin; s <= c.smax; ++s) {
            c.E[s] = sys.H(s - 1, s);
            c.alpha[s] = sys.eta(kNegInf, s - 1, kNegInf, s);
            c.beta[s] = sys.eta(kNegInf, s, s - 1, s);
            c.gamma[s] = sys.del(kNegInf, s - 1, s);
        }
        c.ext_A = [sys](int s) { return sys.H(kNegInf, s); };
        c.ext_E = [sys](int s) { return sys.H(s - 1, s); };
        c.ext_alpha = [sys](int s) { return sys.eta(kNegInf, s - 1, kNegInf, s); };
        c.ext_beta = [sys](int s) { return sys.eta(kNegInf, s, s - 1, s); };
        c.ext_gamma = [sys](int s) { return sys.del(kNegInf, s - 1, s); };
    }
    return c;
}

CoupleMorphism couple_comparison(const CESystem& sys, int rmax)
{
    if (!sys.has_neg || !sys.has_pos)
        throw std::invalid_argument("couple_comparison: system needs both endpoints");
    ExactCouple cr = build_couple(sys, Side::RIGHT);
    ExactCouple cl = build_couple(sys, Side::LEFT);
    CoupleMorphism out;
    auto fail = [&](const std::string& msg) {
        out.ok = false;
        out.failures.push_back(msg);
    };
    for (int s = sys.a - 1; s <= sys.b; ++s)
        out.phi[s] = sys.del(kNegInf, s, kPosInf);
    for (int s = sys.a; s <= sys.b; ++s) {
        try {
            if (!(graded_compose(out.phi.at(s), cr.al(s)) ==
                  graded_compose(cl.al(s), out.phi.at(s - 1))))
                fail("alpha square fails at s=" + std::to_string(s));
            if (!(graded_compose(cl.be(s), out.phi.at(s)) == cr.be(s)))
                fail("beta square fails at s=" + std::to_string(s));
            if (!(graded_compose(out.phi.at(s - 1), cr.ga(s)) == cl.ga(s)))
                fail("gamma square fails at s=" + std::to_string(s));
        } catch (const std::exception& e) {
            fail("square at s=" + std::to_string(s) + ": exception: " + e.what());
        }
    }
    // The identity on E^1 must induce the identity on every later page:
    // cycles and boundaries coincide, and the transported presentations
    // intertwine the differentials.
    for (int r = 1; r <= rmax; ++r) {
        std::map<int, PageEntry> pr, pl;
        std::map<int, GradedMap> tau;
        for (int s = sys.a - rmax; s <= sys.b; ++s) {
            try {
                pr.emplace(s, couple_pages(cr, r, s));
                pl.emplace(s, couple_pages(cl, r, s));
                const PageEntry& er = pr.at(s);
                const PageEntry& el = pl.at(s);
                std::map<int, CoordMap> comps;
                for (int t : graded_degrees(er.E1)) {
                    if (!sub_eq(er.Z.at(t), el.Z.at(t)))
                        fail("cycle mismatch at r=" + std::to_string(r) + " " + st_str(s, t));
                    if (!sub_eq(er.B.at(t), el.B.at(t)))
                        fail("boundary mismatch at r=" + std::to_string(r) + " " +
                             st_str(s, t));
                    CoordMap m = coord_compose(el.pres.at(t).project, er.pres.at(t).lift);
                    CoordKic kc = coord_kic(m);
                    if (!coord_is_zero(kc.kernel.obj) || !coord_is_zero(kc.coker))
                        fail("transported page map is not an isomorphism at r=" +
                             std::to_string(r) + " " + st_str(s, t));
                    if (!map_is_zero(m))
                        comps.emplace(t, m);
                }
                tau.emplace(s, graded_map(er.E, el.E, 0, comps));
            } catch (const std::exception& e) {
                fail("page comparison at r=" + std::to_string(r) +
                     ", s=" + std::to_string(s) + ": exception: " + e.what());
            }
        }
        for (int s = sys.a; s <= sys.b; ++s) {
            if (!tau.count(s) || !tau.count(s - r))
                continue;
            try {
                GradedMap dr = couple_differential(cr, pr.at(s), pr.at(s - r));
                GradedMap dl = couple_differential(cl, pl.at(s), pl.at(s - r));
                if (!(graded_compose(tau.at(s - r), dr) == graded_compose(dl, tau.at(s))))
                    fail("differential mismatch at r=" + std::to_string(r) +
                         ", s=" + std::to_string(s));
            } catch (const std::exception& e) {
                fail("differential comparison at r=" + std::to_string(r) +
                     ", s=" + std::to_string(s) + ": exception: " + e.what());
            }
        }
    }
    return out;
}

CoupleLimits couple_limits(const ExactCouple& c, int probe)
{
    int w = c.smax - c.smin + 1;
    int n = (probe > 0 ? probe : 12) + w;
    CoupleLimits out;
    std::set<int> degs;
    for (int s = c.smin - n; s <= c.smax + n; ++s)
        for (int t : graded_degrees(c.Aat(s)))
            degs.insert(t);

    std::map<int, CoordObject> ainf, alim, ralim;
    std::map<int, std::map<int, CoordMap>> icomp, pcomp;  // s -> t -> component
    bool filt_ok = true;
    for (int t : degs) {
        Tower up = make_tower(
            c.p, Dir::ASC, c.smin - 2, n + w,
            [&](int k) { return c.Aat(c.smin - 2 + k).at(t); },
            [&](int k) { return c.al(c.smin - 1 + k).at(t); });
        TowerLimit uc = tower_colim(up);
        if (!coord_is_zero(uc.value))
            ainf.emplace(t, uc.value);
        for (int s = c.smin - 1; s <= c.smax; ++s)
            icomp[s].emplace(t, colim_incl(up, uc, s - (c.smin - 2)));

        Tower dn = make_tower(
            c.p, Dir::DESC, c.smax, n + w,
            [&](int k) { return c.Aat(c.smax - k).at(t); },
            [&](int k) { return c.al(c.smax - k).at(t); });
        TowerLimit dl = tower_lim(dn);
        TowerLimit rl = tower_rlim(dn);
        if (!coord_is_zero(dl.value))
            alim.emplace(t, dl.value);
        if (!coord_is_zero(rl.value))
            ralim.emplace(t, rl.value);
        for (int s = c.smin - 1; s <= c.smax; ++s)
            pcomp[s].emplace(t, lim_proj(dn, dl, c.smax - s));

        // Completeness and Hausdorffness of the filtration of the limit:
        // the kernel filtration collapses to zero in the limit.
        std::vector<Subobject> fk;
        for (int k = 0; k < n + w; ++k)
            fk.push_back(sub_kernel(lim_proj(dn, dl, k)));
        Tower ft = make_tower(
            c.p, Dir::DESC, 0, n + w,
            [&](int k) { return fk[k].obj; },
            [&](int k) { return lift_through_mono(fk[k].incl, fk[k + 1].incl); });
        if (!coord_is_zero(tower_lim(ft).value) || !coord_is_zero(tower_rlim(ft).value))
            filt_ok = false;
    }
    out.Ainf = graded_object(c.p, ainf);
    out.Alim = graded_object(c.p, alim);
    out.RAlim = graded_object(c.p, ralim);
    for (int s = c.smin - 1; s <= c.smax; ++s) {
        std::map<int, CoordMap> ic, pc;
        for (auto& [t, m] : icomp[s])
            if (!map_is_zero(m))
                ic.emplace(t, m);
        for (auto& [t, m] : pcomp[s])
            if (!map_is_zero(m))
                pc.emplace(t, m);
        out.iota[s] = graded_map(c.Aat(s), out.Ainf, 0, ic);
        out.pi[s] = graded_map(out.Alim, c.Aat(s), 0, pc);
        for (int t : degs) {
            out.FAinf[s].emplace(t, sub_image(out.iota[s].at(t)));
            out.FAlim[s].emplace(t, sub_kernel(out.pi[s].at(t)));
        }
    }
    out.cc_colimit = graded_is_zero(out.Alim) && graded_is_zero(out.RAlim);
    out.cc_limit = graded_is_zero(out.Ainf);
    out.filt_lim_complete_hausdorff = filt_ok;
    return out;
}

ValidationReport right_couple_limit_check(const CESystem& sys, int probe)
{
    ValidationReport rep;
    auto fail = [&](const std::string& msg) {
        rep.ok = false;
        rep.failures.push_back(msg);
    };
    if (!sys.has_pos) {
        fail("system has no +inf column");
        return rep;
    }
    int n = (probe > 0 ? probe : 12) + (sys.b - sys.a);
    std::vector<int> rows;
    if (sys.has_neg)
        rows.push_back(kNegInf);
    for (int i = sys.a; i <= sys.b; ++i)
        rows.push_back(i);
    for (int i : rows) {
        int j0 = (i == kNegInf) ? sys.a : i;
        try {
            GradedObject target = sys.H(i, kPosInf);
            std::vector<int> tdegs = graded_degrees(target);
            std::set<int> degs(tdegs.begin(), tdegs.end());
            for (int k = 0; k < n; ++k)
                for (int t : graded_degrees(sys.H(i, j0 + k)))
                    degs.insert(t);
            for (int t : degs) {
                ++rep.checks;
                Tower tw = make_tower(
                    sys.p, Dir::ASC, j0, n,
                    [&](int k) { return sys.H(i, j0 + k).at(t); },
                    [&](int k) { return sys.eta(i, j0 + k, i, j0 + k + 1).at(t); });
                TowerLimit lc = tower_colim(tw);
                Tower ct = constant_tower(Dir::ASC, j0, n, target.at(t));
                TowerLimit cc = tower_colim(ct);
                CoordMap bareta = induced_colim(
                    tw, lc, ct, cc,
                    [&](int k) { return sys.eta(i, j0 + k, i, kPosInf).at(t); });
                CoordKic kc = coord_kic(bareta);
                if (!coord_is_zero(kc.kernel.obj) || !coord_is_zero(kc.coker))
                    fail("colim_j H(i,j) -> H(i,+inf) not iso at i=" + std::to_string(i) +
                         ", t=" + std::to_string(t));
            }
        } catch (const std::exception& e) {
            fail("row i=" + std::to_string(i) + ": exception: " + e.what());
        }
    }
    return rep;
}

ValidationReport left_couple_ses_check(const CESystem& sys, int j, int probe)
{
    ValidationReport rep;
    auto fail = [&](const std::string& msg) {
        rep.ok = false;
        rep.failures.push_back(msg);
    };
    if (!sys.has_neg) {
        fail("system has no -inf row");
        return rep;
    }
    int n = (probe > 0 ? probe : 12) + (sys.b - sys.a);
    // Stage k of every tower below corresponds to i = j - k.
    std::set<int> degs;
    for (int k = 0; k < n; ++k) {
        for (int t : graded_degrees(sys.H(j - k, j)))
            degs.insert(t);
        for (int t : graded_degrees(sys.H(kNegInf, j - k)))
            degs.insert(t);
    }
    if (degs.empty())
        return rep;
    int tlo = *degs.begin() - 1, thi = *degs.rbegin();

    auto ksub = [&](int k, int u) {
        return sub_kernel(sys.eta(kNegInf, j - k, kNegInf, j).at(u));
    };
    auto ktower = [&](int u) {
        return make_tower(
            sys.p, Dir::DESC, 0, n, [&](int k) { return ksub(k, u).obj; },
            [&](int k) {
                return lift_through_mono(
                    ksub(k, u).incl,
                    coord_compose(sys.eta(kNegInf, j - k - 1, kNegInf, j - k).at(u),
                                  ksub(k + 1, u).incl));
            });
    };

    for (int t = tlo; t <= thi; ++t) {
        try {
            ++rep.checks;
            CoordObject aj = sys.H(kNegInf, j).at(t);
            Tower th = make_tower(
                sys.p, Dir::DESC, 0, n,
                [&](int k) { return sys.H(j - k, j).at(t); },
                [&](int k) { return sys.eta(j - k - 1, j, j - k, j).at(t); });
            TowerLimit limh = tower_lim(th);
            TowerLimit rlimh = tower_rlim(th);

            Tower ca = constant_tower(Dir::DESC, 0, n, aj);
            TowerLimit lca = tower_lim(ca);
            CoordMap etat = coord_compose(
                induced_lim(ca, lca, th, limh,
                            [&](int k) { return sys.eta(kNegInf, j, j - k, j).at(t); }),
                coord_inverse(lim_proj(ca, lca, 0)));

            // ker(eta-tilde) = Q_j, the limit of the image subobjects
            std::vector<Subobject> im(n);
            for (int k = 0; k < n; ++k)
                im[k] = sub_image(sys.eta(kNegInf, j - k, kNegInf, j).at(t));
            Tower ti = make_tower(
                sys.p, Dir::DESC, 0, n, [&](int k) { return im[k].obj; },
                [&](int k) { return lift_through_mono(im[k].incl, im[k + 1].incl); });
            TowerLimit limi = tower_lim(ti);
            CoordMap qincl = coord_compose(
                lim_proj(ca, lca, 0),
                induced_lim(ti, limi, ca, lca, [&](int k) { return im[k].incl; }));
            if (!sub_eq(Subobject{limi.value, qincl}, sub_kernel(etat)))
                fail("ker(eta-tilde) != Q at j=" + std::to_string(j) +
                     ", t=" + std::to_string(t));

            // eta-tilde surjective
            CoordKic ek = coord_kic(etat);
            if (!coord_is_zero(ek.coker))
                fail("eta-tilde not surjective at j=" + std::to_string(j) +
                     ", t=" + std::to_string(t));

            // del: Rlim_i H(i,j) -> Rlim_i K(i,j), degree -1, an isomorphism
            Tower tk1 = ktower(t - 1);
            TowerLimit rk1 = tower_rlim(tk1);
            CoordMap dmap = induced_rlim(
                th, rlimh, tk1, rk1, [&](int k) {
                    return lift_through_mono(ksub(k, t - 1).incl,
                                             sys.del(kNegInf, j - k, j).at(t));
                });
            CoordKic dk = coord_kic(dmap);
            if (!coord_is_zero(dk.kernel.obj) || !coord_is_zero(dk.coker))
                fail("del: Rlim H -> Rlim K not iso at j=" + std::to_string(j) +
                     ", t=" + std::to_string(t));

            // connecting Q_j -> Rlim_i K(i,j) from 0 -> K -> A' -> im -> 0
            Tower tk = ktower(t);
            TowerLimit rk = tower_rlim(tk);
            Tower ta = make_tower(
                sys.p, Dir::DESC, 0, n,
                [&](int k) { return sys.H(kNegInf, j - k).at(t); },
                [&](int k) {
                    return sys.eta(kNegInf, j - k - 1, kNegInf, j - k).at(t);
                });
            CoordMap conn = connecting_lim_rlim(
                tk, rk, ta, ti, limi,
                [&](int k) { return ksub(k, t).incl; },
                [&](int k) {
                    return lift_through_mono(
                        im[k].incl, sys.eta(kNegInf, j - k, kNegInf, j).at(t));
                });
            CoordKic ck = coord_kic(conn);
            if (!coord_is_zero(ck.kernel.obj) || !coord_is_zero(ck.coker))
                fail("connecting Q -> Rlim K not iso at j=" + std::to_string(j) +
                     ", t=" + std::to_string(t));
        } catch (const std::exception& e) {
            fail("j=" + std::to_string(j) + ", t=" + std::to_string(t) +
                 ": exception: " + e.what());
        }
    }
    return rep;
}

}  // namespace sseq
