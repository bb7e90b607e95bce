#include "sseq/interchange.hpp"

#include <set>
#include <sstream>

namespace sseq {

namespace {

CoordMap coord_inverse(const CoordMap& f)
{
    return lift_through(f, coord_identity(f.tgt));
}

std::string ijt(int i, int j, int t)
{
    std::ostringstream os;
    os << "(" << i << "," << j << ")[" << t << "]";
    return os.str();
}

}  // namespace

const Tower& InterchangeData::dtower(int i, int t)
{
    auto key = std::make_pair(i, t);
    auto it = dt_.find(key);
    if (it != dt_.end())
        return it->second;
    const CESystem& cs = sys;
    // rows at negative i only reach their tame tail past j = |i|
    int count = nD + 2 + std::max(0, -2 * i);
    Tower tw = make_tower(
        sys.p, Dir::ASC, i, count,
        [&cs, i, t](int k) { return cs.H(i, i + k).at(t); },
        [&cs, i, t](int k) { return cs.eta(i, i + k, i, i + k + 1).at(t); });
    return dt_.emplace(key, std::move(tw)).first->second;
}

const TowerLimit& InterchangeData::dcolim(int i, int t)
{
    auto key = std::make_pair(i, t);
    auto it = dc_.find(key);
    if (it != dc_.end())
        return it->second;
    TowerLimit l = tower_colim(dtower(i, t));
    return dc_.emplace(key, std::move(l)).first->second;
}

CoordObject InterchangeData::D(int i, int t) { return dcolim(i, t).value; }

CoordMap InterchangeData::iota(int i, int j, int t)
{
    return colim_incl(dtower(i, t), dcolim(i, t), j - i);
}

CoordMap InterchangeData::etaD(int i, int j, int t)
{
    auto key = std::make_tuple(i, j, t);
    auto it = etad_.find(key);
    if (it != etad_.end())
        return it->second;
    CoordMap f;
    if (i == j) {
        f = coord_identity(D(i, t));
    } else {
        const CESystem& cs = sys;
        f = induced_colim(dtower(i, t), dcolim(i, t), dtower(j, t), dcolim(j, t),
                          [&cs, i, j, t](int k) {
                              return cs.eta(i, i + k, j, j + k).at(t);
                          });
    }
    return etad_.emplace(key, std::move(f)).first->second;
}

CoordMap InterchangeData::delD(int i, int j, int t)
{
    auto key = std::make_tuple(i, j, t);
    auto it = deld_.find(key);
    if (it != deld_.end())
        return it->second;
    const CESystem& cs = sys;
    CoordObject tgt = cs.H(i, j).at(t - 1);
    Tower ct = constant_tower(Dir::ASC, j, nD + 2, tgt);
    TowerLimit cl = tower_colim(ct);
    CoordMap f = induced_colim(dtower(j, t), dcolim(j, t), ct, cl,
                               [&cs, i, j, t](int k) {
                                   return cs.del(i, j, j + k).at(t);
                               });
    return deld_.emplace(key, std::move(f)).first->second;
}

Subobject InterchangeData::K(int i, int j, int t)
{
    return sub_kernel(iota(i, j, t));
}

const SubqData& InterchangeData::C(int i, int j, int t)
{
    auto key = std::make_tuple(i, j, t);
    auto it = cq_.find(key);
    if (it != cq_.end())
        return it->second;
    SubqData q = sub_quotient(sub_full(D(i, t)), sub_image(iota(i, j, t)));
    return cq_.emplace(key, std::move(q)).first->second;
}

const Tower& InterchangeData::TH(int j, int t)
{
    auto key = std::make_pair(j, t);
    auto it = th_.find(key);
    if (it != th_.end())
        return it->second;
    const CESystem& cs = sys;
    int p = sys.p, Tt = T;
    auto stage = [&cs, p, Tt, j, t](int k) {
        int i = Tt - k;
        return i >= j ? coord_zero(p) : cs.H(i, j).at(t);
    };
    auto map = [&cs, Tt, j, t, stage, p](int k) {
        int i = Tt - k;
        if (i >= j)
            return coord_zero_map(stage(k + 1), coord_zero(p));
        return cs.eta(i - 1, j, i, j).at(t);
    };
    Tower tw = make_tower(p, Dir::DESC, 0, nD, stage, map);
    return th_.emplace(key, std::move(tw)).first->second;
}

const Tower& InterchangeData::TK(int j, int t)
{
    auto key = std::make_pair(j, t);
    auto it = tk_.find(key);
    if (it != tk_.end())
        return it->second;
    int p = sys.p;
    auto stage = [this, j, t, p](int k) {
        int i = T - k;
        return i >= j ? coord_zero(p) : K(i, j, t).obj;
    };
    auto map = [this, j, t, p, stage](int k) {
        int i = T - k;
        if (i >= j)
            return coord_zero_map(stage(k + 1), coord_zero(p));
        return lift_through_mono(
            K(i, j, t).incl,
            coord_compose(sys.eta(i - 1, j, i, j).at(t), K(i - 1, j, t).incl));
    };
    Tower tw = make_tower(p, Dir::DESC, 0, nD, stage, map);
    return tk_.emplace(key, std::move(tw)).first->second;
}

const Tower& InterchangeData::TC(int j, int t)
{
    auto key = std::make_pair(j, t);
    auto it = tc_.find(key);
    if (it != tc_.end())
        return it->second;
    int p = sys.p;
    auto stage = [this, j, t, p](int k) {
        int i = T - k;
        return i > j ? coord_zero(p) : C(i, j, t).obj;
    };
    auto map = [this, j, t, p, stage](int k) {
        int i = T - k;
        if (i > j)
            return coord_zero_map(stage(k + 1), coord_zero(p));
        return coord_compose(C(i, j, t).project,
                             coord_compose(etaD(i - 1, i, t), C(i - 1, j, t).lift));
    };
    Tower tw = make_tower(p, Dir::DESC, 0, nD, stage, map);
    return tc_.emplace(key, std::move(tw)).first->second;
}

const Tower& InterchangeData::TY(int j, int t)
{
    auto key = std::make_pair(j, t);
    auto it = ty_.find(key);
    if (it != ty_.end())
        return it->second;
    int p = sys.p;
    CoordObject dj = D(j, t);
    auto stage = [p, j, dj, this](int k) {
        int i = T - k;
        return i > j ? coord_zero(p) : dj;
    };
    auto map = [p, j, dj, this, stage](int k) {
        int i = T - k;
        if (i > j)
            return coord_zero_map(stage(k + 1), coord_zero(p));
        return coord_identity(dj);
    };
    Tower tw = make_tower(p, Dir::DESC, 0, nD, stage, map);
    return ty_.emplace(key, std::move(tw)).first->second;
}

#define SSEQ_IC_CACHED_LIMIT(NAME, CACHE, TOWER, OP)                       \
    const TowerLimit& InterchangeData::NAME(int j, int t)                  \
    {                                                                      \
        auto key = std::make_pair(j, t);                                   \
        auto it = CACHE.find(key);                                         \
        if (it != CACHE.end())                                             \
            return it->second;                                             \
        TowerLimit l = OP(TOWER(j, t));                                    \
        return CACHE.emplace(key, std::move(l)).first->second;             \
    }

SSEQ_IC_CACHED_LIMIT(limH, lh_, TH, tower_lim)
SSEQ_IC_CACHED_LIMIT(rlimH, rh_, TH, tower_rlim)
SSEQ_IC_CACHED_LIMIT(limK, lk_, TK, tower_lim)
SSEQ_IC_CACHED_LIMIT(rlimC, rc_, TC, tower_rlim)

#undef SSEQ_IC_CACHED_LIMIT

CoordMap InterchangeData::deltaj(int j, int u)
{
    int t = u + 1;
    const Tower& tx = TC(j, t);
    const Tower& ty = TY(j, t);
    const Tower& tz = TK(j, u);
    const TowerLimit& rx = rlimC(j, t);
    const TowerLimit& lz = limK(j, u);
    auto incl = [this, j, t, &tx, &ty](int k) {
        int i = T - k;
        if (i > j)
            return coord_zero_map(tx.stage_at(k), ty.stage_at(k));
        return coord_compose(etaD(i, j, t), C(i, j, t).lift);
    };
    auto proj = [this, j, t, u, &ty, &tz](int k) {
        int i = T - k;
        if (i >= j)
            return coord_zero_map(ty.stage_at(k), tz.stage_at(k));
        return lift_through_mono(K(i, j, u).incl, delD(i, j, t));
    };
    return connecting_lim_rlim(tx, rx, ty, tz, lz, incl, proj);
}

const Tower& InterchangeData::TD(int t)
{
    auto it = tdd_.find(t);
    if (it != tdd_.end())
        return it->second;
    Tower tw = make_tower(
        sys.p, Dir::DESC, 0, nD,
        [this, t](int k) { return D(T - k, t); },
        [this, t](int k) { return etaD(T - k - 1, T - k, t); });
    return tdd_.emplace(t, std::move(tw)).first->second;
}

const TowerLimit& InterchangeData::LCLl(int t)
{
    auto it = lcl_.find(t);
    if (it != lcl_.end())
        return it->second;
    TowerLimit l = tower_lim(TD(t));
    return lcl_.emplace(t, std::move(l)).first->second;
}

const TowerLimit& InterchangeData::RLDl(int t)
{
    auto it = rld_.find(t);
    if (it != rld_.end())
        return it->second;
    TowerLimit l = tower_rlim(TD(t));
    return rld_.emplace(t, std::move(l)).first->second;
}

const Tower& InterchangeData::TLH(int t)
{
    auto it = tlh_.find(t);
    if (it != tlh_.end())
        return it->second;
    Tower tw = make_tower(
        sys.p, Dir::ASC, jA, nA,
        [this, t](int k) { return limH(jA + k, t).value; },
        [this, t](int k) {
            int j = jA + k;
            return induced_lim(TH(j, t), limH(j, t), TH(j + 1, t), limH(j + 1, t),
                               [this, j, t](int kk) {
                                   int i = T - kk;
                                   if (i >= j)
                                       return coord_zero_map(TH(j, t).stage_at(kk),
                                                             TH(j + 1, t).stage_at(kk));
                                   return sys.eta(i, j, i, j + 1).at(t);
                               });
        });
    return tlh_.emplace(t, std::move(tw)).first->second;
}

const Tower& InterchangeData::TRH(int t)
{
    auto it = trh_.find(t);
    if (it != trh_.end())
        return it->second;
    Tower tw = make_tower(
        sys.p, Dir::ASC, jA, nA,
        [this, t](int k) { return rlimH(jA + k, t).value; },
        [this, t](int k) {
            int j = jA + k;
            return induced_rlim(TH(j, t), rlimH(j, t), TH(j + 1, t), rlimH(j + 1, t),
                                [this, j, t](int kk) {
                                    int i = T - kk;
                                    if (i >= j)
                                        return coord_zero_map(TH(j, t).stage_at(kk),
                                                              TH(j + 1, t).stage_at(kk));
                                    return sys.eta(i, j, i, j + 1).at(t);
                                });
        });
    return trh_.emplace(t, std::move(tw)).first->second;
}

const Tower& InterchangeData::TLK(int t)
{
    auto it = tlk_.find(t);
    if (it != tlk_.end())
        return it->second;
    Tower tw = make_tower(
        sys.p, Dir::ASC, jA, nA,
        [this, t](int k) { return limK(jA + k, t).value; },
        [this, t](int k) {
            int j = jA + k;
            return induced_lim(TK(j, t), limK(j, t), TK(j + 1, t), limK(j + 1, t),
                               [this, j, t](int kk) {
                                   int i = T - kk;
                                   if (i >= j)
                                       return coord_zero_map(TK(j, t).stage_at(kk),
                                                             TK(j + 1, t).stage_at(kk));
                                   return lift_through_mono(
                                       K(i, j + 1, t).incl,
                                       coord_compose(sys.eta(i, j, i, j + 1).at(t),
                                                     K(i, j, t).incl));
                               });
        });
    return tlk_.emplace(t, std::move(tw)).first->second;
}

const Tower& InterchangeData::TRC(int t)
{
    auto it = trc_.find(t);
    if (it != trc_.end())
        return it->second;
    Tower tw = make_tower(
        sys.p, Dir::ASC, jA, nA,
        [this, t](int k) { return rlimC(jA + k, t).value; },
        [this, t](int k) {
            int j = jA + k;
            return induced_rlim(TC(j, t), rlimC(j, t), TC(j + 1, t), rlimC(j + 1, t),
                                [this, j, t](int kk) {
                                    int i = T - kk;
                                    if (i > j)
                                        return coord_zero_map(TC(j, t).stage_at(kk),
                                                              TC(j + 1, t).stage_at(kk));
                                    return coord_compose(C(i, j + 1, t).project,
                                                         C(i, j, t).lift);
                                });
        });
    return trc_.emplace(t, std::move(tw)).first->second;
}

#define SSEQ_IC_CACHED_COLIM(NAME, CACHE, TOWER)                           \
    const TowerLimit& InterchangeData::NAME(int t)                         \
    {                                                                      \
        auto it = CACHE.find(t);                                           \
        if (it != CACHE.end())                                             \
            return it->second;                                             \
        TowerLimit l = tower_colim(TOWER(t));                              \
        return CACHE.emplace(t, std::move(l)).first->second;               \
    }

SSEQ_IC_CACHED_COLIM(CLLl, cll_, TLH)
SSEQ_IC_CACHED_COLIM(CRHl, crh_, TRH)
SSEQ_IC_CACHED_COLIM(CLKl, clk_, TLK)
SSEQ_IC_CACHED_COLIM(CRCl, crc_, TRC)

#undef SSEQ_IC_CACHED_COLIM

InterchangeData compute_interchange(const CESystem& sys, int probe)
{
    InterchangeData ic;
    ic.sys = sys;
    int m = probe > 0 ? probe : 12;
    ic.nA = (sys.b - sys.a) + m;
    ic.jA = sys.a - 2;
    ic.T = ic.jA + ic.nA - 1;
    ic.nD = ic.nA + m;

    std::set<int> ds;
    for (int i = ic.T - ic.nD; i <= ic.T; ++i)
        for (int j = i + 1; j <= ic.T; ++j)
            for (int t : graded_degrees(sys.H(i, j)))
                ds.insert(t);
    ic.degs.assign(ds.begin(), ds.end());

    int p = sys.p;
    std::map<int, CoordObject> cll, lcl, crh, rld, clk, crc;
    std::map<int, CoordMap> kap, lam, dlt, klkc, muc;

    for (int t : ic.degs) {
        cll[t] = ic.CLLl(t).value;
        lcl[t] = ic.LCLl(t).value;
        crh[t] = ic.CRHl(t).value;
        rld[t] = ic.RLDl(t).value;
        clk[t] = ic.CLKl(t).value;
        crc[t] = ic.CRCl(t).value;
    }
    ic.CLL = graded_object(p, cll);
    ic.LCL = graded_object(p, lcl);
    ic.CRH = graded_object(p, crh);
    ic.RLD = graded_object(p, rld);
    ic.CLK = graded_object(p, clk);
    ic.CRC = graded_object(p, crc);

    auto iota_phi = [&ic](int j, int t) {
        return [&ic, j, t](int k) {
            int i = ic.T - k;
            if (i >= j)
                return coord_zero_map(ic.TH(j, t).stage_at(k), ic.TD(t).stage_at(k));
            return ic.iota(i, j, t);
        };
    };

    ValidationReport& rep = ic.triangles;
    auto fail = [&rep](const std::string& msg) {
        rep.ok = false;
        rep.failures.push_back(msg);
    };

    for (int t : ic.degs) {
        // kappa and lambda, as colimits over j of the maps induced by iota
        Tower ck = constant_tower(Dir::ASC, ic.jA, ic.nA, ic.LCLl(t).value);
        TowerLimit ckl = tower_colim(ck);
        kap[t] = induced_colim(ic.TLH(t), ic.CLLl(t), ck, ckl, [&](int k) {
            int j = ic.jA + k;
            return induced_lim(ic.TH(j, t), ic.limH(j, t), ic.TD(t), ic.LCLl(t),
                               iota_phi(j, t));
        });
        Tower cr = constant_tower(Dir::ASC, ic.jA, ic.nA, ic.RLDl(t).value);
        TowerLimit crl = tower_colim(cr);
        lam[t] = induced_colim(ic.TRH(t), ic.CRHl(t), cr, crl, [&](int k) {
            int j = ic.jA + k;
            return induced_rlim(ic.TH(j, t), ic.rlimH(j, t), ic.TD(t), ic.RLDl(t),
                                iota_phi(j, t));
        });
        // the canonical mono colim lim K -> colim lim H
        klkc[t] = induced_colim(ic.TLK(t), ic.CLKl(t), ic.TLH(t), ic.CLLl(t),
                                [&](int k) {
                                    int j = ic.jA + k;
                                    return induced_lim(
                                        ic.TK(j, t), ic.limK(j, t), ic.TH(j, t),
                                        ic.limH(j, t), [&ic, j, t](int kk) {
                                            int i = ic.T - kk;
                                            if (i >= j)
                                                return coord_zero_map(
                                                    ic.TK(j, t).stage_at(kk),
                                                    ic.TH(j, t).stage_at(kk));
                                            return ic.K(i, j, t).incl;
                                        });
                                });
        // delta: colim over j of the connecting maps, degree +1
        dlt[t] = induced_colim(ic.TLK(t), ic.CLKl(t), ic.TRC(t + 1), ic.CRCl(t + 1),
                               [&ic, t](int k) { return ic.deltaj(ic.jA + k, t); });
    }

    ic.kappa = graded_map(ic.CLL, ic.LCL, 0, kap);
    ic.lambda = graded_map(ic.CRH, ic.RLD, 0, lam);
    ic.klk = graded_map(ic.CLK, ic.CLL, 0, klkc);
    ic.delta = graded_map(ic.CLK, ic.CRC, 1, dlt);

    // mu = klk . delta^{-1} . (Rlim D -> colim Rlim C), degree -1
    auto rho = [&ic](int j, int t) {
        return induced_rlim(ic.TD(t), ic.RLDl(t), ic.TC(j, t), ic.rlimC(j, t),
                            [&ic, j, t](int k) {
                                int i = ic.T - k;
                                if (i > j)
                                    return coord_zero_map(ic.TD(t).stage_at(k),
                                                          ic.TC(j, t).stage_at(k));
                                return ic.C(i, j, t).project;
                            });
    };
    for (int t : ic.degs) {
        CoordMap q =
            coord_compose(colim_incl(ic.TRC(t), ic.CRCl(t), 0), rho(ic.jA, t));
        CoordMap q2 =
            coord_compose(colim_incl(ic.TRC(t), ic.CRCl(t), 1), rho(ic.jA + 1, t));
        rep.checks++;
        if (!(q == q2))
            fail("Rlim D -> colim Rlim C depends on the column at degree " +
                 std::to_string(t));
        CoordMap dinv = coord_inverse(ic.delta.at(t - 1));
        muc[t] = coord_compose(ic.klk.at(t - 1), coord_compose(dinv, q));
    }
    ic.mu = graded_map(ic.RLD, ic.CLL, -1, muc);

    for (int t : ic.degs)
        ic.ker_kappa.emplace(t, sub_kernel(ic.kappa.at(t)));

    // exactness of H(i,j) -> D_i -> D_j -> H(i,j) over the window
    for (int i = sys.a - 1; i <= sys.b; ++i)
        for (int j = i + 1; j <= sys.b + 1; ++j)
            for (int t : ic.degs) {
                rep.checks += 3;
                if (!sub_eq(sub_kernel(ic.etaD(i, j, t)),
                            sub_image(ic.iota(i, j, t))))
                    fail("ker(D eta) != im(iota) at " + ijt(i, j, t));
                if (!sub_eq(sub_image(ic.etaD(i, j, t)),
                            sub_kernel(ic.delD(i, j, t))))
                    fail("im(D eta) != ker(D del) at " + ijt(i, j, t));
                if (!sub_eq(sub_image(ic.delD(i, j, t)), ic.K(i, j, t - 1)))
                    fail("im(D del) != K at " + ijt(i, j, t));
            }

    return ic;
}

FourTerm four_term_sequence(InterchangeData& ic)
{
    FourTerm ft;
    ft.kappa_surjective = true;
    auto fail = [&ft](const std::string& msg) {
        ft.report.ok = false;
        ft.report.failures.push_back(msg);
    };
    std::map<int, CoordObject> kk;
    for (int t : ic.degs) {
        ft.report.checks += 7;
        if (!coord_is_zero(sub_kernel(ic.lambda.at(t)).obj))
            fail("lambda not injective at degree " + std::to_string(t));
        if (!sub_eq(sub_image(ic.lambda.at(t)), sub_kernel(ic.mu.at(t))))
            fail("not exact at Rlim D at degree " + std::to_string(t));
        if (!sub_eq(sub_image(ic.mu.at(t + 1)), sub_kernel(ic.kappa.at(t))))
            fail("not exact at colim lim H at degree " + std::to_string(t));
        CoordKic kc = coord_kic(ic.kappa.at(t));
        if (!coord_is_zero(kc.coker)) {
            ft.kappa_surjective = false;
            fail("kappa not surjective at degree " + std::to_string(t));
        }
        if (!coord_is_zero(sub_kernel(ic.klk.at(t)).obj))
            fail("colim lim K -> colim lim H not injective at degree " +
                 std::to_string(t));
        if (!sub_eq(sub_kernel(ic.kappa.at(t)), sub_image(ic.klk.at(t))))
            fail("ker(kappa) != im(colim lim K) at degree " + std::to_string(t));
        CoordKic dk = coord_kic(ic.delta.at(t));
        if (!coord_is_zero(dk.kernel.obj) || !coord_is_zero(dk.coker))
            fail("delta not an isomorphism at degree " + std::to_string(t));
        CoordObject ko = ic.ker_kappa.at(t).obj;
        if (!coord_is_zero(ko))
            kk[t] = ko;
    }
    ft.ker_kappa = graded_object(ic.sys.p, kk);
    return ft;
}

VanishingScan kappa_vanishing_criterion(const CESystem& sys, int smin, int smax,
                                        int rmax)
{
    VanishingScan vs;
    bool clamp = sys.tail == TailMode::CLAMP;
    int lo = smin, hi = smax, rhi = rmax;
    if (clamp) {
        // E^r_s vanishes outside (a, b], so this scan is complete
        lo = std::min(lo, sys.a);
        hi = std::max(hi, sys.b + 1);
        rhi = std::max(rhi, sys.b - sys.a + 1);
        vs.certified_tail = true;
    }

    std::set<int> degs;
    for (int s = lo; s <= hi; ++s)
        for (int t : graded_degrees(sys.H(s - 1, s)))
            degs.insert(t - 1);

    std::vector<std::pair<int, int>> hits;  // (r, s) with d^r_s nonzero
    std::map<int, std::vector<std::pair<int, int>>> hits_t;
    for (int r = 1; r <= rhi; ++r)
        for (int s = lo; s <= hi; ++s) {
            GradedMap d = page_differential(sys, r, s);
            if (graded_map_is_zero(d))
                continue;
            hits.emplace_back(r, s);
            for (auto& [u, f] : d.comp)
                hits_t[u - 1].emplace_back(r, s);
        }

    auto region_of = [&](const std::vector<std::pair<int, int>>& hs) {
        std::pair<int, int> reg{lo - 1, hi};
        if (!hs.empty()) {
            int amax = hs.front().second - hs.front().first;
            int bmin = hs.front().second;
            for (auto& [r, s] : hs) {
                amax = std::min(amax, s - r);
                bmin = std::max(bmin, s);
            }
            reg = {amax - 1, bmin};
        }
        return reg;
    };

    if (clamp) {
        vs.global = Verdict::APPLIES;
        vs.region = region_of(hits);
    }
    for (int u : degs) {
        auto it = hits_t.find(u);
        bool clean = it == hits_t.end() || it->second.empty();
        if (clamp || clean) {
            vs.per_t[u] = Verdict::APPLIES;
            vs.region_t[u] = region_of(clean ? std::vector<std::pair<int, int>>{}
                                             : it->second);
        } else {
            vs.per_t[u] = Verdict::NOT_APPLICABLE;
        }
    }
    return vs;
}

}  // namespace sseq
