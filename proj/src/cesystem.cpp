#include "sseq/cesystem.hpp"

#include <set>
#include <stdexcept>

#include "sseq/tower.hpp"

namespace sseq {

namespace {

bool is_sentinel(int i) { return i == kNegInf || i == kPosInf; }

std::string idx_str(int i)
{
    if (i == kNegInf)
        return "-inf";
    if (i == kPosInf)
        return "+inf";
    return std::to_string(i);
}

std::string pair_str(int i, int j) { return "(" + idx_str(i) + "," + idx_str(j) + ")"; }

std::string triple_str(int i, int j, int k)
{
    return "(" + idx_str(i) + "," + idx_str(j) + "," + idx_str(k) + ")";
}

GradedMap gen_step(const std::map<std::pair<int, int>, GradedMap>& table,
                   std::pair<int, int> key, const GradedObject& src,
                   const GradedObject& tgt)
{
    auto it = table.find(key);
    if (it != table.end())
        return it->second;
    if (graded_is_zero(src) || graded_is_zero(tgt))
        return graded_zero_map(src, tgt, 0);
    throw std::logic_error("missing eta generator at " + pair_str(key.first, key.second));
}

GradedMap gen_del(const CESystem& sys, int j)
{
    GradedObject src = sys.H(j, sys.top());
    GradedObject tgt = sys.H(sys.bot(), j);
    auto it = sys.delgen.find(j);
    if (it != sys.delgen.end())
        return it->second;
    if (graded_is_zero(src) || graded_is_zero(tgt))
        return graded_zero_map(src, tgt, -1);
    throw std::logic_error("missing boundary generator at " + idx_str(j));
}

}  // namespace

std::vector<int> CESystem::indices() const
{
    std::vector<int> v;
    if (has_neg)
        v.push_back(kNegInf);
    for (int i = a; i <= b; ++i)
        v.push_back(i);
    if (has_pos)
        v.push_back(kPosInf);
    return v;
}

int CESystem::succ(int i) const
{
    if (i == kNegInf)
        return a;
    if (i == b) {
        if (has_pos)
            return kPosInf;
        throw std::out_of_range("succ past the window");
    }
    if (i >= a && i < b)
        return i + 1;
    throw std::out_of_range("succ of index outside the window");
}

bool CESystem::in_window(int i) const { return !is_sentinel(i) && i >= a && i <= b; }

int CESystem::norm(int i) const
{
    if (i == kNegInf) {
        if (has_neg)
            return i;
        if (tail == TailMode::CLAMP)
            return a;
        throw std::out_of_range("no -inf endpoint");
    }
    if (i == kPosInf) {
        if (has_pos)
            return i;
        if (tail == TailMode::CLAMP)
            return b;
        throw std::out_of_range("no +inf endpoint");
    }
    if (i < a)
        switch (tail) {
            case TailMode::CLAMP: return a;
            case TailMode::SYMBOLIC: return i;
            case TailMode::NONE: throw std::out_of_range("window underflow");
        }
    if (i > b)
        switch (tail) {
            case TailMode::CLAMP: return b;
            case TailMode::SYMBOLIC: return i;
            case TailMode::NONE: throw std::out_of_range("window overflow");
        }
    return i;
}

GradedObject CESystem::H(int i, int j) const
{
    if (i > j)
        throw std::invalid_argument("H(i,j) requires i <= j");
    int ni = norm(i), nj = norm(j);
    if (ni == nj)
        return graded_zero(p);
    if ((!is_sentinel(ni) && !in_window(ni)) || (!is_sentinel(nj) && !in_window(nj))) {
        if (!ext_obj)
            throw HypothesesUnmet("no symbolic object extender");
        return ext_obj(ni, nj);
    }
    auto it = obj.find({ni, nj});
    return it == obj.end() ? graded_zero(p) : it->second;
}

GradedMap CESystem::eta(int i, int j, int i2, int j2) const
{
    if (i > j || i2 > j2)
        throw std::invalid_argument("eta requires i <= j at both ends");
    int ni = norm(i), nj = norm(j), ni2 = norm(i2), nj2 = norm(j2);
    if (ni > ni2 || nj > nj2)
        throw std::invalid_argument("eta must not lower indices");
    GradedObject src = H(ni, nj), tgt = H(ni2, nj2);
    if (graded_is_zero(src) || graded_is_zero(tgt))
        return graded_zero_map(src, tgt, 0);
    bool out = false;
    for (int x : {ni, nj, ni2, nj2})
        out = out || (!is_sentinel(x) && !in_window(x));
    if (out) {
        if (!ext_eta)
            throw HypothesesUnmet("no symbolic eta extender");
        return ext_eta(ni, nj, ni2, nj2);
    }
    GradedMap m = graded_identity(src);
    for (int x = nj; x != nj2; x = succ(x))
        m = graded_compose(gen_step(stepj, {ni, x}, H(ni, x), H(ni, succ(x))), m);
    for (int y = ni; y != ni2; y = succ(y))
        m = graded_compose(gen_step(stepi, {y, nj2}, H(y, nj2), H(succ(y), nj2)), m);
    return m;
}

GradedMap CESystem::del(int i, int j, int k) const
{
    if (i > j || j > k)
        throw std::invalid_argument("del requires i <= j <= k");
    int ni = norm(i), nj = norm(j), nk = norm(k);
    GradedObject src = H(nj, nk), tgt = H(ni, nj);
    if (graded_is_zero(src) || graded_is_zero(tgt))
        return graded_zero_map(src, tgt, -1);
    bool out = false;
    for (int x : {ni, nj, nk})
        out = out || (!is_sentinel(x) && !in_window(x));
    if (out) {
        if (!ext_del)
            throw HypothesesUnmet("no symbolic boundary extender");
        return ext_del(ni, nj, nk);
    }
    GradedMap D = gen_del(*this, nj);
    return graded_compose(eta(bot(), nj, ni, nj), graded_compose(D, eta(nj, nk, nj, top())));
}

ValidationReport validate(const CESystem& sys)
{
    ValidationReport rep;
    auto fail = [&](const std::string& msg) {
        rep.ok = false;
        rep.failures.push_back(msg);
    };
    auto guarded = [&](const std::string& ctx, const std::function<void()>& body) {
        try {
            body();
        } catch (const std::exception& e) {
            fail(ctx + ": exception: " + e.what());
        }
    };

    std::vector<int> idx = sys.indices();
    std::set<int> in_idx(idx.begin(), idx.end());

    guarded("storage", [&] {
        for (auto& [key, v] : sys.obj) {
            ++rep.checks;
            if (!in_idx.count(key.first) || !in_idx.count(key.second) ||
                key.first > key.second)
                fail("object stored at invalid pair " + pair_str(key.first, key.second));
            else if (key.first == key.second && !graded_is_zero(v))
                fail("H" + pair_str(key.first, key.second) + " must be zero");
            else if (v.p != sys.p)
                fail("object at " + pair_str(key.first, key.second) + " over wrong prime");
        }
        for (auto& [key, m] : sys.stepj) {
            ++rep.checks;
            auto [i, j] = key;
            if (!in_idx.count(i) || !in_idx.count(j) || i > j || j == sys.top()) {
                fail("eta_j generator at invalid pair " + pair_str(i, j));
                continue;
            }
            if (m.deg != 0 || !(m.src == sys.H(i, j)) || !(m.tgt == sys.H(i, sys.succ(j))))
                fail("eta_j generator at " + pair_str(i, j) + " has wrong shape");
        }
        for (auto& [key, m] : sys.stepi) {
            ++rep.checks;
            auto [i, j] = key;
            if (!in_idx.count(i) || !in_idx.count(j) || i >= j) {
                fail("eta_i generator at invalid pair " + pair_str(i, j));
                continue;
            }
            if (m.deg != 0 || !(m.src == sys.H(i, j)) || !(m.tgt == sys.H(sys.succ(i), j)))
                fail("eta_i generator at " + pair_str(i, j) + " has wrong shape");
        }
        for (auto& [j, m] : sys.delgen) {
            ++rep.checks;
            if (!in_idx.count(j)) {
                fail("boundary generator at invalid index " + idx_str(j));
                continue;
            }
            if (m.deg != -1 || !(m.src == sys.H(j, sys.top())) ||
                !(m.tgt == sys.H(sys.bot(), j)))
                fail("boundary generator at " + idx_str(j) + " has wrong shape");
        }
    });

    // eta functoriality: both single-step paths around each square agree.
    for (int i : idx)
        for (int j : idx) {
            if (i >= j || j == sys.top())
                continue;
            guarded("eta diamond at " + pair_str(i, j), [&] {
                ++rep.checks;
                int i2 = sys.succ(i), j2 = sys.succ(j);
                GradedMap viaJ = graded_compose(
                    gen_step(sys.stepi, {i, j2}, sys.H(i, j2), sys.H(i2, j2)),
                    gen_step(sys.stepj, {i, j}, sys.H(i, j), sys.H(i, j2)));
                GradedMap viaI = graded_compose(
                    gen_step(sys.stepj, {i2, j}, sys.H(i2, j), sys.H(i2, j2)),
                    gen_step(sys.stepi, {i, j}, sys.H(i, j), sys.H(i2, j)));
                if (!(viaJ == viaI))
                    fail("eta diamond fails at " + pair_str(i, j));
            });
        }

    // naturality of the boundary generators along consecutive middle indices
    for (size_t n = 0; n + 1 < idx.size(); ++n) {
        int j = idx[n], j2 = idx[n + 1];
        guarded("boundary naturality at " + idx_str(j), [&] {
            ++rep.checks;
            GradedMap lhs = graded_compose(sys.eta(sys.bot(), j, sys.bot(), j2),
                                           gen_del(sys, j));
            GradedMap rhs = graded_compose(gen_del(sys, j2),
                                           sys.eta(j, sys.top(), j2, sys.top()));
            if (!(lhs == rhs))
                fail("boundary naturality fails at middle index " + idx_str(j));
        });
    }

    // exactness of every triangle, per internal degree, at all three nodes
    for (size_t ni = 0; ni < idx.size(); ++ni)
        for (size_t nj = ni + 1; nj < idx.size(); ++nj)
            for (size_t nk = nj + 1; nk < idx.size(); ++nk) {
                int i = idx[ni], j = idx[nj], k = idx[nk];
                guarded("triangle " + triple_str(i, j, k), [&] {
                    GradedObject X = sys.H(i, j), Y = sys.H(i, k), Z = sys.H(j, k);
                    GradedMap f = sys.eta(i, j, i, k);
                    GradedMap g = sys.eta(i, k, j, k);
                    GradedMap h = sys.del(i, j, k);
                    for (int t : graded_degrees(Y)) {
                        ++rep.checks;
                        if (!sub_eq(sub_image(f.at(t)), sub_kernel(g.at(t))))
                            fail("exactness fails at H" + pair_str(i, k) + " in triangle " +
                                 triple_str(i, j, k) + ", degree " + std::to_string(t));
                    }
                    for (int t : graded_degrees(Z)) {
                        ++rep.checks;
                        if (!sub_eq(sub_image(g.at(t)), sub_kernel(h.at(t))))
                            fail("exactness fails at H" + pair_str(j, k) + " in triangle " +
                                 triple_str(i, j, k) + ", degree " + std::to_string(t));
                    }
                    for (int t : graded_degrees(X)) {
                        ++rep.checks;
                        if (!sub_eq(sub_image(h.at(t + 1)), sub_kernel(f.at(t))))
                            fail("exactness fails at H" + pair_str(i, j) + " in triangle " +
                                 triple_str(i, j, k) + ", degree " + std::to_string(t));
                    }
                });
            }

    return rep;
}

CESystem prolong_right(const CESystem& sys, int probe)
{
    if (sys.has_pos)
        throw std::invalid_argument("system already has a +inf endpoint");
    if (sys.tail == TailMode::NONE)
        throw HypothesesUnmet("prolong_right needs a tail policy");

    CESystem r = sys;
    r.has_pos = true;
    r.delgen.clear();

    struct TL {
        Tower t;
        TowerLimit l;
    };
    std::map<std::pair<int, int>, TL> cache;  // (i, degree) -> colimit tower
    auto tower_at = [&](int i, int t) -> TL& {
        auto key = std::make_pair(i, t);
        auto it = cache.find(key);
        if (it != cache.end())
            return it->second;
        Tower T = make_tower(
            sys.p, Dir::ASC, sys.b, probe,
            [&sys, i, t](int k) { return sys.H(i, sys.b + k).at(t); },
            [&sys, i, t](int k) { return sys.eta(i, sys.b + k, i, sys.b + k + 1).at(t); });
        TowerLimit L = tower_colim(T);
        return cache.emplace(key, TL{std::move(T), L}).first->second;
    };

    std::vector<int> idx = sys.indices();
    std::map<int, std::set<int>> dset;
    for (int i : idx) {
        std::set<int> ts;
        for (int k = 0; k < probe; ++k)
            for (int t : graded_degrees(sys.H(i, sys.b + k)))
                ts.insert(t);
        dset.emplace(i, std::move(ts));
    }

    // H(i, +inf) = colim_j H(i, j), with the window-edge inclusion eta
    std::map<int, GradedObject> hinf;
    for (int i : idx) {
        std::map<int, CoordObject> comp;
        std::map<int, CoordMap> incl;
        for (int t : dset.at(i)) {
            TL& tl = tower_at(i, t);
            comp.emplace(t, tl.l.value);
            incl.emplace(t, colim_incl(tl.t, tl.l, 0));
        }
        GradedObject v = graded_object(sys.p, comp);
        hinf.emplace(i, v);
        if (!graded_is_zero(v))
            r.obj[{i, kPosInf}] = v;
        GradedObject hb = sys.H(i, sys.b);
        if (!graded_is_zero(hb) && !graded_is_zero(v))
            r.stepj[{i, sys.b}] = graded_map(hb, v, 0, incl);
    }

    // eta: H(i, +inf) -> H(succ(i), +inf) induced on the colimits
    for (size_t n = 0; n + 1 < idx.size(); ++n) {
        int i = idx[n], i2 = idx[n + 1];
        const GradedObject& src = hinf.at(i);
        const GradedObject& tgt = hinf.at(i2);
        if (graded_is_zero(src) || graded_is_zero(tgt))
            continue;
        std::map<int, CoordMap> comp;
        for (int t : graded_degrees(src)) {
            TL& A = tower_at(i, t);
            TL& B = tower_at(i2, t);
            if (coord_is_zero(A.l.value) || coord_is_zero(B.l.value))
                continue;
            comp.emplace(t, induced_colim(A.t, A.l, B.t, B.l, [&sys, i, i2, t](int k) {
                return sys.eta(i, sys.b + k, i2, sys.b + k).at(t);
            }));
        }
        r.stepi[{i, kPosInf}] = graded_map(src, tgt, 0, comp);
    }

    // boundary generators D_j: H(j, +inf) -> H(bot, j) induced on the colimits
    for (int j : idx) {
        const GradedObject& src = hinf.at(j);
        GradedObject tgt = sys.H(sys.bot(), j);
        if (graded_is_zero(src) || graded_is_zero(tgt))
            continue;
        std::map<int, CoordMap> comp;
        for (int t : graded_degrees(src)) {
            CoordObject tt = tgt.at(t - 1);
            TL& A = tower_at(j, t);
            if (coord_is_zero(A.l.value) || coord_is_zero(tt))
                continue;
            Tower C = constant_tower(Dir::ASC, sys.b, probe, tt);
            TowerLimit Cl = tower_colim(C);
            comp.emplace(t, induced_colim(A.t, A.l, C, Cl, [&sys, j, t](int k) {
                return sys.del(sys.bot(), j, sys.b + k).at(t);
            }));
        }
        r.delgen[j] = graded_map(src, tgt, -1, comp);
    }

    return r;
}

CESystem restrict_underlying(const CESystem& sys)
{
    CESystem r = sys;
    r.has_neg = r.has_pos = false;
    auto drop = [&](auto& table) {
        for (auto it = table.begin(); it != table.end();)
            if (is_sentinel(it->first.first) || is_sentinel(it->first.second))
                it = table.erase(it);
            else
                ++it;
    };
    drop(r.obj);
    drop(r.stepj);
    drop(r.stepi);
    if (sys.has_pos)
        for (auto it = r.stepj.begin(); it != r.stepj.end();)
            if (it->first.second == sys.b)
                it = r.stepj.erase(it);  // targeted the dropped +inf column
            else
                ++it;
    r.delgen.clear();
    for (int j = sys.a; j <= sys.b; ++j) {
        GradedObject src = sys.H(j, sys.b), tgt = sys.H(sys.a, j);
        if (graded_is_zero(src) || graded_is_zero(tgt))
            continue;
        r.delgen[j] = sys.del(sys.a, j, sys.b);
    }
    return r;
}

}  // namespace sseq
