#include "sseq/filtered.hpp"

#include <random>
#include <stdexcept>
#include <tuple>

namespace sseq {

namespace {

CoordMap fin_map(const LinMap& f)
{
    CoordObject cs = coord_fin(f.src.p, f.src.dim());
    CoordObject ct = coord_fin(f.tgt.p, f.tgt.dim());
    std::map<int, SparseVec> cols;
    for (int c = 0; c < f.src.dim(); ++c) {
        SparseVec v;
        for (int r = 0; r < f.tgt.dim(); ++r)
            if (int x = f.m.at(r, c))
                v[r] = x;
        if (!v.empty())
            cols[c] = std::move(v);
    }
    return coord_map(cs, ct, {}, std::move(cols));
}

// Presentations of the quotient complexes F_j/F_i and of their homology.
struct Builder {
    const FilteredComplex& fc;
    std::map<std::tuple<int, int, int>, SubqPres> qp;
    std::map<std::tuple<int, int, int>, SubqPres> hp;

    const SubqPres& qpres(int i, int j, int t)
    {
        auto key = std::make_tuple(i, j, t);
        auto it = qp.find(key);
        if (it != qp.end())
            return it->second;
        Subquotient q{fc.space(t), fc.filt(j, t), fc.filt(i, t)};
        return qp.emplace(key, subquotient_present(q)).first->second;
    }

    LinMap qdiff(int i, int j, int t)
    {
        return compose(qpres(i, j, t - 1).project,
                       compose(fc.diff(t), qpres(i, j, t).lift));
    }

    const SubqPres& hpres(int i, int j, int t)
    {
        auto key = std::make_tuple(i, j, t);
        auto it = hp.find(key);
        if (it != hp.end())
            return it->second;
        Subquotient q{qpres(i, j, t).space, kernel(qdiff(i, j, t)),
                      image(qdiff(i, j, t + 1))};
        return hp.emplace(key, subquotient_present(q)).first->second;
    }

    // Induced map on homology, through the identity on the ambient C_t.
    LinMap hmap(int i, int j, int i2, int j2, int t)
    {
        LinMap rep = compose(qpres(i, j, t).lift, hpres(i, j, t).lift);
        LinMap cls = compose(hpres(i2, j2, t).project, qpres(i2, j2, t).project);
        return compose(cls, rep);
    }

    // Connecting map H(j, +inf)_t -> H(-inf, j)_{t-1}: lift a cycle of C/F_j
    // to C, apply d (lands in F_j), read the class in H(F_j).
    LinMap dmap(int j, int t)
    {
        LinMap rep = compose(qpres(j, kPosInf, t).lift, hpres(j, kPosInf, t).lift);
        LinMap cls = compose(hpres(kNegInf, j, t - 1).project,
                             qpres(kNegInf, j, t - 1).project);
        return compose(cls, compose(fc.diff(t), rep));
    }
};

}  // namespace

FinSpace FilteredComplex::space(int t) const
{
    auto it = C.find(t);
    return it == C.end() ? FinSpace(p, 0) : it->second;
}

LinMap FilteredComplex::diff(int t) const
{
    auto it = d.find(t);
    return it == d.end() ? LinMap::zero(space(t), space(t - 1)) : it->second;
}

Subspace FilteredComplex::filt(int s, int t) const
{
    if (s == kNegInf)
        return zero_subspace(space(t));
    if (s == kPosInf)
        return full_subspace(space(t));
    int cs = std::max(a, std::min(b, s));
    auto it = F.find({cs, t});
    return it == F.end() ? zero_subspace(space(t)) : it->second;
}

void check_filtered(const FilteredComplex& fc)
{
    if (fc.a > fc.b || fc.t0 > fc.t1)
        throw std::invalid_argument("filtered complex: empty window or degree range");
    for (int t = fc.t0; t < fc.t1; ++t) {
        LinMap dt = fc.diff(t);
        if (!(dt.src == fc.space(t)) || !(dt.tgt == fc.space(t - 1)))
            throw std::invalid_argument("filtered complex: differential shape at degree " +
                                        std::to_string(t));
        if (!compose(fc.diff(t - 1), dt).m.is_zero())
            throw std::invalid_argument("filtered complex: d.d != 0 at degree " +
                                        std::to_string(t));
        if (!(fc.filt(fc.b, t) == full_subspace(fc.space(t))))
            throw std::invalid_argument("filtered complex: F_b not everything at degree " +
                                        std::to_string(t));
        for (int s = fc.a; s <= fc.b; ++s) {
            if (!(fc.filt(s, t).ambient == fc.space(t)))
                throw std::invalid_argument("filtered complex: bad ambient at F(" +
                                            std::to_string(s) + "," + std::to_string(t) + ")");
            if (s < fc.b && !subspace_leq(fc.filt(s, t), fc.filt(s + 1, t)))
                throw std::invalid_argument("filtered complex: filtration not ascending at F(" +
                                            std::to_string(s) + "," + std::to_string(t) + ")");
            if (!subspace_leq(image_of(dt, fc.filt(s, t)), fc.filt(s, t - 1)))
                throw std::invalid_argument("filtered complex: d does not respect F(" +
                                            std::to_string(s) + "," + std::to_string(t) + ")");
        }
    }
}

CESystem from_filtered_complex(const FilteredComplex& fc)
{
    check_filtered(fc);
    Builder bl{fc};

    CESystem s;
    s.p = fc.p;
    s.a = fc.a;
    s.b = fc.b;
    s.has_neg = s.has_pos = true;
    s.tail = TailMode::CLAMP;

    std::vector<int> idx = s.indices();
    std::map<std::pair<int, int>, GradedObject> G;
    auto gobj = [&](int i, int j) -> const GradedObject& {
        auto key = std::make_pair(i, j);
        auto it = G.find(key);
        if (it != G.end())
            return it->second;
        std::map<int, CoordObject> comp;
        for (int t = fc.t0; t < fc.t1; ++t) {
            int n = bl.hpres(i, j, t).space.dim();
            if (n)
                comp.emplace(t, coord_fin(fc.p, n));
        }
        return G.emplace(key, graded_object(fc.p, comp)).first->second;
    };
    auto gmap = [&](int i, int j, int i2, int j2) {
        const GradedObject& src = gobj(i, j);
        const GradedObject& tgt = gobj(i2, j2);
        std::map<int, CoordMap> comp;
        for (int t : graded_degrees(src)) {
            if (coord_is_zero(tgt.at(t)))
                continue;
            CoordMap m = fin_map(bl.hmap(i, j, i2, j2, t));
            if (!map_is_zero(m))
                comp.emplace(t, m);
        }
        return graded_map(src, tgt, 0, comp);
    };

    for (size_t x = 0; x < idx.size(); ++x)
        for (size_t y = x + 1; y < idx.size(); ++y) {
            int i = idx[x], j = idx[y];
            const GradedObject& v = gobj(i, j);
            if (graded_is_zero(v))
                continue;
            s.obj[{i, j}] = v;
            if (y + 1 < idx.size() && !graded_is_zero(gobj(i, idx[y + 1])))
                s.stepj[{i, j}] = gmap(i, j, i, idx[y + 1]);
            if (x + 1 < idx.size() && idx[x + 1] < j &&
                !graded_is_zero(gobj(idx[x + 1], j)))
                s.stepi[{i, j}] = gmap(i, j, idx[x + 1], j);
        }

    for (int j = fc.a; j <= fc.b; ++j) {
        const GradedObject& src = gobj(j, kPosInf);
        const GradedObject& tgt = gobj(kNegInf, j);
        if (graded_is_zero(src) || graded_is_zero(tgt))
            continue;
        std::map<int, CoordMap> comp;
        for (int t : graded_degrees(src)) {
            if (coord_is_zero(tgt.at(t - 1)))
                continue;
            CoordMap m = fin_map(bl.dmap(j, t));
            if (!map_is_zero(m))
                comp.emplace(t, m);
        }
        s.delgen[j] = graded_map(src, tgt, -1, comp);
    }
    return s;
}

std::map<int, int> homology_dims(const FilteredComplex& fc)
{
    std::map<int, int> out;
    for (int t = fc.t0; t < fc.t1; ++t) {
        int n = kernel(fc.diff(t)).dim() - image(fc.diff(t + 1)).dim();
        if (n)
            out[t] = n;
    }
    return out;
}

FilteredComplex random_filtered_complex(std::uint64_t seed, const RandomParams& par)
{
    if (par.window < 1 || par.max_dim < 0 || par.degrees < 1)
        throw std::invalid_argument("random_filtered_complex: bad parameters");
    std::mt19937_64 rng(seed);
    auto pick = [&](int n) { return int(rng() % std::uint64_t(n)); };

    FilteredComplex fc;
    fc.p = par.p;
    fc.t0 = 0;
    fc.t1 = par.degrees;
    fc.a = 0;
    fc.b = par.window;

    std::map<int, std::vector<int>> level;  // filtration level per basis vector
    for (int t = 0; t < par.degrees; ++t) {
        int n = pick(par.max_dim + 1);
        fc.C[t] = FinSpace(par.p, n);
        auto& lv = level[t];
        for (int c = 0; c < n; ++c)
            lv.push_back(1 + pick(par.window));
    }

    for (int t = 0; t < par.degrees; ++t) {
        int n = fc.space(t).dim();
        for (int s = 0; s <= par.window; ++s) {
            Mat cols(par.p, n, 0);
            for (int c = 0; c < n; ++c)
                if (level[t][c] <= s) {
                    Mat e(par.p, n, 1);
                    e.at(c, 0) = 1;
                    cols = cols.cols == 0 ? e : cols.hconcat(e);
                }
            fc.F[{s, t}] = span(fc.space(t), cols);
        }
    }

    for (int t = 1; t < par.degrees; ++t) {
        FinSpace src = fc.space(t), tgt = fc.space(t - 1);
        Mat m(par.p, tgt.dim(), src.dim());
        Subspace cycles = kernel(fc.diff(t - 1));
        for (int c = 0; c < src.dim(); ++c) {
            Subspace allowed = subspace_intersect(cycles, fc.filt(level[t][c], t - 1));
            for (int k = 0; k < allowed.dim(); ++k) {
                int coeff = pick(par.p);
                if (!coeff)
                    continue;
                for (int r = 0; r < tgt.dim(); ++r)
                    m.at(r, c) = normalize_mod(m.at(r, c) + coeff * allowed.basis.at(r, k),
                                               par.p);
            }
        }
        fc.d[t] = LinMap(src, tgt, m);
    }
    return fc;
}

CESystem random_system(std::uint64_t seed, const RandomParams& par)
{
    return from_filtered_complex(random_filtered_complex(seed, par));
}

}  // namespace sseq
