#include "sseq/coordcat.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace sseq {

namespace {

void sv_clean(SparseVec& v, int p)
{
    for (auto it = v.begin(); it != v.end();) {
        it->second = normalize_mod(it->second, p);
        if (it->second == 0)
            it = v.erase(it);
        else
            ++it;
    }
}

SparseVec sv_restrict(const SparseVec& v, const IndexSet& s)
{
    SparseVec out;
    for (auto& [i, c] : v)
        if (s.contains(i))
            out[i] = c;
    return out;
}

void sv_axpy(SparseVec& acc, int c, const SparseVec& v, int p)
{
    for (auto& [i, a] : v)
        acc[i] = normalize_mod(acc[i] + (long long)c * a, p);
    sv_clean(acc, p);
}

std::vector<int> finite_elems(const IndexSet& s)
{
    if (!s.is_finite())
        throw TamenessViolation("expected finite index set");
    return s.elems;
}

// default column of f at i, from diagonals only
SparseVec default_column(const CoordMap& f, int i)
{
    SparseVec col;
    for (auto& [d, c] : f.diag)
        if (f.tgt.s.contains(i + d))
            col[i + d] = normalize_mod(col[i + d] + c, f.src.p);
    sv_clean(col, f.src.p);
    return col;
}

void canonicalize(CoordMap& f)
{
    int p = f.src.p;
    if (f.tgt.p != p)
        throw TamenessViolation("field mismatch");
    for (auto it = f.diag.begin(); it != f.diag.end();) {
        it->second = normalize_mod(it->second, p);
        if (it->second == 0)
            it = f.diag.erase(it);
        else
            ++it;
    }
    for (auto it = f.except.begin(); it != f.except.end();) {
        if (!f.src.s.contains(it->first)) {
            it = f.except.erase(it);
            continue;
        }
        it->second = sv_restrict(it->second, f.tgt.s);
        sv_clean(it->second, p);
        ++it;
    }
    if (coord_is_zero(f.src) || coord_is_zero(f.tgt)) {
        f.diag.clear();
        f.except.clear();
        return;
    }

    if (f.tgt.kind == Kind::PMS) {
        // finitely supported contributions vanish in the quotient
        if (f.src.kind == Kind::SUM) {
            f.diag.clear();
            f.except.clear();
            return;
        }
        f.except.clear();
        for (auto it = f.diag.begin(); it != f.diag.end();) {
            IndexSet eff = set_intersect(f.src.s, f.tgt.s.shifted(-it->first));
            if (eff.is_finite())
                it = f.diag.erase(it);
            else
                ++it;
        }
        return;
    }

    if (f.src.kind == Kind::PMS) {
        // pms admits no nonzero tame map into sum/prod/fin targets
        if (!f.diag.empty() || !f.except.empty())
            throw TamenessViolation("nonzero map out of pms into " + to_string(f.tgt));
        return;
    }

    if (f.src.s.is_finite()) {
        std::map<int, SparseVec> cols;
        for (int i : f.src.s.elems) {
            SparseVec col;
            auto e = f.except.find(i);
            if (e != f.except.end())
                col = e->second;
            else
                col = default_column(f, i);
            if (!col.empty())
                cols[i] = std::move(col);
        }
        f.diag.clear();
        f.except = std::move(cols);
        return;
    }

    // infinite source: fold diagonals whose effective range is finite
    std::set<int> fold;
    std::vector<int> foldable;
    for (auto& [d, c] : f.diag) {
        IndexSet eff = set_intersect(f.src.s, f.tgt.s.shifted(-d));
        if (eff.is_finite()) {
            foldable.push_back(d);
            for (int i : eff.elems)
                if (!f.except.count(i))
                    fold.insert(i);
        }
    }
    if (!foldable.empty()) {
        std::map<int, SparseVec> folded;
        for (int i : fold)
            folded[i] = default_column(f, i);
        for (int d : foldable)
            f.diag.erase(d);
        for (auto& [i, col] : folded) {
            SparseVec c = sv_restrict(col, f.tgt.s);
            sv_clean(c, p);
            f.except[i] = std::move(c);
        }
    }
    if (!f.diag.empty() && f.src.kind == Kind::PROD && f.tgt.kind == Kind::SUM)
        throw TamenessViolation("prod does not map to sum along an infinite diagonal");
    for (auto it = f.except.begin(); it != f.except.end();) {
        if (it->second == default_column(f, it->first))
            it = f.except.erase(it);
        else
            ++it;
    }
}

}  // namespace

CoordObject make_coord(int p, Kind kind, IndexSet s)
{
    CoordObject a{p, kind, std::move(s)};
    if (a.s.is_finite()) {
        if (a.kind == Kind::PMS)
            return CoordObject{p, Kind::SUM, IndexSet::empty()};
        a.kind = Kind::SUM;
    }
    return a;
}

CoordObject coord_zero(int p) { return make_coord(p, Kind::SUM, IndexSet::empty()); }

CoordObject coord_fin(int p, int n) { return make_coord(p, Kind::SUM, IndexSet::range(0, n)); }

bool coord_is_zero(const CoordObject& a) { return a.s.is_empty(); }

bool coord_is_finite(const CoordObject& a) { return a.s.is_finite(); }

std::optional<int> coord_dim(const CoordObject& a)
{
    if (a.s.is_finite())
        return a.s.size();
    return std::nullopt;
}

std::string to_string(const CoordObject& a)
{
    if (coord_is_zero(a))
        return "0";
    if (a.s.is_finite()) {
        bool contiguous0 = a.s.elems.front() == 0 &&
                           a.s.elems.back() == int(a.s.elems.size()) - 1;
        if (contiguous0)
            return "fin(" + std::to_string(a.s.size()) + ")";
        return "sum(" + to_string(a.s) + ")";
    }
    const char* k = a.kind == Kind::SUM ? "sum" : a.kind == Kind::PROD ? "prod" : "pms";
    return std::string(k) + "(" + to_string(a.s) + ")";
}

CoordObject parse_coord(int p, const std::string& text)
{
    std::string t = text;
    t.erase(std::remove_if(t.begin(), t.end(), [](char c) { return c == ' '; }), t.end());
    if (t == "0")
        return coord_zero(p);
    if (t.rfind("fin(", 0) == 0 && t.back() == ')')
        return coord_fin(p, std::stoi(t.substr(4, t.size() - 5)));
    Kind k;
    size_t n;
    if (t.rfind("sum(", 0) == 0) {
        k = Kind::SUM;
        n = 4;
    } else if (t.rfind("prod(", 0) == 0) {
        k = Kind::PROD;
        n = 5;
    } else if (t.rfind("pms(", 0) == 0) {
        k = Kind::PMS;
        n = 4;
    } else {
        throw std::runtime_error("bad object: " + text);
    }
    if (t.back() != ')')
        throw std::runtime_error("bad object: " + text);
    return make_coord(p, k, parse_index_set(t.substr(n, t.size() - n - 1)));
}

CoordMap coord_map(CoordObject src, CoordObject tgt, std::map<int, int> diag,
                   std::map<int, SparseVec> except)
{
    CoordMap f{std::move(src), std::move(tgt), std::move(diag), std::move(except)};
    canonicalize(f);
    return f;
}

CoordMap coord_zero_map(const CoordObject& src, const CoordObject& tgt)
{
    return coord_map(src, tgt, {}, {});
}

CoordMap coord_identity(const CoordObject& a) { return coord_map(a, a, {{0, 1}}, {}); }

CoordMap coord_diagonal(const CoordObject& src, const CoordObject& tgt, int d, int c)
{
    return coord_map(src, tgt, {{d, c}}, {});
}

bool map_is_zero(const CoordMap& f) { return f.diag.empty() && f.except.empty(); }

SparseVec coord_column(const CoordMap& f, int i)
{
    if (!f.src.s.contains(i))
        return {};
    auto e = f.except.find(i);
    if (e != f.except.end())
        return e->second;
    return default_column(f, i);
}

SparseVec coord_apply(const CoordMap& f, const SparseVec& v)
{
    SparseVec out;
    for (auto& [i, c] : v)
        sv_axpy(out, c, coord_column(f, i), f.src.p);
    return out;
}

CoordMap coord_compose(const CoordMap& g, const CoordMap& f)
{
    if (!(f.tgt == g.src))
        throw TamenessViolation("compose: middle objects differ");
    if (f.src.s.is_finite()) {
        std::map<int, SparseVec> cols;
        for (int i : f.src.s.elems) {
            SparseVec col = coord_apply(g, coord_column(f, i));
            if (!col.empty())
                cols[i] = std::move(col);
        }
        return coord_map(f.src, g.tgt, {}, std::move(cols));
    }
    std::map<int, int> conv;
    for (auto& [d1, c1] : f.diag)
        for (auto& [d2, c2] : g.diag)
            conv[d1 + d2] = normalize_mod(conv[d1 + d2] + (long long)c1 * c2, f.src.p);
    std::set<int> cand;
    for (auto& [i, col] : f.except)
        cand.insert(i);
    for (auto& [j, col] : g.except)
        for (auto& [d, c] : f.diag)
            if (f.src.s.contains(j - d))
                cand.insert(j - d);
    for (auto& [d, c] : f.diag) {
        IndexSet clipped = set_difference(f.src.s, f.tgt.s.shifted(-d));
        if (!clipped.is_finite())
            throw TamenessViolation("compose: unbounded clipping");
        for (int i : clipped.elems)
            cand.insert(i);
    }
    std::map<int, SparseVec> except;
    for (int i : cand)
        except[i] = coord_apply(g, coord_column(f, i));
    return coord_map(f.src, g.tgt, std::move(conv), std::move(except));
}

CoordMap coord_add(const CoordMap& f, const CoordMap& g)
{
    if (!(f.src == g.src) || !(f.tgt == g.tgt))
        throw TamenessViolation("add: shape mismatch");
    std::map<int, int> diag = f.diag;
    for (auto& [d, c] : g.diag)
        diag[d] = normalize_mod(diag[d] + c, f.src.p);
    std::set<int> keys;
    for (auto& [i, col] : f.except)
        keys.insert(i);
    for (auto& [i, col] : g.except)
        keys.insert(i);
    std::map<int, SparseVec> except;
    for (int i : keys) {
        SparseVec col = coord_column(f, i);
        sv_axpy(col, 1, coord_column(g, i), f.src.p);
        except[i] = std::move(col);
    }
    return coord_map(f.src, f.tgt, std::move(diag), std::move(except));
}

CoordMap coord_scale(const CoordMap& f, int c)
{
    std::map<int, int> diag = f.diag;
    for (auto& [d, v] : diag)
        v = normalize_mod((long long)v * c, f.src.p);
    std::map<int, SparseVec> except = f.except;
    for (auto& [i, col] : except)
        for (auto& [j, v] : col)
            v = normalize_mod((long long)v * c, f.src.p);
    return coord_map(f.src, f.tgt, std::move(diag), std::move(except));
}

CoordMap coord_shift(const CoordMap& f, int d)
{
    CoordObject src = make_coord(f.src.p, f.src.kind, f.src.s.shifted(d));
    CoordObject tgt = make_coord(f.tgt.p, f.tgt.kind, f.tgt.s.shifted(d));
    std::map<int, SparseVec> except;
    for (auto& [i, col] : f.except) {
        SparseVec c2;
        for (auto& [j, c] : col)
            c2[j + d] = c;
        except[i + d] = std::move(c2);
    }
    return coord_map(std::move(src), std::move(tgt), f.diag, std::move(except));
}

namespace {

struct Window {
    std::vector<int> idx;           // sorted
    std::map<int, int> pos;

    explicit Window(std::set<int> s)
    {
        idx.assign(s.begin(), s.end());
        for (size_t k = 0; k < idx.size(); ++k)
            pos[idx[k]] = int(k);
    }
    int size() const { return int(idx.size()); }
};

Mat window_matrix(const CoordMap& f, const std::vector<int>& srcIdx, const Window& tgt)
{
    Mat m(f.src.p, tgt.size(), int(srcIdx.size()));
    for (size_t c = 0; c < srcIdx.size(); ++c)
        for (auto& [j, v] : coord_column(f, srcIdx[c])) {
            auto it = tgt.pos.find(j);
            if (it != tgt.pos.end())
                m.at(it->second, int(c)) = v;
        }
    return m;
}

SparseVec mat_col_to_sv(const Mat& m, int c, const std::vector<int>& rowIdx, int p)
{
    SparseVec v;
    for (int r = 0; r < m.rows; ++r)
        if (m.at(r, c))
            v[rowIdx[r]] = m.at(r, c);
    (void)p;
    return v;
}

// pivot row (first nonzero) of each column of a reduced-echelon basis
std::vector<int> basis_pivot_rows(const Mat& basis)
{
    std::vector<int> out;
    for (int c = 0; c < basis.cols; ++c) {
        int r = 0;
        while (r < basis.rows && basis.at(r, c) == 0)
            ++r;
        out.push_back(r);
    }
    return out;
}

Subobject sub_from_basis(const CoordObject& ambient, const Mat& basis,
                         const std::vector<int>& rowIdx)
{
    std::vector<int> piv = basis_pivot_rows(basis);
    std::vector<int> labels;
    std::map<int, SparseVec> cols;
    for (int c = 0; c < basis.cols; ++c) {
        int label = rowIdx[piv[c]];
        labels.push_back(label);
        cols[label] = mat_col_to_sv(basis, c, rowIdx, ambient.p);
    }
    CoordObject obj = make_coord(ambient.p, Kind::SUM, IndexSet::finite(labels));
    return Subobject{obj, coord_map(obj, ambient, {}, std::move(cols))};
}

// coker of a map whose image is the (canonical, reduced-echelon) window
// subspace spanned by `imageBasis` over rows `tgtIdx`, together with the
// free tail `tail` (target indices hit bijectively outside the window)
std::pair<CoordObject, CoordMap> coker_from_window(const CoordObject& tgt,
                                                   const Mat& imageBasis,
                                                   const std::vector<int>& tgtIdx,
                                                   const IndexSet& tail)
{
    std::vector<int> piv = basis_pivot_rows(imageBasis);
    std::vector<int> pivotLabels;
    for (int pr : piv)
        pivotLabels.push_back(tgtIdx[pr]);
    IndexSet removed = set_union(tail, IndexSet::finite(pivotLabels));
    IndexSet cs = set_difference(tgt.s, removed);
    CoordObject coker = make_coord(tgt.p, tgt.kind, cs);
    std::map<int, SparseVec> except;
    std::set<int> pivSet(piv.begin(), piv.end());
    for (int c = 0; c < imageBasis.cols; ++c) {
        SparseVec col;
        for (int r = 0; r < imageBasis.rows; ++r)
            if (!pivSet.count(r) && imageBasis.at(r, c))
                col[tgtIdx[r]] = normalize_mod(-imageBasis.at(r, c), tgt.p);
        except[tgtIdx[piv[c]]] = std::move(col);
    }
    CoordMap proj = coord_map(tgt, coker, {{0, 1}}, std::move(except));
    return {coker, proj};
}

CoordKic kic_trivial(const CoordMap& f)
{
    CoordKic out;
    out.kernel = sub_full(f.src);
    out.image = sub_zero(f.tgt);
    out.coker = f.tgt;
    out.proj = coord_identity(f.tgt);
    return out;
}

CoordKic kic_impl(const CoordMap& f, bool need_coker)
{
    if (map_is_zero(f))
        return kic_trivial(f);
    CoordKic out;

    if (f.src.s.is_finite()) {
        std::vector<int> srcIdx = f.src.s.elems;
        std::set<int> supp;
        for (int i : srcIdx)
            for (auto& [j, c] : coord_column(f, i))
                supp.insert(j);
        Window wt(supp);
        Mat m = window_matrix(f, srcIdx, wt);
        FinSpace fs(f.src.p, int(srcIdx.size())), ft(f.src.p, wt.size());
        LinMap lm(fs, ft, m);
        Mat kb = kernel(lm).basis;
        out.kernel = sub_from_basis(f.src, kb, srcIdx);
        Mat ib = image(lm).basis;
        out.image = sub_from_basis(f.tgt, ib, wt.idx);
        if (need_coker) {
            auto [ck, pr] = coker_from_window(f.tgt, ib, wt.idx, IndexSet::empty());
            out.coker = ck;
            out.proj = pr;
        }
        return out;
    }

    if (f.diag.empty()) {
        // finitely many exceptional columns on an infinite source
        std::vector<int> srcIdx;
        for (auto& [i, col] : f.except)
            srcIdx.push_back(i);
        std::set<int> supp;
        for (auto& [i, col] : f.except)
            for (auto& [j, c] : col)
                supp.insert(j);
        Window wt(supp);
        Mat m = window_matrix(f, srcIdx, wt);
        FinSpace fs(f.src.p, int(srcIdx.size())), ft(f.src.p, wt.size());
        LinMap lm(fs, ft, m);
        Mat kb = kernel(lm).basis;
        std::vector<int> piv = basis_pivot_rows(kb);
        std::vector<int> labels;
        std::map<int, SparseVec> kcols;
        for (int c = 0; c < kb.cols; ++c) {
            int label = srcIdx[piv[c]];
            labels.push_back(label);
            kcols[label] = mat_col_to_sv(kb, c, srcIdx, f.src.p);
        }
        IndexSet ks = set_union(set_difference(f.src.s, IndexSet::finite(srcIdx)),
                                IndexSet::finite(labels));
        CoordObject kobj = make_coord(f.src.p, f.src.kind, ks);
        out.kernel = Subobject{kobj, coord_map(kobj, f.src, {{0, 1}}, std::move(kcols))};
        Mat ib = image(lm).basis;
        out.image = sub_from_basis(f.tgt, ib, wt.idx);
        if (need_coker) {
            auto [ck, pr] = coker_from_window(f.tgt, ib, wt.idx, IndexSet::empty());
            out.coker = ck;
            out.proj = pr;
        }
        return out;
    }

    if (f.diag.size() > 1)
        throw TamenessViolation("kic across multiple diagonals");
    int d = f.diag.begin()->first;

    if (f.src.kind == Kind::PMS) {
        // pure diagonal between pms objects
        IndexSet hit = set_intersect(f.src.s.shifted(d), f.tgt.s);
        IndexSet k0 = set_difference(f.src.s, f.tgt.s.shifted(-d));
        CoordObject ker = make_coord(f.src.p, Kind::PMS, k0);
        out.kernel = Subobject{ker, coord_diagonal(ker, f.src, 0, 1)};
        CoordObject im = make_coord(f.src.p, Kind::PMS, hit);
        out.image = Subobject{im, coord_diagonal(im, f.tgt, 0, 1)};
        if (need_coker) {
            out.coker = make_coord(f.src.p, Kind::PMS, set_difference(f.tgt.s, hit));
            out.proj = coord_diagonal(f.tgt, out.coker, 0, 1);
        }
        return out;
    }
    if (f.tgt.kind == Kind::PMS) {
        // prod -> pms along one diagonal (sum -> pms is zero after
        // canonicalization, so the source is prod here)
        IndexSet hit = set_intersect(f.src.s.shifted(d), f.tgt.s);
        CoordObject ker = make_coord(f.src.p, Kind::SUM, f.src.s);
        out.kernel = Subobject{ker, coord_diagonal(ker, f.src, 0, 1)};
        CoordObject im = make_coord(f.src.p, Kind::PMS, hit);
        out.image = Subobject{im, coord_diagonal(im, f.tgt, 0, 1)};
        if (need_coker) {
            out.coker = make_coord(f.src.p, Kind::PMS, set_difference(f.tgt.s, hit));
            out.proj = coord_diagonal(f.tgt, out.coker, 0, 1);
        }
        return out;
    }

    // one diagonal with a clean injective tail, plus a finite window
    std::set<int> wsrc;
    for (auto& [i, col] : f.except)
        wsrc.insert(i);
    IndexSet k0 = set_difference(f.src.s, f.tgt.s.shifted(-d));
    for (int i : finite_elems(k0))
        wsrc.insert(i);
    std::set<int> wexc;
    for (auto& [i, col] : f.except)
        for (auto& [j, c] : col)
            wexc.insert(j);
    for (int j : wexc)
        if (f.src.s.contains(j - d))
            wsrc.insert(j - d);
    std::vector<int> srcIdx(wsrc.begin(), wsrc.end());
    std::set<int> wtgt = wexc;
    for (int i : srcIdx)
        if (f.tgt.s.contains(i + d))
            wtgt.insert(i + d);
    Window wt(wtgt);
    Mat m = window_matrix(f, srcIdx, wt);
    FinSpace fs(f.src.p, int(srcIdx.size())), ft(f.src.p, wt.size());
    LinMap lm(fs, ft, m);
    out.kernel = sub_from_basis(f.src, kernel(lm).basis, srcIdx);
    Mat ib = image(lm).basis;
    IndexSet tail = set_difference(f.src.s, IndexSet::finite(srcIdx)).shifted(d);
    std::vector<int> ipiv = basis_pivot_rows(ib);
    std::vector<int> ilabels;
    std::map<int, SparseVec> icols;
    for (int c = 0; c < ib.cols; ++c) {
        int label = wt.idx[ipiv[c]];
        ilabels.push_back(label);
        icols[label] = mat_col_to_sv(ib, c, wt.idx, f.src.p);
    }
    CoordObject iobj =
        make_coord(f.src.p, f.src.kind, set_union(tail, IndexSet::finite(ilabels)));
    out.image = Subobject{iobj, coord_map(iobj, f.tgt, {{0, 1}}, std::move(icols))};
    if (need_coker) {
        if (f.src.kind == Kind::SUM && f.tgt.kind == Kind::PROD && !tail.is_finite())
            throw TamenessViolation("coker of sum inside prod is not coordinatized");
        auto [ck, pr] = coker_from_window(f.tgt, ib, wt.idx, tail);
        out.coker = ck;
        out.proj = pr;
    }
    return out;
}

}  // namespace

// solve f(x) = v on a finite window; nullopt if the window system is
// inconsistent, throws if the window does not close
std::optional<SparseVec> solve_sparse(const CoordMap& f, const SparseVec& v)
{
    if (v.empty())
        return SparseVec{};
    std::set<int> X, T;
    for (auto& [j, c] : v)
        T.insert(j);
    if (f.src.s.is_finite()) {
        for (int i : f.src.s.elems)
            X.insert(i);
        for (int i : X)
            for (auto& [j, c] : coord_column(f, i))
                T.insert(j);
    } else {
        if (f.diag.size() > 1 && f.src.kind == Kind::PROD)
            throw TamenessViolation("solve across multiple diagonals on prod");
        for (auto& [i, col] : f.except) {
            X.insert(i);
            for (auto& [j, c] : col)
                T.insert(j);
        }
        for (int round = 0; round < 8; ++round) {
            bool changed = false;
            std::set<int> X2 = X;
            for (int j : T)
                for (auto& [d, c] : f.diag)
                    if (f.src.s.contains(j - d))
                        X2.insert(j - d);
            for (int i : X2)
                if (!X.count(i)) {
                    X.insert(i);
                    changed = true;
                    for (auto& [j, c] : coord_column(f, i))
                        T.insert(j);
                }
            if (!changed)
                break;
            if (round == 7)
                throw HypothesesUnmet("window solve did not close");
        }
    }
    std::vector<int> srcIdx(X.begin(), X.end());
    Window wt((std::set<int>(T)));
    Mat m = window_matrix(f, srcIdx, wt);
    Mat b(f.src.p, wt.size(), 1);
    for (auto& [j, c] : v) {
        auto it = wt.pos.find(j);
        if (it == wt.pos.end())
            return std::nullopt;
        b.at(it->second, 0) = normalize_mod(c, f.src.p);
    }
    auto x = solve(m, b);
    if (!x)
        return std::nullopt;
    SparseVec out;
    for (size_t k = 0; k < srcIdx.size(); ++k)
        if (x->at(int(k), 0))
            out[srcIdx[k]] = x->at(int(k), 0);
    return out;
}

CoordKic coord_kic(const CoordMap& f) { return kic_impl(f, true); }

Subobject sub_full(const CoordObject& a) { return Subobject{a, coord_identity(a)}; }

Subobject sub_zero(const CoordObject& a)
{
    CoordObject z = coord_zero(a.p);
    return Subobject{z, coord_zero_map(z, a)};
}

Subobject sub_image(const CoordMap& f) { return kic_impl(f, false).image; }

Subobject sub_kernel(const CoordMap& f) { return kic_impl(f, false).kernel; }

Subobject sub_image_of(const CoordMap& f, const Subobject& u)
{
    return sub_image(coord_compose(f, u.incl));
}

Subobject sub_preimage(const CoordMap& f, const Subobject& u)
{
    if (f.src.s.is_finite() && !map_is_zero(f)) {
        // image of f is finitely supported; cut u down to that window
        std::set<int> supp;
        for (int i : f.src.s.elems)
            for (auto& [j, c] : coord_column(f, i))
                supp.insert(j);
        std::vector<int> srcIdx = f.src.s.elems;
        Window wt(supp);
        Mat m = window_matrix(f, srcIdx, wt);
        std::vector<int> ucols;
        for (int x : u.obj.s.is_finite()
                         ? u.obj.s.elems
                         : [&] {
                               std::vector<int> xs;
                               for (auto& [i, col] : u.incl.except)
                                   xs.push_back(i);
                               for (auto& [d, c] : u.incl.diag)
                                   for (int j : wt.idx)
                                       if (u.obj.s.contains(j - d))
                                           xs.push_back(j - d);
                               std::sort(xs.begin(), xs.end());
                               xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
                               return xs;
                           }()) {
            SparseVec col = coord_column(u.incl, x);
            bool inside = true;
            for (auto& [j, c] : col)
                if (!supp.count(j))
                    inside = false;
            if (inside && !col.empty())
                ucols.push_back(x);
        }
        Mat ub(f.src.p, wt.size(), int(ucols.size()));
        for (size_t c = 0; c < ucols.size(); ++c)
            for (auto& [j, v] : coord_column(u.incl, ucols[c]))
                ub.at(wt.pos.at(j), int(c)) = v;
        FinSpace fs(f.src.p, int(srcIdx.size())), ft(f.src.p, wt.size());
        LinMap lm(fs, ft, m);
        Subspace uw = span(ft, ub);
        Subspace pre = preimage(lm, uw);
        return sub_from_basis(f.src, pre.basis, srcIdx);
    }
    if (map_is_zero(f))
        return sub_full(f.src);
    CoordMap proj = coord_kic(u.incl).proj;
    return sub_kernel(coord_compose(proj, f));
}

bool sub_leq(const Subobject& u, const Subobject& v)
{
    try {
        lift_through_mono(v.incl, u.incl);
        return true;
    } catch (const HypothesesUnmet&) {
        return false;
    }
}

bool sub_eq(const Subobject& u, const Subobject& v)
{
    return sub_leq(u, v) && sub_leq(v, u);
}

Subobject sub_intersect(const Subobject& u, const Subobject& v)
{
    Subobject w = sub_preimage(u.incl, v);
    return Subobject{w.obj, coord_compose(u.incl, w.incl)};
}

CoordMap lift_through_mono(const CoordMap& mono, const CoordMap& f)
{
    if (!(f.tgt == mono.tgt))
        throw TamenessViolation("lift: targets differ");
    if (map_is_zero(f))
        return coord_zero_map(f.src, mono.src);
    CoordMap g;
    if (f.src.s.is_finite()) {
        std::map<int, SparseVec> cols;
        for (int i : f.src.s.elems) {
            SparseVec col = coord_column(f, i);
            if (col.empty())
                continue;
            auto x = solve_sparse(mono, col);
            if (!x)
                throw HypothesesUnmet("does not factor through the subobject");
            cols[i] = *x;
        }
        g = coord_map(f.src, mono.src, {}, std::move(cols));
    } else if (mono.tgt.kind == Kind::PMS) {
        // representative-level solving is meaningless modulo finite support;
        // canonical maps into pms are pure diagonals, so lift diagonally
        std::map<int, int> diag;
        if (!f.diag.empty()) {
            if (mono.diag.size() != 1)
                throw HypothesesUnmet("does not factor through the subobject");
            auto [dm, cm] = *mono.diag.begin();
            int icm = inv_mod(cm, f.src.p);
            for (auto& [df, cf] : f.diag)
                diag[df - dm] = normalize_mod((long long)cf * icm, f.src.p);
        }
        g = coord_map(f.src, mono.src, std::move(diag), {});
    } else {
        std::map<int, int> diag;
        if (!f.diag.empty()) {
            if (mono.diag.size() != 1) {
                if (mono.tgt.kind == Kind::PMS && mono.diag.empty())
                    throw HypothesesUnmet("does not factor through the subobject");
                throw TamenessViolation("lift along a non-diagonal inclusion");
            }
            auto [dm, cm] = *mono.diag.begin();
            int icm = inv_mod(cm, f.src.p);
            for (auto& [df, cf] : f.diag)
                diag[df - dm] = normalize_mod((long long)cf * icm, f.src.p);
        }
        std::set<int> rel;
        for (auto& [i, col] : mono.except) {
            for (auto& [j, c] : col)
                rel.insert(j);
            for (auto& [dm, cm] : mono.diag)
                rel.insert(i + dm);
        }
        std::set<int> cand;
        for (auto& [i, col] : f.except)
            cand.insert(i);
        for (int j : rel)
            for (auto& [df, cf] : f.diag)
                if (f.src.s.contains(j - df))
                    cand.insert(j - df);
        for (auto& [df, cf] : f.diag) {
            IndexSet clip = set_difference(f.src.s, f.tgt.s.shifted(-df));
            for (int i : finite_elems(clip))
                cand.insert(i);
        }
        for (auto& [dg, cg] : diag) {
            IndexSet clip = set_difference(f.src.s, mono.src.s.shifted(-dg));
            if (clip.is_finite())
                for (int i : clip.elems)
                    cand.insert(i);
        }
        std::map<int, SparseVec> except;
        for (int i : cand) {
            auto x = solve_sparse(mono, coord_column(f, i));
            if (!x)
                throw HypothesesUnmet("does not factor through the subobject");
            except[i] = *x;
        }
        g = coord_map(f.src, mono.src, std::move(diag), std::move(except));
    }
    if (!(coord_compose(mono, g) == f))
        throw HypothesesUnmet("does not factor through the subobject");
    return g;
}

namespace {

CoordMap retraction_of_mono(const CoordMap& mono)
{
    if (coord_is_zero(mono.src))
        return coord_zero_map(mono.tgt, mono.src);
    CoordMap r;
    if (mono.src.s.is_finite()) {
        std::vector<int> srcIdx = mono.src.s.elems;
        std::set<int> supp;
        for (int i : srcIdx)
            for (auto& [j, c] : coord_column(mono, i))
                supp.insert(j);
        Window wt(supp);
        Mat m = window_matrix(mono, srcIdx, wt);
        // R m = I, solved as m^T R^T = I column by column
        Mat mt = m.transpose();
        std::map<int, SparseVec> cols;
        for (size_t k = 0; k < srcIdx.size(); ++k) {
            Mat e(mono.src.p, int(srcIdx.size()), 1);
            e.at(int(k), 0) = 1;
            auto y = solve(mt, e);
            if (!y)
                throw HypothesesUnmet("not a split mono");
            for (int j = 0; j < y->rows; ++j)
                if (y->at(j, 0))
                    cols[wt.idx[j]][srcIdx[k]] =
                        normalize_mod(cols[wt.idx[j]][srcIdx[k]] + y->at(j, 0), mono.src.p);
        }
        r = coord_map(mono.tgt, mono.src, {}, std::move(cols));
    } else {
        if (mono.diag.size() != 1)
            throw TamenessViolation("retraction of a non-diagonal inclusion");
        auto [dm, cm] = *mono.diag.begin();
        std::set<int> X, T;
        for (auto& [i, col] : mono.except) {
            X.insert(i);
            for (auto& [j, c] : col)
                T.insert(j);
        }
        for (int round = 0; round < 4; ++round) {
            std::set<int> X2 = X;
            for (int j : T)
                if (mono.src.s.contains(j - dm))
                    X2.insert(j - dm);
            bool changed = false;
            for (int i : X2)
                if (!X.count(i)) {
                    X.insert(i);
                    changed = true;
                    for (auto& [j, c] : coord_column(mono, i))
                        T.insert(j);
                }
            if (!changed)
                break;
        }
        std::vector<int> srcIdx(X.begin(), X.end());
        Window wt((std::set<int>(T)));
        Mat m = window_matrix(mono, srcIdx, wt);
        Mat mt = m.transpose();
        std::map<int, SparseVec> cols;
        for (int j : wt.idx)
            cols[j] = {};
        for (size_t k = 0; k < srcIdx.size(); ++k) {
            Mat e(mono.src.p, int(srcIdx.size()), 1);
            e.at(int(k), 0) = 1;
            auto y = solve(mt, e);
            if (!y)
                throw HypothesesUnmet("not a split mono");
            for (int j = 0; j < y->rows; ++j)
                if (y->at(j, 0))
                    cols[wt.idx[j]][srcIdx[k]] =
                        normalize_mod(cols[wt.idx[j]][srcIdx[k]] + y->at(j, 0), mono.src.p);
        }
        r = coord_map(mono.tgt, mono.src, {{-dm, inv_mod(cm, mono.src.p)}},
                      std::move(cols));
    }
    if (!(coord_compose(r, mono) == coord_identity(mono.src)))
        throw HypothesesUnmet("retraction check failed");
    return r;
}

CoordMap right_inverse(const CoordMap& epi)
{
    if (coord_is_zero(epi.tgt))
        return coord_zero_map(epi.tgt, epi.src);
    CoordMap g;
    if (epi.tgt.s.is_finite()) {
        std::map<int, SparseVec> cols;
        for (int c : epi.tgt.s.elems) {
            auto x = solve_sparse(epi, SparseVec{{c, 1}});
            if (!x)
                throw HypothesesUnmet("not a split epi");
            cols[c] = *x;
        }
        g = coord_map(epi.tgt, epi.src, {}, std::move(cols));
    } else {
        if (epi.diag.size() != 1)
            throw TamenessViolation("section of a non-diagonal projection");
        auto [de, ce] = *epi.diag.begin();
        std::map<int, int> diag{{-de, inv_mod(ce, epi.src.p)}};
        std::map<int, SparseVec> cols;
        if (epi.tgt.kind != Kind::PMS) {
            std::set<int> E;
            for (auto& [i, col] : epi.except) {
                for (auto& [j, c] : col)
                    E.insert(j);
                if (epi.tgt.s.contains(i + de))
                    E.insert(i + de);
            }
            IndexSet clean =
                set_difference(epi.tgt.s, set_difference(epi.src.s, IndexSet::empty()).shifted(de));
            for (int c : finite_elems(clean))
                E.insert(c);
            for (int c : E) {
                if (!epi.tgt.s.contains(c))
                    continue;
                auto x = solve_sparse(epi, SparseVec{{c, 1}});
                if (!x)
                    throw HypothesesUnmet("not a split epi");
                cols[c] = *x;
            }
        }
        g = coord_map(epi.tgt, epi.src, std::move(diag), std::move(cols));
    }
    if (!(coord_compose(epi, g) == coord_identity(epi.tgt)))
        throw HypothesesUnmet("section check failed");
    return g;
}

}  // namespace

SubqData sub_quotient(const Subobject& u, const Subobject& v)
{
    CoordMap h = lift_through_mono(u.incl, v.incl);
    CoordKic k = coord_kic(h);
    CoordMap r = retraction_of_mono(u.incl);
    CoordMap sec = right_inverse(k.proj);
    SubqData out;
    out.obj = k.coker;
    out.project = coord_compose(k.proj, r);
    out.lift = coord_compose(u.incl, sec);
    return out;
}

CoordMap lift_through(const CoordMap& f, const CoordMap& g)
{
    if (!(f.tgt == g.tgt))
        throw std::invalid_argument("lift_through: targets differ");
    if (map_is_zero(g))
        return coord_zero_map(g.src, f.src);
    Subobject im = sub_image(f);
    CoordMap fbar = lift_through_mono(im.incl, f);
    CoordMap gbar = lift_through_mono(im.incl, g);
    CoordMap x = coord_compose(right_inverse(fbar), gbar);
    if (!(coord_compose(f, x) == g))
        throw HypothesesUnmet("lift_through verification failed");
    return x;
}

FinSpace coord_truncate(const CoordObject& a, int lo, int hi)
{
    if (a.kind == Kind::PMS)
        return FinSpace(a.p, 0);
    std::vector<std::string> labels;
    for (int i = lo; i < hi; ++i)
        if (a.s.contains(i))
            labels.push_back(std::to_string(i));
    return FinSpace(a.p, std::move(labels));
}

LinMap coord_truncate_map(const CoordMap& f, int lo, int hi)
{
    FinSpace fs = coord_truncate(f.src, lo, hi);
    FinSpace ft = coord_truncate(f.tgt, lo, hi);
    std::map<int, int> spos, tpos;
    {
        int k = 0;
        for (int i = lo; i < hi; ++i)
            if (f.src.kind != Kind::PMS && f.src.s.contains(i))
                spos[i] = k++;
        k = 0;
        for (int i = lo; i < hi; ++i)
            if (f.tgt.kind != Kind::PMS && f.tgt.s.contains(i))
                tpos[i] = k++;
    }
    Mat m(f.src.p, ft.dim(), fs.dim());
    for (auto& [i, c] : spos)
        for (auto& [j, v] : coord_column(f, i)) {
            auto it = tpos.find(j);
            if (it != tpos.end())
                m.at(it->second, c) = v;
        }
    return LinMap(fs, ft, m);
}

}  // namespace sseq
