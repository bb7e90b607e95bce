#include "sseq/frontend.hpp"

namespace sseq {

namespace {

int absv(int i) { return i < 0 ? -i : i; }

// Gained coordinates (degree 0) and dropped coordinates (degree 1) of the
// cone on X_i -> X_j. Factor m of X_s exists for m >= |s|; the composite
// transition map is the identity exactly on m >= max(|i|, |j|).
GradedObject e81_obj(int p, int i, int j)
{
    std::map<int, CoordObject> comp;
    if (i == kNegInf) {
        if (j == kPosInf)
            comp.emplace(0, make_coord(p, Kind::PMS, IndexSet::ray(0)));
        else
            comp.emplace(0, make_coord(p, Kind::PROD, IndexSet::ray(absv(j))));
    } else if (j == kPosInf) {
        comp.emplace(1, make_coord(p, Kind::SUM, IndexSet::ray(absv(i))));
    } else {
        int m = std::max(absv(i), absv(j));
        CoordObject g = make_coord(p, Kind::SUM, IndexSet::range(absv(j), m));
        CoordObject d = make_coord(p, Kind::SUM, IndexSet::range(absv(i), m));
        if (!coord_is_zero(g))
            comp.emplace(0, g);
        if (!coord_is_zero(d))
            comp.emplace(1, d);
    }
    return graded_object(p, comp);
}

GradedMap e81_diag(const GradedObject& src, const GradedObject& tgt, int deg)
{
    std::map<int, CoordMap> comp;
    for (int t : graded_degrees(src)) {
        CoordObject b = tgt.at(t + deg);
        if (!coord_is_zero(b))
            comp.emplace(t, coord_diagonal(src.at(t), b, 0, 1));
    }
    return graded_map(src, tgt, deg, comp);
}

}  // namespace

CESystem example_8_1(int p)
{
    CESystem sys;
    sys.p = p;
    sys.a = -6;
    sys.b = 6;
    sys.has_neg = sys.has_pos = true;
    sys.tail = TailMode::SYMBOLIC;
    sys.builtin = "example81";
    sys.ext_obj = [p](int i, int j) { return e81_obj(p, i, j); };
    sys.ext_eta = [p](int i, int j, int i2, int j2) {
        return e81_diag(e81_obj(p, i, j), e81_obj(p, i2, j2), 0);
    };
    sys.ext_del = [p](int i, int j, int k) {
        return e81_diag(e81_obj(p, j, k), e81_obj(p, i, j), -1);
    };

    std::vector<int> idx = sys.indices();
    for (int i : idx)
        for (int j : idx) {
            if (i >= j)
                continue;
            GradedObject v = e81_obj(p, i, j);
            if (!graded_is_zero(v))
                sys.obj[{i, j}] = v;
        }
    for (int i : idx)
        for (int j : idx) {
            if (i > j)
                continue;
            GradedObject src = sys.H(i, j);
            if (j != sys.top()) {
                GradedObject tgt = sys.H(i, sys.succ(j));
                if (!graded_is_zero(src) && !graded_is_zero(tgt))
                    sys.stepj[{i, j}] = e81_diag(src, tgt, 0);
            }
            if (i < j && i != sys.top()) {
                GradedObject tgt = sys.H(sys.succ(i), j);
                if (!graded_is_zero(src) && !graded_is_zero(tgt))
                    sys.stepi[{i, j}] = e81_diag(src, tgt, 0);
            }
        }
    for (int j = sys.a; j <= sys.b; ++j)
        sys.delgen[j] = e81_diag(sys.H(j, sys.top()), sys.H(sys.bot(), j), -1);
    return sys;
}

}  // namespace sseq
