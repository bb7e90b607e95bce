#include "sseq/graded.hpp"

#include <stdexcept>

namespace sseq {

CoordObject GradedObject::at(int t) const
{
    auto it = comp.find(t);
    return it == comp.end() ? coord_zero(p) : it->second;
}

GradedObject graded_object(int p, std::map<int, CoordObject> comp)
{
    GradedObject a;
    a.p = p;
    for (auto& [t, v] : comp) {
        if (v.p != p)
            throw std::invalid_argument("graded component over wrong prime");
        if (!coord_is_zero(v))
            a.comp.emplace(t, v);
    }
    return a;
}

GradedObject graded_zero(int p) { return GradedObject{p, {}}; }

GradedObject graded_single(int t, const CoordObject& v)
{
    return graded_object(v.p, {{t, v}});
}

bool graded_is_zero(const GradedObject& a) { return a.comp.empty(); }

std::optional<int> graded_dim(const GradedObject& a)
{
    int n = 0;
    for (auto& [t, v] : a.comp) {
        auto d = coord_dim(v);
        if (!d)
            return std::nullopt;
        n += *d;
    }
    return n;
}

std::vector<int> graded_degrees(const GradedObject& a)
{
    std::vector<int> ts;
    for (auto& [t, v] : a.comp)
        ts.push_back(t);
    return ts;
}

CoordMap GradedMap::at(int t) const
{
    auto it = comp.find(t);
    return it == comp.end() ? coord_zero_map(src.at(t), tgt.at(t + deg)) : it->second;
}

GradedMap graded_map(GradedObject src, GradedObject tgt, int deg,
                     std::map<int, CoordMap> comp)
{
    GradedMap f;
    f.deg = deg;
    f.src = std::move(src);
    f.tgt = std::move(tgt);
    for (auto& [t, m] : comp) {
        if (!(m.src == f.src.at(t)) || !(m.tgt == f.tgt.at(t + deg)))
            throw std::invalid_argument("graded component endpoints do not match");
        if (!map_is_zero(m))
            f.comp.emplace(t, m);
    }
    return f;
}

GradedMap graded_zero_map(const GradedObject& src, const GradedObject& tgt, int deg)
{
    return graded_map(src, tgt, deg, {});
}

GradedMap graded_identity(const GradedObject& a)
{
    std::map<int, CoordMap> comp;
    for (auto& [t, v] : a.comp)
        comp.emplace(t, coord_identity(v));
    return graded_map(a, a, 0, comp);
}

bool graded_map_is_zero(const GradedMap& f) { return f.comp.empty(); }

GradedMap graded_compose(const GradedMap& g, const GradedMap& f)
{
    if (!(g.src == f.tgt))
        throw std::invalid_argument("graded_compose: endpoint mismatch");
    std::map<int, CoordMap> comp;
    for (auto& [t, m] : f.comp) {
        CoordMap c = coord_compose(g.at(t + f.deg), m);
        if (!map_is_zero(c))
            comp.emplace(t, c);
    }
    return graded_map(f.src, g.tgt, f.deg + g.deg, comp);
}

GradedMap graded_add(const GradedMap& f, const GradedMap& g)
{
    if (!(f.src == g.src) || !(f.tgt == g.tgt) || f.deg != g.deg)
        throw std::invalid_argument("graded_add: shape mismatch");
    std::map<int, CoordMap> comp;
    for (auto& [t, v] : f.src.comp) {
        CoordMap s = coord_add(f.at(t), g.at(t));
        if (!map_is_zero(s))
            comp.emplace(t, s);
    }
    return graded_map(f.src, f.tgt, f.deg, comp);
}

}  // namespace sseq
