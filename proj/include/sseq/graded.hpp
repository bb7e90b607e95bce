#pragma once

#include <vector>

#include "sseq/coordcat.hpp"

// Internally graded coordinatized objects: finitely many nonzero degrees t,
// maps carry an internal degree checked under composition.

namespace sseq {

struct GradedObject {
    int p = 2;
    std::map<int, CoordObject> comp;  // degree -> nonzero component

    CoordObject at(int t) const;

    bool operator==(const GradedObject& rhs) const = default;
};

GradedObject graded_object(int p, std::map<int, CoordObject> comp);
GradedObject graded_zero(int p);
GradedObject graded_single(int t, const CoordObject& v);

bool graded_is_zero(const GradedObject& a);
std::optional<int> graded_dim(const GradedObject& a);
std::vector<int> graded_degrees(const GradedObject& a);

struct GradedMap {
    int deg = 0;
    GradedObject src, tgt;
    std::map<int, CoordMap> comp;  // t -> component src[t] -> tgt[t+deg]

    CoordMap at(int t) const;

    bool operator==(const GradedMap& rhs) const = default;
};

GradedMap graded_map(GradedObject src, GradedObject tgt, int deg,
                     std::map<int, CoordMap> comp);
GradedMap graded_zero_map(const GradedObject& src, const GradedObject& tgt, int deg);
GradedMap graded_identity(const GradedObject& a);

bool graded_map_is_zero(const GradedMap& f);

GradedMap graded_compose(const GradedMap& g, const GradedMap& f);  // g after f
GradedMap graded_add(const GradedMap& f, const GradedMap& g);

}  // namespace sseq
