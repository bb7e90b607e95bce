#pragma once

#include <optional>
#include <string>
#include <vector>

// Subsets of Z closed under finite boolean operations: either a finite set,
// or a ray [base, infinity) with finitely many points removed. This class is
// closed under union, intersection, and difference.

namespace sseq {

struct IndexSet {
    // finite: ray_ = false, elems = the (sorted) set, base unused.
    // ray: ray_ = true, base = min of the underlying ray, removed = points
    // taken out, all > base, sorted.
    bool ray_ = false;
    int base = 0;
    std::vector<int> elems;

    IndexSet() = default;

    static IndexSet empty();
    static IndexSet finite(std::vector<int> xs);
    static IndexSet range(int lo, int hi);  // [lo, hi)
    static IndexSet ray(int from);
    static IndexSet ray_minus(int from, std::vector<int> removed);

    bool is_ray() const { return ray_; }
    bool is_finite() const { return !ray_; }
    bool is_empty() const { return !ray_ && elems.empty(); }
    int size() const;                 // throws on rays
    bool contains(int n) const;
    std::optional<int> min() const;   // nullopt iff empty
    // smallest m such that [m, infinity) is contained in the set; rays only
    int stable_from() const;

    // first n elements in increasing order (all of them if finite and smaller)
    std::vector<int> take(int n) const;

    IndexSet shifted(int d) const;

    bool operator==(const IndexSet& rhs) const = default;
};

IndexSet set_union(const IndexSet& a, const IndexSet& b);
IndexSet set_intersect(const IndexSet& a, const IndexSet& b);
IndexSet set_difference(const IndexSet& a, const IndexSet& b);
bool set_leq(const IndexSet& a, const IndexSet& b);

std::string to_string(const IndexSet& s);
IndexSet parse_index_set(const std::string& text);

}  // namespace sseq
