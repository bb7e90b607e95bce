#pragma once

#include <functional>

#include "sseq/graded.hpp"

// Cartan-Eilenberg systems: objects H(i,j) for i <= j over a finite window
// plus optional -inf/+inf endpoints, generated by single-step maps eta and
// one boundary generator per middle index. All other maps are composites,
// so functoriality and naturality reduce to finitely many generator checks.

namespace sseq {

constexpr int kNegInf = -1000000000;
constexpr int kPosInf = 1000000000;

enum class TailMode { CLAMP, SYMBOLIC, NONE };

struct CESystem {
    int p = 2;
    int a = 0, b = 0;  // finite window, a <= b
    bool has_neg = false, has_pos = false;
    TailMode tail = TailMode::CLAMP;

    // Stored pairs (i, j) with i < j over indices() below; absent means zero.
    std::map<std::pair<int, int>, GradedObject> obj;
    // Single steps: stepj[(i,j)]: H(i,j) -> H(i, succ(j)),
    //               stepi[(i,j)]: H(i,j) -> H(succ(i), j). Degree 0.
    std::map<std::pair<int, int>, GradedMap> stepj;
    std::map<std::pair<int, int>, GradedMap> stepi;
    // delgen[j] = D_j: H(j, top()) -> H(bot(), j), degree -1. Every boundary
    // component is eta . D_j . eta.
    std::map<int, GradedMap> delgen;

    // Name of a registered builder able to restore the symbolic tail after
    // deserialization; empty for self-contained systems.
    std::string builtin;

    // Out-of-window data for TailMode::SYMBOLIC.
    std::function<GradedObject(int i, int j)> ext_obj;
    std::function<GradedMap(int i, int j, int i2, int j2)> ext_eta;
    std::function<GradedMap(int i, int j, int k)> ext_del;

    int bot() const { return has_neg ? kNegInf : a; }
    int top() const { return has_pos ? kPosInf : b; }
    std::vector<int> indices() const;  // bot(), a..b, top()
    int succ(int i) const;
    int norm(int i) const;  // applies the tail policy to one index
    bool in_window(int i) const;

    GradedObject H(int i, int j) const;
    GradedMap eta(int i, int j, int i2, int j2) const;  // degree 0
    GradedMap del(int i, int j, int k) const;           // H(j,k) -> H(i,j), degree -1
};

struct ValidationReport {
    bool ok = true;
    int checks = 0;
    std::vector<std::string> failures;
};

// Checks H(i,i) = 0, generator shapes and degrees, eta diamonds, naturality
// of the boundary generators, and exactness of every triangle per internal
// degree. Never throws; exceptions are recorded as failures.
ValidationReport validate(const CESystem& sys);

// Adjoins H(i, +inf) = colim_j H(i, j) with all induced maps.
CESystem prolong_right(const CESystem& sys, int probe = 12);

// Drops the endpoint rows/columns, regenerating the boundary generators.
CESystem restrict_underlying(const CESystem& sys);

}  // namespace sseq
