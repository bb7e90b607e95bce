#pragma once

#include <functional>

#include "sseq/coordcat.hpp"

// Towers of coordinatized objects with an eventual linear rule, and the
// exact calculus of their colim, lim, and Rlim. A tail stage k (counted
// from tail_start) has index set (P + a k) \ (Q + b k) and the tail maps
// are a fixed diagonal. Threads (coordinate orbits) are classified by
// their drift against the moving sets, which decides every limit exactly.

namespace sseq {

enum class Dir { ASC, DESC };

struct TailRule {
    Kind kind = Kind::SUM;
    bool all_finite = false;  // every tail stage is finite-dimensional
    IndexSet P;               // lower structure
    int a = 0;                // P drifts by a per stage
    IndexSet Q;               // removed upper structure (may be empty)
    int b = 0;
    int d = 0;                // tail map diagonal shift
    int c = 1;                // tail map coefficient; 0 means zero maps
};

struct Tower {
    int p = 2;
    Dir dir = Dir::DESC;
    int n0 = 0;  // external index of stage 0
    std::vector<CoordObject> stages;
    std::vector<CoordMap> maps;  // DESC: maps[k]: stage(k+1)->stage(k); ASC: stage(k)->stage(k+1)
    int tail_start = 0;
    TailRule rule;

    CoordObject stage_at(int k) const;  // extends beyond the probed window
    CoordMap map_at(int k) const;
    int len() const { return int(stages.size()); }
};

// Probes count stages and detects the eventual rule, extending it as far
// back as it verifies. Throws TamenessViolation when no rule fits.
Tower make_tower(int p, Dir dir, int n0, int count,
                 const std::function<CoordObject(int)>& stage,
                 const std::function<CoordMap(int)>& map);

Tower constant_tower(Dir dir, int n0, int count, const CoordObject& v);

struct TowerLimit {
    CoordObject value;  // labeled by thread positions at tail_start
    bool ml = false;    // meaningful for rlim
};

TowerLimit tower_lim(const Tower& t);    // DESC only
TowerLimit tower_colim(const Tower& t);  // ASC only
TowerLimit tower_rlim(const Tower& t);   // DESC only

CoordMap lim_proj(const Tower& t, const TowerLimit& l, int k);    // value -> stage(k)
CoordMap colim_incl(const Tower& t, const TowerLimit& l, int k);  // stage(k) -> value

// Class in the rlim of a family xi (stage k -> element of stage k, finitely
// many nonzero); realizes Rlim = prod / im(1 - shift) in value coordinates.
SparseVec rlim_class(const Tower& t, const TowerLimit& rl, const std::map<int, SparseVec>& xi);

// A levelwise morphism of towers induces maps on the limits. phi(k) must be
// stageA(k) -> stageB(k) for all k; results are verified on probe threads.
CoordMap induced_lim(const Tower& ta, const TowerLimit& la, const Tower& tb,
                     const TowerLimit& lb, const std::function<CoordMap(int)>& phi);
CoordMap induced_colim(const Tower& ta, const TowerLimit& la, const Tower& tb,
                       const TowerLimit& lb, const std::function<CoordMap(int)>& phi);
CoordMap induced_rlim(const Tower& ta, const TowerLimit& la, const Tower& tb,
                      const TowerLimit& lb, const std::function<CoordMap(int)>& phi);

// Connecting map lim(Z) -> rlim(X) for a levelwise short exact sequence
// 0 -> X -> Y -> Z -> 0 of towers (DESC).
CoordMap connecting_lim_rlim(const Tower& tx, const TowerLimit& rx, const Tower& ty,
                             const Tower& tz, const TowerLimit& lz,
                             const std::function<CoordMap(int)>& incl,
                             const std::function<CoordMap(int)>& proj);

}  // namespace sseq
