#pragma once

#include "sseq/pages.hpp"
#include "sseq/tower.hpp"

// The canonical interchange morphism kappa: colim_j lim_i H(i,j) ->
// lim_i colim_j H(i,j), the four-term exact sequence around it, and the
// differential-region vanishing criterion for its kernel.
//
// Index bookkeeping: all limits over i use descending towers whose stage k
// sits at i = T - k, padded with zero stages where i exceeds the other
// index; all colimits over j use ascending towers whose stage k sits at
// j = jA + k. This keeps every induced map levelwise at matching k.

namespace sseq {

struct InterchangeData {
    CESystem sys;
    int jA = 0, T = 0;   // ascending base and common descending root
    int nA = 0, nD = 0;  // ascending / descending tower lengths
    std::vector<int> degs;

    GradedObject CLL;  // colim_j lim_i H(i,j)
    GradedObject LCL;  // lim_i D_i, D_i = colim_j H(i,j)
    GradedObject CRH;  // colim_j Rlim_i H(i,j)
    GradedObject RLD;  // Rlim_i D_i
    GradedObject CLK;  // colim_j lim_i K(i,j)
    GradedObject CRC;  // colim_j Rlim_i C(i,j)
    GradedMap kappa;   // CLL -> LCL, degree 0
    GradedMap lambda;  // CRH -> RLD, degree 0
    GradedMap mu;      // RLD -> CLL, degree -1
    GradedMap delta;   // CLK -> CRC, degree +1
    GradedMap klk;     // CLK -> CLL, the canonical monomorphism
    std::map<int, Subobject> ker_kappa;  // per degree, inside CLL
    ValidationReport triangles;          // colimit triangle exactness per (i,j)

    // Colimit rows over j at fixed i.
    const Tower& dtower(int i, int t);
    const TowerLimit& dcolim(int i, int t);
    CoordObject D(int i, int t);
    CoordMap iota(int i, int j, int t);  // H(i,j)[t] -> D_i[t]
    CoordMap etaD(int i, int j, int t);  // D_i[t] -> D_j[t], i <= j
    CoordMap delD(int i, int j, int t);  // D_j[t] -> H(i,j)[t-1]
    Subobject K(int i, int j, int t);    // ker(iota), inside H(i,j)[t]
    const SubqData& C(int i, int j, int t);  // D_i[t] / im(iota)

    // Descending towers over i at fixed j (zero stages where i > j; the
    // C tower has C(j,j) = D_j at its first nonzero stage).
    const Tower& TH(int j, int t);
    const Tower& TK(int j, int t);
    const Tower& TC(int j, int t);
    const TowerLimit& limH(int j, int t);
    const TowerLimit& rlimH(int j, int t);
    const TowerLimit& limK(int j, int t);
    const TowerLimit& rlimC(int j, int t);
    // Connecting map of 0 -> C(i,j) -> D_j -> K(i,j) -> 0 over i:
    // lim_i K(i,j)[u] -> Rlim_i C(i,j)[u+1].
    CoordMap deltaj(int j, int u);

    // Ascending towers over j of the limit values, with their colimits.
    const Tower& TLH(int t);
    const Tower& TRH(int t);
    const Tower& TLK(int t);
    const Tower& TRC(int t);
    const TowerLimit& CLLl(int t);
    const TowerLimit& CRHl(int t);
    const TowerLimit& CLKl(int t);
    const TowerLimit& CRCl(int t);

  private:
    friend InterchangeData compute_interchange(const CESystem&, int);
    std::map<std::pair<int, int>, Tower> dt_;
    std::map<std::pair<int, int>, TowerLimit> dc_;
    std::map<std::tuple<int, int, int>, CoordMap> etad_, deld_;
    std::map<std::tuple<int, int, int>, SubqData> cq_;
    std::map<std::pair<int, int>, Tower> th_, tk_, tc_, ty_;
    std::map<std::pair<int, int>, TowerLimit> lh_, rh_, lk_, rc_;
    std::map<int, Tower> tdd_, tlh_, trh_, tlk_, trc_;
    std::map<int, TowerLimit> lcl_, rld_, cll_, crh_, clk_, crc_;

  public:
    // The global descending tower of the D_i and its (derived) limit.
    const Tower& TD(int t);
    const TowerLimit& LCLl(int t);
    const TowerLimit& RLDl(int t);
    const Tower& TY(int j, int t);  // constant D_j with matching zero stages
};

// Builds all towers, the four corner objects, kappa, lambda, mu, delta, and
// certifies the exact triangle H(i,j) -> D_i -> D_j -> H(i,j) per (i,j)
// over the window (recorded in .triangles). Throws TamenessViolation when
// a tower has no tame rule.
InterchangeData compute_interchange(const CESystem& sys, int probe = 0);

struct FourTerm {
    ValidationReport report;  // exactness at all four positions, delta iso
    bool kappa_surjective = false;
    GradedObject ker_kappa;
};

// Certifies 0 -> CRH -> RLD -> CLL -> LCL -> 0 with the middle map of
// internal degree -1, kappa surjective, and ker(kappa) presented both as
// im(CLK -> CLL) and, via the delta isomorphism, as CRC.
FourTerm four_term_sequence(InterchangeData& ic);

enum class Verdict { APPLIES, NOT_APPLICABLE };

struct VanishingScan {
    Verdict global = Verdict::NOT_APPLICABLE;
    std::pair<int, int> region{0, 0};  // (a, b) certificate when APPLIES
    std::map<int, Verdict> per_t;      // refinement by target degree
    std::map<int, std::pair<int, int>> region_t;
    bool certified_tail = false;  // differentials beyond the scan provably zero
};

// Region scan for: d^r_s = 0 whenever s - r <= a and s > b, which forces
// ker(kappa) = 0. Sound and complete for CLAMP windows (all pages vanish
// outside the window); for other tails only probed differentials are
// consulted and the global verdict stays NOT_APPLICABLE.
VanishingScan kappa_vanishing_criterion(const CESystem& sys, int smin, int smax,
                                        int rmax);

}  // namespace sseq
