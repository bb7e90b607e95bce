#pragma once

#include "sseq/couples.hpp"
#include "sseq/interchange.hpp"

// Whole-plane obstruction groups of an exact couple: Q_s = lim_r im^r A_s,
// RQ_s = Rlim_r im^r A_s, the kernel-intersected groups K im^r A_s, and
// W = colim_s Rlim_r K im^r A_s; the six-term sequence tying them to the
// limit page; executable convergence theorems; and the certified
// isomorphism W = ker(kappa) for both boundary couples.
//
// Index bookkeeping: r-towers at stage s descend with stage k holding
// r = k - (sT - s) and zero stages before that, so levelwise maps between
// different s (and with the interchange i-towers, when rooted at the same
// index) always align at matching k. Colimits over s ascend from sA.

namespace sseq {

struct ObstructionData {
    ExactCouple c;
    int sA = 0, sT = 0;  // ascending base and descending root
    int nS = 0, nR = 0;  // ascending / descending tower lengths
    std::vector<int> degs;

    GradedObject Ainf, Alim, RAlim, W;
    std::map<int, GradedObject> Q, RQ, RK;  // per s over [sA, sA + nS - 1]

    // colimit / limit of the A-tower with its structure maps
    const Tower& TAasc(int t);   // stage k: A_{sA+k}
    const TowerLimit& Ainfl(int t);
    const Tower& TAdesc(int t);  // stage k: A_{sT-k}
    const TowerLimit& Aliml(int t);
    const TowerLimit& RAliml(int t);
    CoordMap iota(int s, int t);  // A_s[t] -> Ainf[t]
    CoordMap pi(int s, int t);    // Alim[t] -> A_s[t]
    Subobject FAinf(int s, int t);  // im(iota_s)
    Subobject FAlim(int s, int t);  // ker(pi_s)

    // r-towers at fixed s (zero stages for k < sT - s)
    Subobject im_r(int s, int r, int t);   // im(alpha^r) in A_s[t]
    Subobject kim_r(int s, int r, int t);  // ker(iota_s) meet im^r
    const Tower& TI(int s, int t);
    const Tower& TKi(int s, int t);
    const TowerLimit& Ql(int s, int t);
    const TowerLimit& RQl(int s, int t);
    const TowerLimit& RKl(int s, int t);
    CoordMap qmono(int s, int t);    // Q_s -> A_s[t]
    CoordMap alpha_q(int s, int t);  // Q_{s-1} -> Q_s, induced by alpha

    // s-towers of the limit values
    const Tower& TQdesc(int t);   // stage k: Q_{sT-k}
    const TowerLimit& limQl(int t);
    const TowerLimit& rlimQl(int t);
    const Tower& TRQdesc(int t);  // stage k: RQ_{sT-k}
    const TowerLimit& limRQl(int t);
    const Tower& TRK(int t);      // stage k: Rlim_r K im^r A_{sA+k}
    const TowerLimit& Wl(int t);
    const Tower& TFdesc(int t);   // stage k: F_{sT-k} A_inf
    const TowerLimit& Finfl(int t);
    const TowerLimit& RFinfl(int t);

  private:
    friend ObstructionData boardman_groups(const ExactCouple&, int, int);
    std::map<int, Tower> taa_, tad_, tqd_, trqd_, trk_, tfd_;
    std::map<int, TowerLimit> ail_, all_, ral_, lq_, rq_, lrq_, wl_, fin_, rfin_;
    std::map<std::pair<int, int>, CoordMap> io_, pi_;
    std::map<std::tuple<int, int, int>, Subobject> imr_, kimr_;
    std::map<std::pair<int, int>, GradedMap> ap_;
    std::map<std::pair<int, int>, Tower> ti_, tki_;
    std::map<std::pair<int, int>, TowerLimit> ql_, rql_, rkl_;
    GradedMap apow(int s, int r);
};

// Builds all obstruction groups; inclusion witnesses are implicit in the
// tower transition lifts. root repositions the descending towers (used to
// align with an interchange computation); the default is the window top.
ObstructionData boardman_groups(const ExactCouple& c, int probe = 0,
                                int root = kPosInf);

// Certifies, per s in the window: the six-term exact sequence
// 0 -> Zinf_s/ker(gamma) -> Q_{s-1} -> Q_s -> REinf_s -> RQ_{s-1} -> RQ_s -> 0
// with identification witnesses against the canonical groups; the short
// exact sequence F_s Ainf/F_{s-1} Ainf -> Einf_s -> Zinf_s/ker(gamma); and,
// when REinf vanishes, surjectivity of lim_s Q_s -> Q_s.
ValidationReport six_term_diagnostics(ObstructionData& od);

enum class ConvMode { NONE, WEAK, CONVERGES, STRONG };

struct ConvergenceCertificate {
    ConvMode mode = ConvMode::NONE;
    bool exhaustive = false, hausdorff = false, complete = false;
    ValidationReport report;
    GradedObject target;  // Ainf (colimit case) or Alim (limit case)
    GradedObject error;   // F_{-inf} Ainf, resp. RA_{-inf}; isomorphic to W
    GradedObject W;
};

// Hypotheses: conditional convergence to the colimit (Alim = RAlim = 0) and
// REinf = 0; throws HypothesesUnmet otherwise. Certifies weak convergence
// to Ainf with a complete filtration and the isomorphism
// F_{-inf} Ainf = W along the proof's exact sequence per s, plus the
// Mittag-Leffler collapse.
ConvergenceCertificate verify_colimit_convergence(ObstructionData& od);

// Hypotheses: conditional convergence to the limit (Ainf = 0) and
// REinf = 0. Certifies strong convergence to Alim through the short exact
// sequences 0 -> Einf_s -> Q_{s-1} -> Q_s -> 0 and the isomorphism
// RA_{-inf} = lim_s RQ_s = W.
ConvergenceCertificate verify_limit_convergence(ObstructionData& od);

struct WKappa {
    ValidationReport report;
    GradedObject W;
    GradedObject ker_kappa;
    GradedMap iso;  // W -> colim lim H, image ker(kappa); degree -1 / 0
};

// The headline theorems: for the chosen boundary couple, the obstruction
// group W maps isomorphically onto ker(kappa), with internal degree -1 on
// the RIGHT and 0 on the LEFT. Built from the surjections
// C(i,j) ->> K im^{j-i} A_j, Rlim over i, colim over j, and the delta
// isomorphism of the four-term sequence.
WKappa w_kappa_iso(const CESystem& sys, Side side, int probe = 0);

}  // namespace sseq
