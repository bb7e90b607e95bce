#pragma once

#include "sseq/cesystem.hpp"
#include "sseq/tower.hpp"

// Spectral sequence pages of a CE system. Cycles and boundaries live as
// subobjects of E^1_s = H(s-1, s); page objects are their subquotients and
// every formula is cross-checked against its exactness twin.

namespace sseq {

struct PageEntry {
    int r = 1, s = 0;
    GradedObject E1;                 // ambient H(s-1, s)
    std::map<int, Subobject> Z, B;   // per internal degree of E1
    GradedObject E;                  // Z/B
    std::map<int, SubqData> pres;    // per-degree presentation of Z/B
};

// Z = ker(del to H(s-r,s-1)) cross-checked against im(eta from H(s-r,s));
// B = im(del from H(s,s+r-1)) cross-checked against ker(eta to H(s-1,s+r-1));
// B <= Z certified. Throws HypothesesUnmet when a cross-check fails.
PageEntry page_objects(const CESystem& sys, int r, int s);

// d^r_s: E^r_s -> E^r_{s-r}, internal degree -1, on the presentations.
// Well-definedness (independence of the eta-lift and of the representative
// mod boundaries) is certified per degree.
GradedMap page_differential(const CESystem& sys, const PageEntry& at_s,
                            const PageEntry& at_sr);
GradedMap page_differential(const CESystem& sys, int r, int s);

struct PageTurn {
    bool ok = true;
    int checks = 0;
    std::vector<std::string> failures;
};

// Certifies, for every s in [smin, smax]: ker d^r_s = Z^{r+1}_s/B^r_s,
// im d^r_{s+r} = B^{r+1}_s/B^r_s, and the explicit Noether isomorphism
// E^{r+1}_s = H_s(E^r, d^r).
PageTurn turn_page_verify(const CESystem& sys, int r, int smin, int smax);

struct LimitEntry {
    GradedObject Zinf, Binf, Einf, REinf;
    std::map<int, Subobject> Zsub, Bsub;  // subobjects of E^1_s
    bool stabilized = false;              // Z and B towers eventually constant
    int stable_r = 0;                     // certificate when stabilized
};

struct LimitPage {
    std::map<int, LimitEntry> at_s;
};

// Z^inf = lim_r, B^inf = colim_r, E^inf = Z^inf/B^inf, RE^inf = Rlim_r Z^r.
// probe = 0 picks a window-derived stabilization bound.
LimitPage limit_page(const CESystem& sys, int smin, int smax, int probe = 0);

}  // namespace sseq
