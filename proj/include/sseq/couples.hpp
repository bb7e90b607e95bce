#pragma once

#include "sseq/pages.hpp"

// Exact couples (A, E, alpha, beta, gamma), stored unrolled over a finite
// window with tail policies. The couple-derived spectral sequence uses the
// gamma^{-1} im(alpha^{r-1}) / beta ker(alpha^{r-1}) formulas and is kept
// comparable with the pages of a Cartan-Eilenberg system.

namespace sseq {

enum class DegreeConvention { BETA0_GAMMA_M1, BETA_M1_GAMMA0 };
enum class Side { RIGHT, LEFT };

struct ExactCouple {
    int p = 2;
    int smin = 0, smax = 0;  // window of triangle indices s
    TailMode tail = TailMode::CLAMP;
    DegreeConvention conv = DegreeConvention::BETA0_GAMMA_M1;

    // Stored values: A over [smin-1, smax], the rest over [smin, smax].
    // Absent entries are zero.
    std::map<int, GradedObject> A, E;
    std::map<int, GradedMap> alpha;  // alpha[s]: A_{s-1} -> A_s, degree 0
    std::map<int, GradedMap> beta;   // beta[s]:  A_s -> E_s
    std::map<int, GradedMap> gamma;  // gamma[s]: E_s -> A_{s-1}

    // Out-of-window data; consulted before the tail policy when set.
    std::function<GradedObject(int)> ext_A, ext_E;
    std::function<GradedMap(int)> ext_alpha, ext_beta, ext_gamma;

    int beta_deg() const { return conv == DegreeConvention::BETA0_GAMMA_M1 ? 0 : -1; }
    int gamma_deg() const { return conv == DegreeConvention::BETA0_GAMMA_M1 ? -1 : 0; }

    GradedObject Aat(int s) const;
    GradedObject Eat(int s) const;
    GradedMap al(int s) const;  // A_{s-1} -> A_s
    GradedMap be(int s) const;  // A_s -> E_s
    GradedMap ga(int s) const;  // E_s -> A_{s-1}
};

// alpha^r: A_{s-r} -> A_s (identity when r = 0).
GradedMap alpha_pow(const ExactCouple& c, int s, int r);

// Exactness of every triangle A_{s-1} -> A_s -> E_s -> A_{s-1} per internal
// degree, over the window. Never throws; exceptions become failures.
ValidationReport validate_couple(const ExactCouple& c);

// Z^r_s = gamma^{-1} im(alpha^{r-1}), B^r_s = beta ker(alpha^{r-1}), as
// subobjects of E_s, with the same presentation scheme as page_objects.
PageEntry couple_pages(const ExactCouple& c, int r, int s);

// d^r_s([x]) = [beta(y)] with gamma(x) = alpha^{r-1}(y). Any two choices of
// y differ by ker(alpha^{r-1}) out of A_{s-r}, whose beta-image is exactly
// B^r_{s-r}, so only independence of the representative x needs a check.
GradedMap couple_differential(const ExactCouple& c, const PageEntry& at_s,
                              const PageEntry& at_sr);
GradedMap couple_differential(const ExactCouple& c, int r, int s);

// ker d^r_s = Z^{r+1}_s/B^r_s, im d^r_{s+r} = B^{r+1}_s/B^r_s, and the
// Noether isomorphism E^{r+1}_s = H_s(E^r, d^r), per s in [smin, smax].
PageTurn couple_turn_verify(const ExactCouple& c, int r, int smin, int smax);

// RIGHT: A_s = H(s, +inf), beta = del, gamma = eta (beta degree -1).
// LEFT:  A_s = H(-inf, s), beta = eta, gamma = del (gamma degree -1).
// Throws std::invalid_argument when the endpoint column/row is missing.
ExactCouple build_couple(const CESystem& sys, Side side);

struct CoupleMorphism {
    bool ok = true;
    std::vector<std::string> failures;
    std::map<int, GradedMap> phi;  // A''_s -> A'_s, degree -1
};

// phi_s = del(-inf, s, +inf) with the identity on E^1; certifies the three
// commuting squares and that both couples derive equal pages for r <= rmax.
CoupleMorphism couple_comparison(const CESystem& sys, int rmax = 4);

struct CoupleLimits {
    GradedObject Ainf, Alim, RAlim;
    std::map<int, GradedMap> iota;  // A_s -> Ainf
    std::map<int, GradedMap> pi;    // Alim -> A_s
    std::map<int, std::map<int, Subobject>> FAinf;  // s, t -> im(iota_s)
    std::map<int, std::map<int, Subobject>> FAlim;  // s, t -> ker(pi_s)
    bool cc_colimit = false;  // Alim = 0 and RAlim = 0
    bool cc_limit = false;    // Ainf = 0
    bool filt_lim_complete_hausdorff = false;  // lim_s FAlim = 0, Rlim_s FAlim = 0
};

CoupleLimits couple_limits(const ExactCouple& c, int probe = 0);

// colim_j H(i,j) -> H(i, +inf) is an isomorphism for every i (equivalently,
// the right couple converges conditionally to the limit).
ValidationReport right_couple_limit_check(const CESystem& sys, int probe = 0);

// The short exact sequence 0 -> Rlim_i H(i,j) -> H(-inf,j) -> lim_i H(i,j)
// -> 0 at a fixed j, for a left couple conditionally convergent to the
// colimit; the first map has internal degree -1.
ValidationReport left_couple_ses_check(const CESystem& sys, int j, int probe = 0);

}  // namespace sseq
