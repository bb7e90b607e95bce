#pragma once

#include <cstdint>

#include "sseq/cesystem.hpp"

// Filtered chain complexes over F_p and the extended Cartan-Eilenberg system
// of a filtration: H(i,j) = H(F_j C / F_i C), eta induced by inclusion and
// projection, boundary the connecting homomorphism of the triple.

namespace sseq {

struct FilteredComplex {
    int p = 2;
    int t0 = 0, t1 = 0;  // chain degrees t0 <= t < t1
    int a = 0, b = 0;    // filtration window; F_b = C is required
    std::map<int, FinSpace> C;             // per degree t
    std::map<int, LinMap> d;               // d[t]: C_t -> C_{t-1}, d.d = 0
    std::map<std::pair<int, int>, Subspace> F;  // (s, t) -> F_s C_t

    FinSpace space(int t) const;
    LinMap diff(int t) const;          // zero outside the degree range
    Subspace filt(int s, int t) const;  // clamped in s; 0 at -inf, full at +inf
};

// Throws std::invalid_argument naming the violated invariant.
void check_filtered(const FilteredComplex& fc);

// Extended system over the window with both endpoints; passes validate.
CESystem from_filtered_complex(const FilteredComplex& fc);

// dim H_t(C) per degree, computed directly from the complex.
std::map<int, int> homology_dims(const FilteredComplex& fc);

struct RandomParams {
    int p = 2;
    int max_dim = 4;    // per chain degree
    int degrees = 3;    // t in [0, degrees)
    int window = 4;     // filtration indices 0..window
};

FilteredComplex random_filtered_complex(std::uint64_t seed, const RandomParams& par);
CESystem random_system(std::uint64_t seed, const RandomParams& par);

}  // namespace sseq
