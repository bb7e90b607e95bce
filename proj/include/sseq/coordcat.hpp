#pragma once

#include <map>
#include <optional>
#include <string>

#include "sseq/exactlin.hpp"
#include "sseq/indexset.hpp"

// A tame category of coordinatized vector spaces over F_p: direct sums,
// direct products, and products-modulo-sums over subsets of Z, with maps
// given by finitely many diagonals plus finitely many exceptional columns.
// Kernels, images, and cokernels stay in the class (or a TamenessViolation
// is raised), which is what makes infinite-dimensional bookkeeping exact.

namespace sseq {

enum class Kind { SUM, PROD, PMS };

struct CoordObject {
    int p = 2;
    Kind kind = Kind::SUM;
    IndexSet s;

    bool operator==(const CoordObject& rhs) const = default;
};

// Normalizes: finite PROD -> SUM, finite PMS -> 0.
CoordObject make_coord(int p, Kind kind, IndexSet s);
CoordObject coord_zero(int p);
CoordObject coord_fin(int p, int n);  // SUM({0..n-1})

bool coord_is_zero(const CoordObject& a);
bool coord_is_finite(const CoordObject& a);
std::optional<int> coord_dim(const CoordObject& a);

std::string to_string(const CoordObject& a);
CoordObject parse_coord(int p, const std::string& text);

using SparseVec = std::map<int, int>;  // index -> nonzero coeff

// diag: shift d -> coeff c, meaning source index i contributes c * e_{i+d}.
// except: source index -> explicit column, overriding all diagonals there.
// Entries landing outside tgt.s are dropped. Construct via coord_map so the
// representation is canonical; canonical maps compare bit-equal.
struct CoordMap {
    CoordObject src, tgt;
    std::map<int, int> diag;
    std::map<int, SparseVec> except;

    bool operator==(const CoordMap& rhs) const = default;
};

CoordMap coord_map(CoordObject src, CoordObject tgt, std::map<int, int> diag,
                   std::map<int, SparseVec> except);
CoordMap coord_zero_map(const CoordObject& src, const CoordObject& tgt);
CoordMap coord_identity(const CoordObject& a);
CoordMap coord_diagonal(const CoordObject& src, const CoordObject& tgt, int d, int c);

bool map_is_zero(const CoordMap& f);

// True column of f at source index i, restricted to tgt.s.
SparseVec coord_column(const CoordMap& f, int i);
SparseVec coord_apply(const CoordMap& f, const SparseVec& v);

// Solve f(x) = v exactly (finite-window method); nullopt when inconsistent.
std::optional<SparseVec> solve_sparse(const CoordMap& f, const SparseVec& v);

CoordMap coord_compose(const CoordMap& g, const CoordMap& f);  // g after f
CoordMap coord_add(const CoordMap& f, const CoordMap& g);
CoordMap coord_scale(const CoordMap& f, int c);
CoordMap coord_shift(const CoordMap& f, int d);  // conjugate by index shift

struct Subobject {
    CoordObject obj;
    CoordMap incl;  // monic, into the ambient object
};

struct CoordKic {
    Subobject kernel;  // into f.src
    Subobject image;   // into f.tgt
    CoordObject coker;
    CoordMap proj;     // f.tgt ->> coker, kernel exactly im(f)
};

CoordKic coord_kic(const CoordMap& f);

// g with mono . g = f; throws HypothesesUnmet when f does not factor.
CoordMap lift_through_mono(const CoordMap& mono, const CoordMap& f);

// x with f . x = g (any f); throws HypothesesUnmet when im(g) is not
// contained in im(f) or no tame section exists.
CoordMap lift_through(const CoordMap& f, const CoordMap& g);

Subobject sub_full(const CoordObject& a);
Subobject sub_zero(const CoordObject& a);
Subobject sub_image(const CoordMap& f);
Subobject sub_kernel(const CoordMap& f);
Subobject sub_image_of(const CoordMap& f, const Subobject& u);   // f(u)
Subobject sub_preimage(const CoordMap& f, const Subobject& u);   // f^{-1}(u)
Subobject sub_intersect(const Subobject& u, const Subobject& v);
bool sub_leq(const Subobject& u, const Subobject& v);
bool sub_eq(const Subobject& u, const Subobject& v);

// Quotient u.obj / v (for v <= u): object plus projection from the ambient
// space of u (total; meaningful on representatives in u).
struct SubqData {
    CoordObject obj;
    CoordMap project;  // ambient -> obj
    CoordMap lift;     // obj -> ambient, a section landing in u
};

SubqData sub_quotient(const Subobject& u, const Subobject& v);

// Finite-window truncation, for cross-checks against the dense backend.
// Keeps indices of a.s inside [lo, hi); PMS truncates to zero.
FinSpace coord_truncate(const CoordObject& a, int lo, int hi);
LinMap coord_truncate_map(const CoordMap& f, int lo, int hi);

}  // namespace sseq
