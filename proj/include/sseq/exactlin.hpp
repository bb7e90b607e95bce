#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Exact linear algebra over a prime field F_p: the finite-dimensional
// backend in which all per-bidegree computations happen.

namespace sseq {

struct TamenessViolation : std::runtime_error {
    explicit TamenessViolation(const std::string& what) : std::runtime_error(what) {}
};

struct HypothesesUnmet : std::runtime_error {
    explicit HypothesesUnmet(const std::string& what) : std::runtime_error(what) {}
};

int normalize_mod(long long a, int p);
int inv_mod(int a, int p);

// Dense matrix of canonical residues in [0, p), row-major.
struct Mat {
    int p = 2;
    int rows = 0, cols = 0;
    std::vector<int> a;

    Mat() = default;
    Mat(int p_, int rows_, int cols_) : p(p_), rows(rows_), cols(cols_), a(size_t(rows_) * cols_, 0) {}

    static Mat identity(int p, int n);

    int& at(int r, int c) { return a[size_t(r) * cols + c]; }
    int at(int r, int c) const { return a[size_t(r) * cols + c]; }

    Mat operator*(const Mat& rhs) const;
    Mat operator+(const Mat& rhs) const;
    Mat operator-(const Mat& rhs) const;
    bool operator==(const Mat& rhs) const = default;

    Mat transpose() const;
    Mat col(int c) const;
    Mat hconcat(const Mat& rhs) const;
    Mat vconcat(const Mat& rhs) const;
    bool is_zero() const;
};

// In-place reduced row echelon form. Pivot search always takes the first
// (lowest-index) row with a nonzero entry, so results are deterministic.
// Returns the pivot columns in increasing order.
std::vector<int> rref(Mat& m);

int rank(Mat m);

// Solve A x = b (b may have several columns). Returns one solution, or
// nullopt if inconsistent. Deterministic: free variables are set to zero.
std::optional<Mat> solve(const Mat& A, const Mat& b);

struct FinSpace {
    int p = 2;
    std::vector<std::string> labels;

    FinSpace() = default;
    FinSpace(int p_, int dim);
    FinSpace(int p_, std::vector<std::string> labels_);

    int dim() const { return int(labels.size()); }
    bool operator==(const FinSpace& rhs) const = default;
};

struct LinMap {
    FinSpace src, tgt;
    Mat m;  // tgt.dim() rows x src.dim() cols

    LinMap() = default;
    LinMap(FinSpace src_, FinSpace tgt_, Mat m_);

    static LinMap zero(const FinSpace& src, const FinSpace& tgt);
    static LinMap identity(const FinSpace& v);

    bool operator==(const LinMap& rhs) const = default;
};

LinMap compose(const LinMap& g, const LinMap& f);  // g after f
LinMap add(const LinMap& f, const LinMap& g);

// A subspace of a finite-dimensional ambient space, stored as a canonical
// reduced-echelon basis (columns). Equal spans compare bit-equal.
struct Subspace {
    FinSpace ambient;
    Mat basis;  // ambient.dim() rows x dim columns, canonical

    int dim() const { return basis.cols; }
    bool operator==(const Subspace& rhs) const = default;
};

Subspace span(const FinSpace& ambient, const Mat& vectors);  // vectors as columns
Subspace zero_subspace(const FinSpace& ambient);
Subspace full_subspace(const FinSpace& ambient);

bool contains(const Subspace& u, const Mat& v);  // v: single column
bool subspace_leq(const Subspace& u, const Subspace& v);
Subspace subspace_sum(const Subspace& u, const Subspace& v);
Subspace subspace_intersect(const Subspace& u, const Subspace& v);

Subspace image(const LinMap& f);
Subspace kernel(const LinMap& f);
Subspace image_of(const LinMap& f, const Subspace& u);     // f(u)
Subspace preimage(const LinMap& f, const Subspace& u);     // f^{-1}(u)

// Kernel, image, and cokernel presentation of a linear map.
struct Kic {
    Subspace kernel;
    Subspace image;
    FinSpace coker;
    LinMap proj;  // tgt ->> coker, kernel = image
};

Kic kic(const LinMap& f);

struct Subquotient {
    FinSpace ambient;
    Subspace z, b;  // requires b <= z
};

// Presentation of z/b: a space with project (total on the ambient space;
// meaningful on z-representatives) and lift (a section), project*lift = id.
struct SubqPres {
    FinSpace space;
    LinMap project;  // ambient -> space
    LinMap lift;     // space -> ambient
};

SubqPres subquotient_present(const Subquotient& q);

// The two sides of the interchange lemma for a span A <-f- C -g-> B,
// with the isomorphism im(f)/f(ker g) -> im(g)/g(ker f), [a] |-> [g(c)],
// f(c) = a.
struct AcbIso {
    Subquotient left, right;
    SubqPres left_pres, right_pres;
    LinMap iso;  // left_pres.space -> right_pres.space, invertible
};

AcbIso acb_iso(const LinMap& f, const LinMap& g);

}  // namespace sseq
