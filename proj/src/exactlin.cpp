#include "sseq/exactlin.hpp"

#include <algorithm>
#include <cassert>

namespace sseq {

int normalize_mod(long long a, int p)
{
    long long r = a % p;
    if (r < 0)
        r += p;
    return int(r);
}

int inv_mod(int a, int p)
{
    a = normalize_mod(a, p);
    if (a == 0)
        throw std::invalid_argument("inv_mod: zero");
    // extended Euclid
    int t = 0, newt = 1, r = p, newr = a;
    while (newr != 0) {
        int q = r / newr;
        std::swap(t -= q * newt, newt);
        std::swap(r -= q * newr, newr);
    }
    return normalize_mod(t, p);
}

Mat Mat::identity(int p, int n)
{
    Mat m(p, n, n);
    for (int i = 0; i < n; ++i)
        m.at(i, i) = 1;
    return m;
}

Mat Mat::operator*(const Mat& rhs) const
{
    assert(cols == rhs.rows && p == rhs.p);
    Mat out(p, rows, rhs.cols);
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < cols; ++k) {
            int aik = at(i, k);
            if (aik == 0)
                continue;
            for (int j = 0; j < rhs.cols; ++j)
                out.at(i, j) = normalize_mod(out.at(i, j) + (long long)aik * rhs.at(k, j), p);
        }
    return out;
}

Mat Mat::operator+(const Mat& rhs) const
{
    assert(rows == rhs.rows && cols == rhs.cols && p == rhs.p);
    Mat out(p, rows, cols);
    for (size_t i = 0; i < a.size(); ++i)
        out.a[i] = normalize_mod(a[i] + (long long)rhs.a[i], p);
    return out;
}

Mat Mat::operator-(const Mat& rhs) const
{
    assert(rows == rhs.rows && cols == rhs.cols && p == rhs.p);
    Mat out(p, rows, cols);
    for (size_t i = 0; i < a.size(); ++i)
        out.a[i] = normalize_mod(a[i] - (long long)rhs.a[i], p);
    return out;
}

Mat Mat::transpose() const
{
    Mat out(p, cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            out.at(j, i) = at(i, j);
    return out;
}

Mat Mat::col(int c) const
{
    Mat out(p, rows, 1);
    for (int i = 0; i < rows; ++i)
        out.at(i, 0) = at(i, c);
    return out;
}

Mat Mat::hconcat(const Mat& rhs) const
{
    assert(rows == rhs.rows && p == rhs.p);
    Mat out(p, rows, cols + rhs.cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j)
            out.at(i, j) = at(i, j);
        for (int j = 0; j < rhs.cols; ++j)
            out.at(i, cols + j) = rhs.at(i, j);
    }
    return out;
}

Mat Mat::vconcat(const Mat& rhs) const
{
    assert(cols == rhs.cols && p == rhs.p);
    Mat out(p, rows + rhs.rows, cols);
    std::copy(a.begin(), a.end(), out.a.begin());
    std::copy(rhs.a.begin(), rhs.a.end(), out.a.begin() + a.size());
    return out;
}

bool Mat::is_zero() const
{
    return std::all_of(a.begin(), a.end(), [](int x) { return x == 0; });
}

std::vector<int> rref(Mat& m)
{
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols && row < m.rows; ++col) {
        int pr = -1;
        for (int i = row; i < m.rows; ++i)
            if (m.at(i, col) != 0) {
                pr = i;
                break;
            }
        if (pr < 0)
            continue;
        if (pr != row)
            for (int j = 0; j < m.cols; ++j)
                std::swap(m.at(pr, j), m.at(row, j));
        int inv = inv_mod(m.at(row, col), m.p);
        for (int j = 0; j < m.cols; ++j)
            m.at(row, j) = normalize_mod((long long)m.at(row, j) * inv, m.p);
        for (int i = 0; i < m.rows; ++i) {
            if (i == row)
                continue;
            int f = m.at(i, col);
            if (f == 0)
                continue;
            for (int j = 0; j < m.cols; ++j)
                m.at(i, j) = normalize_mod(m.at(i, j) - (long long)f * m.at(row, j), m.p);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

int rank(Mat m)
{
    return int(rref(m).size());
}

std::optional<Mat> solve(const Mat& A, const Mat& b)
{
    assert(A.rows == b.rows && A.p == b.p);
    Mat aug = A.hconcat(b);
    std::vector<int> pivots = rref(aug);
    // inconsistent if any pivot falls in the b block
    int npiv_a = 0;
    for (int pc : pivots) {
        if (pc >= A.cols)
            return std::nullopt;
        ++npiv_a;
    }
    Mat x(A.p, A.cols, b.cols);
    for (int r = 0; r < npiv_a; ++r) {
        int pc = pivots[r];
        for (int j = 0; j < b.cols; ++j)
            x.at(pc, j) = aug.at(r, A.cols + j);
    }
    return x;
}

FinSpace::FinSpace(int p_, int dim) : p(p_)
{
    labels.reserve(dim);
    for (int i = 0; i < dim; ++i)
        labels.push_back("e" + std::to_string(i));
}

FinSpace::FinSpace(int p_, std::vector<std::string> labels_) : p(p_), labels(std::move(labels_)) {}

LinMap::LinMap(FinSpace src_, FinSpace tgt_, Mat m_) : src(std::move(src_)), tgt(std::move(tgt_)), m(std::move(m_))
{
    if (m.rows != tgt.dim() || m.cols != src.dim() || m.p != src.p || src.p != tgt.p)
        throw std::invalid_argument("LinMap: shape mismatch");
}

LinMap LinMap::zero(const FinSpace& src, const FinSpace& tgt)
{
    return LinMap(src, tgt, Mat(src.p, tgt.dim(), src.dim()));
}

LinMap LinMap::identity(const FinSpace& v)
{
    return LinMap(v, v, Mat::identity(v.p, v.dim()));
}

LinMap compose(const LinMap& g, const LinMap& f)
{
    if (!(g.src == f.tgt))
        throw std::invalid_argument("compose: middle spaces differ");
    return LinMap(f.src, g.tgt, g.m * f.m);
}

LinMap add(const LinMap& f, const LinMap& g)
{
    if (!(f.src == g.src && f.tgt == g.tgt))
        throw std::invalid_argument("add: shape mismatch");
    return LinMap(f.src, f.tgt, f.m + g.m);
}

Subspace span(const FinSpace& ambient, const Mat& vectors)
{
    assert(vectors.rows == ambient.dim() && vectors.p == ambient.p);
    Mat rows = vectors.transpose();
    std::vector<int> pivots = rref(rows);
    Mat basis(ambient.p, ambient.dim(), int(pivots.size()));
    for (int k = 0; k < int(pivots.size()); ++k)
        for (int i = 0; i < ambient.dim(); ++i)
            basis.at(i, k) = rows.at(k, i);
    return Subspace{ambient, basis};
}

Subspace zero_subspace(const FinSpace& ambient)
{
    return Subspace{ambient, Mat(ambient.p, ambient.dim(), 0)};
}

Subspace full_subspace(const FinSpace& ambient)
{
    return Subspace{ambient, Mat::identity(ambient.p, ambient.dim())};
}

bool contains(const Subspace& u, const Mat& v)
{
    return solve(u.basis, v).has_value();
}

bool subspace_leq(const Subspace& u, const Subspace& v)
{
    if (u.dim() > v.dim())
        return false;
    return solve(v.basis, u.basis).has_value();
}

Subspace subspace_sum(const Subspace& u, const Subspace& v)
{
    return span(u.ambient, u.basis.hconcat(v.basis));
}

Subspace subspace_intersect(const Subspace& u, const Subspace& v)
{
    // null space of [U | V] gives coefficients with U a + V b = 0
    if (u.dim() == 0 || v.dim() == 0)
        return zero_subspace(u.ambient);
    Mat cat = u.basis.hconcat(Mat(u.basis.p, u.basis.rows, v.basis.cols) - v.basis);
    LinMap f(FinSpace(u.ambient.p, cat.cols), u.ambient, cat);
    Subspace ker = kernel(f);
    // intersection vectors = U * (first u.dim() rows of ker basis)
    Mat coeff(u.basis.p, u.dim(), ker.dim());
    for (int i = 0; i < u.dim(); ++i)
        for (int j = 0; j < ker.dim(); ++j)
            coeff.at(i, j) = ker.basis.at(i, j);
    return span(u.ambient, u.basis * coeff);
}

Subspace image(const LinMap& f)
{
    return span(f.tgt, f.m);
}

Subspace kernel(const LinMap& f)
{
    Mat m = f.m;
    std::vector<int> pivots = rref(m);
    std::vector<int> free_cols;
    {
        size_t pi = 0;
        for (int c = 0; c < m.cols; ++c) {
            if (pi < pivots.size() && pivots[pi] == c)
                ++pi;
            else
                free_cols.push_back(c);
        }
    }
    Mat basis(f.m.p, f.m.cols, int(free_cols.size()));
    for (int k = 0; k < int(free_cols.size()); ++k) {
        int fc = free_cols[k];
        basis.at(fc, k) = 1;
        for (int r = 0; r < int(pivots.size()); ++r)
            basis.at(pivots[r], k) = normalize_mod(-(long long)m.at(r, fc), m.p);
    }
    return span(f.src, basis);
}

Subspace image_of(const LinMap& f, const Subspace& u)
{
    assert(u.ambient == f.src);
    return span(f.tgt, f.m * u.basis);
}

Subspace preimage(const LinMap& f, const Subspace& u)
{
    assert(u.ambient == f.tgt);
    // x with f(x) in U  <=>  (x, c) in ker [f | -U]
    Mat cat = f.m.hconcat(Mat(f.m.p, f.m.rows, u.basis.cols) - u.basis);
    LinMap g(FinSpace(f.src.p, cat.cols), f.tgt, cat);
    Subspace ker = kernel(g);
    Mat xs(f.m.p, f.src.dim(), ker.dim());
    for (int i = 0; i < f.src.dim(); ++i)
        for (int j = 0; j < ker.dim(); ++j)
            xs.at(i, j) = ker.basis.at(i, j);
    return span(f.src, xs);
}

Kic kic(const LinMap& f)
{
    Kic out;
    out.kernel = kernel(f);
    out.image = image(f);
    Subquotient q{f.tgt, full_subspace(f.tgt), out.image};
    SubqPres pres = subquotient_present(q);
    out.coker = pres.space;
    out.proj = pres.project;
    return out;
}

SubqPres subquotient_present(const Subquotient& q)
{
    if (!subspace_leq(q.b, q.z))
        throw std::invalid_argument("subquotient_present: b not contained in z");
    int p = q.ambient.p;
    int kz = q.z.dim();
    // b in z-coordinates
    std::optional<Mat> xopt = solve(q.z.basis, q.b.basis);
    Mat x = *xopt;  // kz x kb
    Mat xr = x.transpose();
    std::vector<int> pivots = rref(xr);
    std::vector<int> nonpivots;
    {
        size_t pi = 0;
        for (int c = 0; c < kz; ++c) {
            if (pi < pivots.size() && pivots[pi] == c)
                ++pi;
            else
                nonpivots.push_back(c);
        }
    }
    int dq = int(nonpivots.size());
    FinSpace space(p, dq);
    // reduction k^kz -> k^dq: subtract pivot-row multiples, then restrict
    Mat red(p, dq, kz);
    for (int k = 0; k < dq; ++k)
        red.at(k, nonpivots[k]) = 1;
    for (int r = 0; r < int(pivots.size()); ++r) {
        int pc = pivots[r];
        for (int k = 0; k < dq; ++k) {
            int c = nonpivots[k];
            // e_pc == -xr(r, c) e_c modulo b (since row r reads e_pc + sum xr(r,c) e_c)
            red.at(k, pc) = normalize_mod(-(long long)xr.at(r, c), p);
        }
    }
    // lift: space -> ambient via z basis at nonpivot coordinates
    Mat liftm(p, q.ambient.dim(), dq);
    for (int k = 0; k < dq; ++k)
        for (int i = 0; i < q.ambient.dim(); ++i)
            liftm.at(i, k) = q.z.basis.at(i, nonpivots[k]);
    // project: ambient -> space. On z: coordinates then reduction; on a
    // complement of z: zero. Build via a full basis [z | complement].
    Mat full = q.z.basis;
    {
        Mat probe = q.z.basis;
        for (int i = 0; i < q.ambient.dim(); ++i) {
            Mat e(p, q.ambient.dim(), 1);
            e.at(i, 0) = 1;
            if (!solve(full.cols ? full : Mat(p, q.ambient.dim(), 0), e).has_value())
                full = full.hconcat(e);
            if (full.cols == q.ambient.dim())
                break;
        }
    }
    Mat projm(p, dq, q.ambient.dim());
    if (q.ambient.dim() > 0) {
        // columns of full are a basis; express e_i in it, keep z-part, reduce
        Mat coords = *solve(full, Mat::identity(p, q.ambient.dim()));
        Mat zpart(p, kz, q.ambient.dim());
        for (int i = 0; i < kz; ++i)
            for (int j = 0; j < q.ambient.dim(); ++j)
                zpart.at(i, j) = coords.at(i, j);
        projm = red * zpart;
    }
    SubqPres out;
    out.space = space;
    out.project = LinMap(q.ambient, space, projm);
    out.lift = LinMap(space, q.ambient, liftm);
    return out;
}

AcbIso acb_iso(const LinMap& f, const LinMap& g)
{
    if (!(f.src == g.src))
        throw std::invalid_argument("acb_iso: maps must share source");
    AcbIso out;
    out.left = Subquotient{f.tgt, image(f), image_of(f, kernel(g))};
    out.right = Subquotient{g.tgt, image(g), image_of(g, kernel(f))};
    out.left_pres = subquotient_present(out.left);
    out.right_pres = subquotient_present(out.right);
    // [a] -> [g(c)] with f(c) = a, per presentation basis vector
    int d = out.left_pres.space.dim();
    Mat m(f.m.p, out.right_pres.space.dim(), d);
    for (int k = 0; k < d; ++k) {
        Mat a = out.left_pres.lift.m.col(k);
        std::optional<Mat> c = solve(f.m, a);
        if (!c)
            throw std::logic_error("acb_iso: representative not in image");
        Mat b = out.right_pres.project.m * (g.m * *c);
        for (int i = 0; i < m.rows; ++i)
            m.at(i, k) = b.at(i, 0);
    }
    out.iso = LinMap(out.left_pres.space, out.right_pres.space, m);
    if (out.left_pres.space.dim() != out.right_pres.space.dim() || rank(m) != d)
        throw std::logic_error("acb_iso: map is not invertible");
    return out;
}

}  // namespace sseq
