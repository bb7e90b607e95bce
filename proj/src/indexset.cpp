#include "sseq/indexset.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace sseq {

namespace {

std::vector<int> sorted_unique(std::vector<int> xs)
{
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

}  // namespace

IndexSet IndexSet::empty() { return IndexSet{}; }

IndexSet IndexSet::finite(std::vector<int> xs)
{
    IndexSet s;
    s.elems = sorted_unique(std::move(xs));
    return s;
}

IndexSet IndexSet::range(int lo, int hi)
{
    std::vector<int> xs;
    for (int i = lo; i < hi; ++i)
        xs.push_back(i);
    return finite(std::move(xs));
}

IndexSet IndexSet::ray(int from)
{
    IndexSet s;
    s.ray_ = true;
    s.base = from;
    return s;
}

IndexSet IndexSet::ray_minus(int from, std::vector<int> removed)
{
    std::vector<int> rm;
    for (int x : removed)
        if (x > from)
            rm.push_back(x);
    bool base_removed =
        std::find(removed.begin(), removed.end(), from) != removed.end();
    IndexSet s;
    s.ray_ = true;
    s.base = from;
    s.elems = sorted_unique(std::move(rm));
    if (!base_removed)
        return s;
    // renormalize: advance the base past removed points
    int b = from;
    std::vector<int> rm2 = s.elems;
    while (!rm2.empty() && rm2.front() == b + 1) {
        b = rm2.front();
        rm2.erase(rm2.begin());
    }
    s.base = b + 1;
    s.elems = std::move(rm2);
    return s;
}

int IndexSet::size() const
{
    if (ray_)
        throw std::runtime_error("size of infinite index set");
    return int(elems.size());
}

bool IndexSet::contains(int n) const
{
    if (!ray_)
        return std::binary_search(elems.begin(), elems.end(), n);
    if (n < base)
        return false;
    return !std::binary_search(elems.begin(), elems.end(), n);
}

std::optional<int> IndexSet::min() const
{
    if (ray_)
        return base;
    if (elems.empty())
        return std::nullopt;
    return elems.front();
}

int IndexSet::stable_from() const
{
    if (!ray_)
        throw std::runtime_error("stable_from of finite index set");
    return elems.empty() ? base : elems.back() + 1;
}

std::vector<int> IndexSet::take(int n) const
{
    std::vector<int> out;
    if (!ray_) {
        for (int x : elems) {
            if (int(out.size()) >= n)
                break;
            out.push_back(x);
        }
        return out;
    }
    int x = base;
    while (int(out.size()) < n) {
        if (contains(x))
            out.push_back(x);
        ++x;
    }
    return out;
}

IndexSet IndexSet::shifted(int d) const
{
    IndexSet s = *this;
    s.base += ray_ ? d : 0;
    for (int& x : s.elems)
        x += d;
    return s;
}

IndexSet set_union(const IndexSet& a, const IndexSet& b)
{
    if (!a.ray_ && !b.ray_) {
        std::vector<int> xs = a.elems;
        xs.insert(xs.end(), b.elems.begin(), b.elems.end());
        return IndexSet::finite(std::move(xs));
    }
    if (a.ray_ && b.ray_) {
        int base = std::min(a.base, b.base);
        std::vector<int> rm;
        int hi = std::max(a.stable_from(), b.stable_from());
        for (int x = base; x < hi; ++x)
            if (!a.contains(x) && !b.contains(x))
                rm.push_back(x);
        return IndexSet::ray_minus(base, std::move(rm));
    }
    const IndexSet& r = a.ray_ ? a : b;
    const IndexSet& f = a.ray_ ? b : a;
    std::vector<int> rm;
    for (int x : r.elems)
        if (!f.contains(x))
            rm.push_back(x);
    IndexSet out = IndexSet::ray_minus(r.base, std::move(rm));
    std::vector<int> below;
    for (int x : f.elems)
        if (x < out.base)
            below.push_back(x);
    if (below.empty())
        return out;
    // fold leading finite points into the ray representation if contiguous
    IndexSet fin = IndexSet::finite(std::move(below));
    // general merge: extend the ray downward over a contiguous prefix
    int base = out.base;
    std::vector<int> rm2 = out.elems;
    std::vector<int> pre = fin.elems;
    while (!pre.empty() && pre.back() == base - 1) {
        base = pre.back();
        pre.pop_back();
    }
    if (pre.empty()) {
        IndexSet res;
        res.ray_ = true;
        res.base = base;
        res.elems = rm2;
        return res;
    }
    // gaps remain below the ray: represent as ray(min) minus the gaps
    int lo = pre.front();
    std::vector<int> rm3;
    for (int x = lo; x < base; ++x)
        if (!std::binary_search(pre.begin(), pre.end(), x))
            rm3.push_back(x);
    rm3.insert(rm3.end(), rm2.begin(), rm2.end());
    IndexSet res;
    res.ray_ = true;
    res.base = lo;
    res.elems = sorted_unique(std::move(rm3));
    return res;
}

IndexSet set_intersect(const IndexSet& a, const IndexSet& b)
{
    if (!a.ray_ || !b.ray_) {
        const IndexSet& f = !a.ray_ ? a : b;
        const IndexSet& o = !a.ray_ ? b : a;
        std::vector<int> xs;
        for (int x : f.elems)
            if (o.contains(x))
                xs.push_back(x);
        return IndexSet::finite(std::move(xs));
    }
    int base = std::max(a.base, b.base);
    std::vector<int> rm;
    int hi = std::max(a.stable_from(), b.stable_from());
    for (int x = base; x < hi; ++x)
        if (!(a.contains(x) && b.contains(x)))
            rm.push_back(x);
    return IndexSet::ray_minus(base, std::move(rm));
}

IndexSet set_difference(const IndexSet& a, const IndexSet& b)
{
    if (!a.ray_) {
        std::vector<int> xs;
        for (int x : a.elems)
            if (!b.contains(x))
                xs.push_back(x);
        return IndexSet::finite(std::move(xs));
    }
    if (!b.ray_) {
        std::vector<int> rm = a.elems;
        for (int x : b.elems)
            if (x >= a.base)
                rm.push_back(x);
        return IndexSet::ray_minus(a.base, std::move(rm));
    }
    // ray minus ray: finite
    std::vector<int> xs;
    int hi = std::max(a.stable_from(), b.stable_from());
    for (int x = a.base; x < hi; ++x)
        if (a.contains(x) && !b.contains(x))
            xs.push_back(x);
    return IndexSet::finite(std::move(xs));
}

bool set_leq(const IndexSet& a, const IndexSet& b)
{
    return set_difference(a, b).is_empty();
}

std::string to_string(const IndexSet& s)
{
    auto braces = [](const std::vector<int>& xs) {
        std::ostringstream os;
        os << '{';
        for (size_t i = 0; i < xs.size(); ++i)
            os << (i ? ", " : "") << xs[i];
        os << '}';
        return os.str();
    };
    if (!s.ray_)
        return braces(s.elems);
    std::ostringstream os;
    os << "ray(" << s.base << ")";
    if (!s.elems.empty())
        os << " - " << braces(s.elems);
    return os.str();
}

IndexSet parse_index_set(const std::string& text)
{
    auto fail = [&]() -> void {
        throw std::runtime_error("bad index set: " + text);
    };
    size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace((unsigned char)text[i]))
            ++i;
    };
    auto parse_int = [&]() -> int {
        skip();
        size_t j = i;
        if (j < text.size() && (text[j] == '-' || text[j] == '+'))
            ++j;
        size_t k = j;
        while (k < text.size() && std::isdigit((unsigned char)text[k]))
            ++k;
        if (k == j)
            fail();
        int v = std::stoi(text.substr(i, k - i));
        i = k;
        return v;
    };
    auto parse_braces = [&]() -> std::vector<int> {
        skip();
        if (i >= text.size() || text[i] != '{')
            fail();
        ++i;
        std::vector<int> xs;
        skip();
        if (i < text.size() && text[i] == '}') {
            ++i;
            return xs;
        }
        while (true) {
            xs.push_back(parse_int());
            skip();
            if (i < text.size() && text[i] == ',') {
                ++i;
                continue;
            }
            break;
        }
        skip();
        if (i >= text.size() || text[i] != '}')
            fail();
        ++i;
        return xs;
    };
    skip();
    if (text.compare(i, 4, "ray(") == 0) {
        i += 4;
        int from = parse_int();
        skip();
        if (i >= text.size() || text[i] != ')')
            fail();
        ++i;
        skip();
        std::vector<int> rm;
        if (i < text.size() && text[i] == '-') {
            ++i;
            rm = parse_braces();
        }
        skip();
        if (i != text.size())
            fail();
        return IndexSet::ray_minus(from, std::move(rm));
    }
    std::vector<int> xs = parse_braces();
    skip();
    if (i != text.size())
        fail();
    return IndexSet::finite(std::move(xs));
}

}  // namespace sseq
