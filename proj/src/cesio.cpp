#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sseq/frontend.hpp"

namespace sseq {

namespace {

std::string idx_str(int i)
{
    if (i == kNegInf)
        return "-inf";
    if (i == kPosInf)
        return "inf";
    return std::to_string(i);
}

int parse_idx(const std::string& s)
{
    if (s == "-inf")
        return kNegInf;
    if (s == "inf")
        return kPosInf;
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size())
        throw std::invalid_argument("bad index '" + s + "'");
    return v;
}

const char* tail_str(TailMode m)
{
    switch (m) {
    case TailMode::CLAMP: return "clamp";
    case TailMode::SYMBOLIC: return "symbolic";
    default: return "none";
    }
}

TailMode parse_tail(const std::string& s)
{
    if (s == "clamp")
        return TailMode::CLAMP;
    if (s == "symbolic")
        return TailMode::SYMBOLIC;
    if (s == "none")
        return TailMode::NONE;
    throw std::invalid_argument("bad tail mode '" + s + "'");
}

bool is_fin(const CoordObject& a)
{
    return coord_is_zero(a) || (a.kind == Kind::SUM && a.s.is_finite() &&
                                a.s == IndexSet::range(0, int(a.s.elems.size())));
}

void emit_matrix(std::ostream& os, const CoordMap& f)
{
    int rows = *coord_dim(f.tgt), cols = *coord_dim(f.src);
    os << "mat " << rows << " " << cols;
    std::vector<std::vector<int>> m(rows, std::vector<int>(cols, 0));
    for (int c = 0; c < cols; ++c)
        for (auto& [r, v] : coord_column(f, c))
            m[r][c] = v;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            os << " " << m[r][c];
}

void emit_terms(std::ostream& os, const CoordMap& f)
{
    os << "diag";
    for (auto& [d, c] : f.diag)
        os << " " << d << ":" << c;
    if (!f.except.empty()) {
        os << " except";
        for (auto& [i, col] : f.except) {
            os << " " << i << "=(";
            bool first = true;
            for (auto& [w, c] : col) {
                os << (first ? "" : " ") << w << ":" << c;
                first = false;
            }
            os << ")";
        }
    }
}

void emit_map(std::ostream& os, const GradedMap& f)
{
    for (auto& [t, cm] : f.comp) {
        os << "t " << t << " ";
        if (is_fin(cm.src) && is_fin(cm.tgt))
            emit_matrix(os, cm);
        else
            emit_terms(os, cm);
        os << "\n";
    }
}

std::vector<std::string> tokens(const std::string& line)
{
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string t;
    while (is >> t)
        out.push_back(t);
    return out;
}

std::pair<int, int> parse_term(const std::string& s)
{
    auto c = s.find(':');
    if (c == std::string::npos)
        throw std::invalid_argument("bad term '" + s + "'");
    return {parse_idx(s.substr(0, c)), std::stoi(s.substr(c + 1))};
}

// body lines of one map section -> per-degree components
std::map<int, CoordMap> parse_map_body(const std::vector<std::string>& lines,
                                       const GradedObject& src, const GradedObject& tgt,
                                       int deg, int p)
{
    std::map<int, CoordMap> comp;
    for (auto& line : lines) {
        auto tk = tokens(line);
        if (tk.size() < 3 || tk[0] != "t")
            throw std::invalid_argument("bad map line '" + line + "'");
        int t = parse_idx(tk[1]);
        CoordObject s = src.at(t), g = tgt.at(t + deg);
        if (tk[2] == "mat") {
            if (tk.size() < 5)
                throw std::invalid_argument("bad matrix line '" + line + "'");
            int rows = std::stoi(tk[3]), cols = std::stoi(tk[4]);
            if (int(tk.size()) != 5 + rows * cols)
                throw std::invalid_argument("matrix entry count mismatch");
            std::map<int, SparseVec> ex;
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < cols; ++c) {
                    int v = std::stoi(tk[5 + r * cols + c]);
                    if (v != 0)
                        ex[c][r] = v;
                }
            comp[t] = coord_map(s, g, {}, std::move(ex));
        } else if (tk[2] == "diag") {
            std::map<int, int> diag;
            std::map<int, SparseVec> ex;
            size_t k = 3;
            for (; k < tk.size() && tk[k] != "except"; ++k)
                diag.insert(parse_term(tk[k]));
            if (k < tk.size()) {
                // except i=(w:c w:c) groups, possibly split across tokens
                std::string rest;
                for (++k; k < tk.size(); ++k)
                    rest += tk[k] + " ";
                std::istringstream is(rest);
                std::string piece;
                int cur = 0;
                bool open = false;
                while (is >> piece) {
                    if (!open) {
                        auto eq = piece.find("=(");
                        if (eq == std::string::npos)
                            throw std::invalid_argument("bad except group '" + piece + "'");
                        cur = parse_idx(piece.substr(0, eq));
                        ex[cur];
                        piece = piece.substr(eq + 2);
                        open = true;
                    }
                    if (!piece.empty() && piece.back() == ')') {
                        piece.pop_back();
                        open = false;
                    }
                    if (!piece.empty())
                        ex[cur].insert(parse_term(piece));
                }
                if (open)
                    throw std::invalid_argument("unterminated except group");
            }
            comp[t] = coord_map(s, g, std::move(diag), std::move(ex));
        } else {
            throw std::invalid_argument("bad map entry '" + tk[2] + "'");
        }
    }
    return comp;
}

struct Section {
    std::vector<std::string> head;  // tokens inside [...]
    std::vector<std::string> body;
};

std::vector<Section> split_sections(const std::string& text)
{
    std::vector<Section> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        if (line.front() == '[') {
            auto close = line.find(']');
            if (close == std::string::npos)
                throw std::invalid_argument("unterminated section header");
            out.push_back({tokens(line.substr(1, close - 1)), {}});
        } else {
            if (out.empty())
                throw std::invalid_argument("content before first section");
            out.back().body.push_back(line);
        }
    }
    return out;
}

}  // namespace

std::string write_ces(const CESystem& sys)
{
    std::ostringstream os;
    os << "[system]\n";
    os << "p " << sys.p << "\n";
    os << "window " << sys.a << " " << sys.b << "\n";
    int t0 = 0, t1 = 0;
    bool seen = false;
    for (auto& [ij, h] : sys.obj)
        for (int t : graded_degrees(h)) {
            t0 = seen ? std::min(t0, t) : t;
            t1 = seen ? std::max(t1, t) : t;
            seen = true;
        }
    os << "degrees " << t0 << " " << t1 << "\n";
    os << "endpoints";
    if (sys.has_neg)
        os << " neg";
    if (sys.has_pos)
        os << " pos";
    if (!sys.has_neg && !sys.has_pos)
        os << " none";
    os << "\n";
    os << "tail " << tail_str(sys.tail) << "\n";
    if (!sys.builtin.empty())
        os << "builtin " << sys.builtin << "\n";
    for (auto& [ij, h] : sys.obj) {
        os << "\n[object " << idx_str(ij.first) << " " << idx_str(ij.second) << "]\n";
        for (auto& [t, v] : h.comp)
            os << "t " << t << " " << to_string(v) << "\n";
    }
    std::map<std::tuple<int, int, int, int>, const GradedMap*> etas;
    for (auto& [ij, f] : sys.stepj)
        etas[{ij.first, ij.second, ij.first, sys.succ(ij.second)}] = &f;
    for (auto& [ij, f] : sys.stepi)
        etas[{ij.first, ij.second, sys.succ(ij.first), ij.second}] = &f;
    for (auto& [key, f] : etas) {
        auto [i, j, i2, j2] = key;
        os << "\n[eta " << idx_str(i) << " " << idx_str(j) << " -> " << idx_str(i2)
           << " " << idx_str(j2) << "]\n";
        emit_map(os, *f);
    }
    for (auto& [j, f] : sys.delgen) {
        os << "\n[del " << idx_str(sys.bot()) << " " << idx_str(j) << " "
           << idx_str(sys.top()) << "]\n";
        emit_map(os, f);
    }
    return os.str();
}

CESystem read_ces(const std::string& text)
{
    auto secs = split_sections(text);
    if (secs.empty() || secs[0].head != std::vector<std::string>{"system"})
        throw std::invalid_argument("missing [system] section");
    CESystem sys;
    for (auto& line : secs[0].body) {
        auto tk = tokens(line);
        if (tk.empty())
            continue;
        if (tk[0] == "p" && tk.size() == 2) {
            sys.p = std::stoi(tk[1]);
        } else if (tk[0] == "window" && tk.size() == 3) {
            sys.a = std::stoi(tk[1]);
            sys.b = std::stoi(tk[2]);
        } else if (tk[0] == "degrees" && tk.size() == 3) {
            // informative; actual degrees come from the object sections
        } else if (tk[0] == "endpoints") {
            for (size_t k = 1; k < tk.size(); ++k) {
                if (tk[k] == "neg")
                    sys.has_neg = true;
                else if (tk[k] == "pos")
                    sys.has_pos = true;
                else if (tk[k] != "none")
                    throw std::invalid_argument("bad endpoint '" + tk[k] + "'");
            }
        } else if (tk[0] == "tail" && tk.size() == 2) {
            sys.tail = parse_tail(tk[1]);
        } else if (tk[0] == "builtin" && tk.size() == 2) {
            sys.builtin = tk[1];
        } else {
            throw std::invalid_argument("bad system line '" + line + "'");
        }
    }
    if (sys.a > sys.b)
        throw std::invalid_argument("window out of order");
    for (size_t si = 1; si < secs.size(); ++si) {
        auto& h = secs[si].head;
        if (h.size() == 3 && h[0] == "object") {
            int i = parse_idx(h[1]), j = parse_idx(h[2]);
            std::map<int, CoordObject> comp;
            for (auto& line : secs[si].body) {
                auto tk = tokens(line);
                if (tk.size() < 3 || tk[0] != "t")
                    throw std::invalid_argument("bad object line '" + line + "'");
                std::string desc;
                for (size_t k = 2; k < tk.size(); ++k)
                    desc += tk[k];
                comp[parse_idx(tk[1])] = parse_coord(sys.p, desc);
            }
            GradedObject g = graded_object(sys.p, std::move(comp));
            if (!graded_is_zero(g))
                sys.obj[{i, j}] = g;
        }
    }
    auto obj_at = [&](int i, int j) {
        auto it = sys.obj.find({i, j});
        return it == sys.obj.end() ? graded_zero(sys.p) : it->second;
    };
    for (size_t si = 1; si < secs.size(); ++si) {
        auto& h = secs[si].head;
        if (h.size() == 6 && h[0] == "eta" && h[3] == "->") {
            int i = parse_idx(h[1]), j = parse_idx(h[2]);
            int i2 = parse_idx(h[4]), j2 = parse_idx(h[5]);
            GradedObject src = obj_at(i, j), tgt = obj_at(i2, j2);
            GradedMap f = graded_map(src, tgt, 0,
                                     parse_map_body(secs[si].body, src, tgt, 0, sys.p));
            if (i2 == i && j2 == sys.succ(j))
                sys.stepj[{i, j}] = f;
            else if (i2 == sys.succ(i) && j2 == j)
                sys.stepi[{i, j}] = f;
            else
                throw std::invalid_argument("eta section is not a single step");
        } else if (h.size() == 4 && h[0] == "del") {
            int i = parse_idx(h[1]), j = parse_idx(h[2]), k = parse_idx(h[3]);
            if (i != sys.bot() || k != sys.top())
                throw std::invalid_argument("del section must span the endpoints");
            GradedObject src = obj_at(j, k), tgt = obj_at(i, j);
            sys.delgen[j] = graded_map(src, tgt, -1,
                                       parse_map_body(secs[si].body, src, tgt, -1, sys.p));
        } else if (!(h.size() == 3 && h[0] == "object")) {
            throw std::invalid_argument("unknown section [" + (h.empty() ? "" : h[0]) + "]");
        }
    }
    if (!sys.builtin.empty()) {
        if (sys.builtin == "example81") {
            CESystem ref = example_8_1(sys.p);
            sys.ext_obj = ref.ext_obj;
            sys.ext_eta = ref.ext_eta;
            sys.ext_del = ref.ext_del;
        } else {
            throw std::invalid_argument("unknown builtin '" + sys.builtin + "'");
        }
    }
    return sys;
}

void write_ces_file(const std::string& path, const CESystem& sys)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    os << write_ces(sys);
}

CESystem read_ces_file(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << is.rdbuf();
    return read_ces(buf.str());
}

std::string system_digest(const CESystem& sys)
{
    std::string text = write_ces(sys);
    unsigned long long h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", h);
    return out;
}

}  // namespace sseq
