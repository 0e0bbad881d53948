#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "field.hpp"
#include "grid.hpp"
#include "nfold.hpp"

namespace salamander {

// Text format, one declaration per line, '#' to end of line is a comment:
//   field gf P | field q
//   object i r dim          dv i r MATRIX          dh i r MATRIX
//   object i r s dim        d1|d2|d3 i r s MATRIX   (triple complexes)
// MATRIX is "[a,b;c,d]" with rows separated by ';'; scalars are integers or a/b.
using AnyComplex = std::variant<DoubleComplex<PrimeField>, DoubleComplex<RationalField>, TripleComplex<PrimeField>,
                                TripleComplex<RationalField>>;

inline bool is_triple(const AnyComplex& c) { return c.index() >= 2; }

namespace detail {

struct Token {
    std::string text;
    int col = 0;  // 1-based
};

struct RawMatrix {
    std::vector<std::vector<Token>> rows;
    int line = 0, col = 0;
};

struct RawMap {
    std::string kind;  // dv dh d1 d2 d3
    Position3 pos{};
    RawMatrix m;
};

inline std::vector<Token> split_words(std::string_view s, std::size_t& stop, std::size_t max_words) {
    std::vector<Token> out;
    std::size_t k = 0;
    while (k < s.size() && out.size() < max_words) {
        while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
        if (k >= s.size() || s[k] == '[') break;
        std::size_t b = k;
        while (k < s.size() && !std::isspace(static_cast<unsigned char>(s[k])) && s[k] != '[') ++k;
        out.push_back({std::string(s.substr(b, k - b)), static_cast<int>(b) + 1});
    }
    while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
    stop = k;
    return out;
}

inline long parse_index(const Token& t, int line) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(t.text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != t.text.size() || t.text.empty()) throw ParseError(line, t.col, "expected an integer, got '" + t.text + "'");
    return v;
}

inline RawMatrix parse_matrix_text(std::string_view s, std::size_t at, int line) {
    RawMatrix m{{}, line, static_cast<int>(at) + 1};
    if (at >= s.size() || s[at] != '[') throw ParseError(line, static_cast<int>(at) + 1, "expected '['");
    std::size_t k = at + 1;
    std::vector<Token> row;
    std::string cur;
    int cur_col = 0;
    auto flush = [&](int col_here) {
        if (cur.empty()) throw ParseError(line, col_here, "missing scalar");
        row.push_back({cur, cur_col});
        cur.clear();
    };
    bool closed = false;
    for (; k < s.size(); ++k) {
        char ch = s[k];
        int col = static_cast<int>(k) + 1;
        if (std::isspace(static_cast<unsigned char>(ch))) continue;
        if (ch == ']') {
            if (!(cur.empty() && row.empty() && m.rows.empty())) {
                flush(col);
                m.rows.push_back(std::move(row));
            }
            closed = true;
            ++k;
            break;
        }
        if (ch == ',') {
            flush(col);
            continue;
        }
        if (ch == ';') {
            flush(col);
            m.rows.push_back(std::move(row));
            row.clear();
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+' || ch == '/') {
            if (cur.empty()) cur_col = col;
            cur.push_back(ch);
            continue;
        }
        throw ParseError(line, col, std::string("unexpected character '") + ch + "' in matrix");
    }
    if (!closed) throw ParseError(line, static_cast<int>(s.size()) + 1, "unterminated matrix");
    while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
    if (k < s.size()) throw ParseError(line, static_cast<int>(k) + 1, "trailing text after matrix");
    for (const auto& r : m.rows)
        if (r.size() != m.rows.front().size())
            throw ParseError(line, r.empty() ? m.col : r.front().col, "matrix rows have different lengths");
    return m;
}

template <class F>
Matrix<F> build_matrix(const F& f, const RawMatrix& m) {
    std::size_t rows = m.rows.size(), cols = rows ? m.rows.front().size() : 0;
    Matrix<F> out(f, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            const auto& t = m.rows[i][j];
            try {
                out(i, j) = f.parse(t.text);
            } catch (const Error& e) {
                throw ParseError(m.line, t.col, std::string("bad scalar '") + t.text + "': " + e.what());
            }
        }
    return out;
}

template <class C>
C assemble(const typename std::decay_t<decltype(std::declval<C>().field())>& f, int arity,
           const std::map<Position3, std::size_t>& objects, const std::vector<RawMap>& maps) {
    using F = std::decay_t<decltype(std::declval<C>().field())>;
    auto shape_check = [&](const RawMap& rm, const Matrix<F>& m, std::size_t need_r, std::size_t need_c) {
        if (m.rows() != need_r || m.cols() != need_c)
            throw ParseError(rm.m.line, rm.m.col,
                             "dimension mismatch: matrix is " + m.shape() + ", needed " + std::to_string(need_r) + "x" +
                                 std::to_string(need_c));
    };
    auto dim = [&](Position3 p) {
        auto it = objects.find(p);
        return it == objects.end() ? std::size_t{0} : it->second;
    };
    if constexpr (std::is_same_v<C, DoubleComplex<F>>) {
        (void)arity;
        C c(f);
        for (const auto& [p, d] : objects) c.set_dim({p[0], p[1]}, d);
        if (!objects.empty()) {
            Window w;
            for (const auto& [p, d] : objects) w.include({p[0], p[1]});
            c.set_window(w);
        }
        for (const auto& rm : maps) {
            Matrix<F> m = build_matrix(f, rm.m);
            Position p{rm.pos[0], rm.pos[1]};
            Position t = rm.kind == "dv" ? p.down() : p.right();
            shape_check(rm, m, dim({t.i, t.r, 0}), dim(rm.pos));
            if (!m.empty()) c.set_d(p, rm.kind == "dv" ? Direction::vertical : Direction::horizontal, m);
        }
        return c;
    } else {
        C t(f, arity);
        for (const auto& [p, d] : objects) t.set_dim(p, d);
        for (const auto& rm : maps) {
            Matrix<F> m = build_matrix(f, rm.m);
            int axis = rm.kind[1] - '1';
            shape_check(rm, m, dim(shifted(rm.pos, 1u << axis)), dim(rm.pos));
            if (!m.empty()) t.set_d(rm.pos, axis, m);
        }
        return t;
    }
}

}  // namespace detail

inline AnyComplex parse_complex(std::string_view text) {
    std::optional<FieldSpec> field;
    int arity = 0;
    std::map<Position3, std::size_t> objects;
    std::map<Position3, int> object_line;
    std::vector<detail::RawMap> maps;
    std::map<std::pair<std::string, Position3>, int> map_line;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        ++line_no;
        start = end + 1;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        std::size_t stop = 0;
        auto words = detail::split_words(line, stop, 8);
        if (words.empty()) {
            if (stop < line.size()) throw ParseError(line_no, static_cast<int>(stop) + 1, "expected a keyword");
            if (end == text.size()) break;
            continue;
        }
        const auto& kw = words.front();
        auto set_arity = [&](int a, const detail::Token& at) {
            if (arity && arity != a)
                throw ParseError(line_no, at.col, "mixes double-complex and triple-complex declarations");
            arity = a;
        };
        if (kw.text == "field") {
            if (field) throw ParseError(line_no, kw.col, "duplicate field declaration");
            if (!objects.empty() || !maps.empty()) throw ParseError(line_no, kw.col, "field must be declared first");
            if (words.size() == 2 && words[1].text == "q" && stop == line.size()) {
                field = FieldSpec{FieldKind::rationals, 0};
            } else if (words.size() == 3 && words[1].text == "gf" && stop == line.size()) {
                long p = detail::parse_index(words[2], line_no);
                if (p < 2 || p >= (1L << 31) || !is_prime(static_cast<std::uint64_t>(p)))
                    throw ParseError(line_no, words[2].col, "modulus " + words[2].text + " is not prime");
                field = FieldSpec{FieldKind::prime, static_cast<std::uint32_t>(p)};
            } else {
                throw ParseError(line_no, kw.col, "expected 'field gf P' or 'field q'");
            }
            continue;
        }
        if (!field) throw ParseError(line_no, kw.col, "missing field declaration before '" + kw.text + "'");
        if (kw.text == "object") {
            if ((words.size() != 4 && words.size() != 5) || stop != line.size())
                throw ParseError(line_no, kw.col, "expected 'object i r dim' or 'object i r s dim'");
            set_arity(words.size() == 4 ? 2 : 3, kw);
            Position3 p{0, 0, 0};
            for (std::size_t k = 1; k + 1 < words.size(); ++k)
                p[k - 1] = static_cast<int>(detail::parse_index(words[k], line_no));
            long d = detail::parse_index(words.back(), line_no);
            if (d < 0) throw ParseError(line_no, words.back().col, "negative dimension");
            if (object_line.count(p))
                throw ParseError(line_no, kw.col, "duplicate declaration of object (first on line " +
                                                      std::to_string(object_line[p]) + ")");
            object_line[p] = line_no;
            if (d) objects[p] = static_cast<std::size_t>(d);
            continue;
        }
        bool dbl = kw.text == "dv" || kw.text == "dh";
        bool tri = kw.text == "d1" || kw.text == "d2" || kw.text == "d3";
        if (!dbl && !tri) throw ParseError(line_no, kw.col, "unknown keyword '" + kw.text + "'");
        std::size_t ncoords = dbl ? 2 : 3;
        if (words.size() != ncoords + 1)
            throw ParseError(line_no, kw.col, "expected " + std::to_string(ncoords) + " coordinates before the matrix");
        set_arity(dbl ? 2 : 3, kw);
        detail::RawMap rm;
        rm.kind = kw.text;
        for (std::size_t k = 0; k < ncoords; ++k)
            rm.pos[k] = static_cast<int>(detail::parse_index(words[k + 1], line_no));
        rm.m = detail::parse_matrix_text(line, stop, line_no);
        auto key = std::pair(rm.kind, rm.pos);
        if (map_line.count(key))
            throw ParseError(line_no, kw.col, "duplicate declaration of " + rm.kind + " (first on line " +
                                                  std::to_string(map_line[key]) + ")");
        map_line[key] = line_no;
        maps.push_back(std::move(rm));
    }
    if (!field) throw ParseError(line_no, 1, "missing field declaration");
    if (!arity) arity = 2;
    if (field->kind == FieldKind::prime) {
        PrimeField f(field->modulus);
        if (arity == 2) return detail::assemble<DoubleComplex<PrimeField>>(f, 2, objects, maps);
        return detail::assemble<TripleComplex<PrimeField>>(f, 3, objects, maps);
    }
    RationalField q;
    if (arity == 2) return detail::assemble<DoubleComplex<RationalField>>(q, 2, objects, maps);
    return detail::assemble<TripleComplex<RationalField>>(q, 3, objects, maps);
}

namespace detail {

template <class F>
std::string field_line(const F& f) {
    if constexpr (std::is_same_v<F, PrimeField>)
        return "field gf " + std::to_string(f.modulus()) + "\n";
    else
        return "field q\n";
}

template <class F>
std::string matrix_text(const Matrix<F>& m) {
    std::string s = "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i) s += ";";
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) s += ",";
            s += m.field().to_string(m(i, j));
        }
    }
    return s + "]";
}

}  // namespace detail

// Normal form: field, objects sorted by position, then nonzero maps sorted by
// position with vertical before horizontal (d1, d2, d3 for triples).
template <class F>
std::string print_complex(const DoubleComplex<F>& c) {
    std::string s = detail::field_line(c.field());
    for (Position p : c.support())
        s += "object " + std::to_string(p.i) + " " + std::to_string(p.r) + " " + std::to_string(c.dim(p)) + "\n";
    for (Position p : c.support())
        for (Direction dir : {Direction::vertical, Direction::horizontal}) {
            auto m = c.d(p, dir);
            if (m.empty() || m.is_zero()) continue;
            s += std::string(dir == Direction::vertical ? "dv " : "dh ") + std::to_string(p.i) + " " +
                 std::to_string(p.r) + " " + detail::matrix_text(m) + "\n";
        }
    return s;
}

template <class F>
std::string print_complex(const CubicalComplex<F>& t) {
    if (t.arity() != 3) throw PreconditionUnmet("only triple complexes have a cubical file form");
    std::string s = detail::field_line(t.field());
    auto coords = [](const Position3& p) {
        return std::to_string(p[0]) + " " + std::to_string(p[1]) + " " + std::to_string(p[2]);
    };
    for (const auto& p : t.support()) s += "object " + coords(p) + " " + std::to_string(t.dim(p)) + "\n";
    for (const auto& p : t.support())
        for (int k = 0; k < 3; ++k) {
            auto m = t.d(p, k);
            if (m.empty() || m.is_zero()) continue;
            s += "d" + std::to_string(k + 1) + " " + coords(p) + " " + detail::matrix_text(m) + "\n";
        }
    return s;
}

inline std::string print_complex(const AnyComplex& c) {
    return std::visit([](const auto& x) { return print_complex(x); }, c);
}

}  // namespace salamander
