/*
   Copyright 2026 The kxcn authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

/**
 * @file io.hpp
 * @brief Text formats for scalars, polynomials, matrices, module
 *        presentations, operators and sparse vectors.
 *
 * Scalar literals: "a" or "a/b" over Q; "r" or "r mod p" over F_p.
 * Polynomials: terms like "c", "c*x", "c*x^k" joined by '+' or '-'.
 * Sparse vectors: terms like "c*e<i>" or "c*e<n,j>" joined the same way.
 * File formats:
 *   matrix <rows> <cols> over <Q|Fp p>   then one row of scalars per line
 *   module over <Q|Fp p>                 then "free <r>", then one torsion
 *                                        polynomial per line
 *   operator <builtin> over <Q|Fp p>     or "operator banded <B> over ...",
 *                                        followed by "e<i> -> <vector>" rules
 * Blank lines and '#' comments are ignored everywhere. Rendering always
 * produces the canonical spelling, so render-then-parse is the identity.
 */

#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kxcn/errors.hpp"
#include "kxcn/kxmodule.hpp"
#include "kxcn/matrix.hpp"
#include "kxcn/operators.hpp"
#include "kxcn/poly.hpp"
#include "kxcn/scalars.hpp"

namespace kxcn {

// ---------------------------------------------------------------------------
// low-level text helpers

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

/// Content lines of a file: comments ('#' to end of line) and blank lines
/// removed, remaining lines trimmed.
inline std::vector<std::string> significant_lines(const std::string& content) {
    std::vector<std::string> out;
    std::istringstream is(content);
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

inline std::uint64_t parse_uint64(const std::string& s) {
    std::uint64_t v = 0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e || s.empty()) throw invalid_input("expected an unsigned integer, got '" + s + "'");
    return v;
}

inline bool looks_like_integer(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

inline mpz_class parse_mpz(const std::string& s) {
    if (!looks_like_integer(s)) throw invalid_input("expected an integer, got '" + s + "'");
    return mpz_class(s, 10);
}

/// Splits a sum expression at top-level '+'/'-' signs. A sign separates
/// terms when the previous significant character ends a term (a digit, 'x'
/// or '>'); otherwise it is part of a coefficient.
inline std::vector<std::string> split_sum_terms(const std::string& s) {
    std::vector<std::string> terms;
    std::string cur;
    char prev = 0;
    const auto flush = [&] {
        std::string t = trim(cur);
        if (t.size() > 1 && t[0] == '-') t = "-" + trim(t.substr(1));
        if (!t.empty()) terms.push_back(std::move(t));
        cur.clear();
        prev = 0;
    };
    for (char c : s) {
        if ((c == '+' || c == '-') && (std::isdigit(static_cast<unsigned char>(prev)) || prev == 'x' || prev == '>')) {
            flush();
            if (c == '-') cur.push_back('-');
            continue;
        }
        cur.push_back(c);
        if (!std::isspace(static_cast<unsigned char>(c))) prev = c;
    }
    flush();
    if (terms.empty()) throw invalid_input("empty expression");
    return terms;
}

// ---------------------------------------------------------------------------
// field tags

struct FieldSpec {
    bool rational = true;
    std::uint64_t p = 0;

    static FieldSpec Q() { return {true, 0}; }
    static FieldSpec Fp(std::uint64_t p) {
        ensure_valid_modulus(p);
        return {false, p};
    }

    std::string to_string() const { return rational ? "Q" : "Fp " + std::to_string(p); }

    friend bool operator==(const FieldSpec& a, const FieldSpec& b) {
        return a.rational == b.rational && a.p == b.p;
    }
    friend bool operator!=(const FieldSpec& a, const FieldSpec& b) { return !(a == b); }
};

/// Parses the tokens following "over": "Q" or "Fp <p>".
inline FieldSpec parse_field_tokens(const std::vector<std::string>& tokens, std::size_t pos) {
    if (pos >= tokens.size()) throw invalid_input("missing field tag");
    if (tokens[pos] == "Q") {
        if (pos + 1 != tokens.size()) throw invalid_input("unexpected tokens after field tag");
        return FieldSpec::Q();
    }
    if (tokens[pos] == "Fp") {
        if (pos + 2 != tokens.size()) throw invalid_input("expected 'Fp <p>'");
        return FieldSpec::Fp(parse_uint64(tokens[pos + 1]));
    }
    throw invalid_input("unknown field tag '" + tokens[pos] + "' (expected Q or Fp <p>)");
}

/// Parses a --field flag value: "Q", "Fp:<p>" or "Fp <p>".
inline FieldSpec parse_field_flag(const std::string& value) {
    const std::string v = trim(value);
    if (v == "Q") return FieldSpec::Q();
    if (v.rfind("Fp:", 0) == 0) return FieldSpec::Fp(parse_uint64(v.substr(3)));
    const auto tokens = split_ws(v);
    if (tokens.size() == 2 && tokens[0] == "Fp") return FieldSpec::Fp(parse_uint64(tokens[1]));
    throw invalid_input("bad field flag '" + value + "' (expected Q or Fp:<p>)");
}

// ---------------------------------------------------------------------------
// scalar literals

inline Rational parse_scalar_text(const std::string& text, const Rational&) {
    const auto tokens = split_ws(text);
    if (tokens.size() != 1) throw invalid_input("bad rational literal '" + text + "'");
    const std::string& t = tokens[0];
    const auto slash = t.find('/');
    if (slash == std::string::npos) return Rational(parse_mpz(t));
    const mpz_class num = parse_mpz(t.substr(0, slash));
    const mpz_class den = parse_mpz(t.substr(slash + 1));
    if (den == 0) throw invalid_input("zero denominator in '" + text + "'");
    return Rational(num, den);
}

inline PrimeField parse_scalar_text(const std::string& text, const PrimeField& exemplar) {
    const auto tokens = split_ws(text);
    if (tokens.size() != 1 && !(tokens.size() == 3 && tokens[1] == "mod")) {
        throw invalid_input("bad prime-field literal '" + text + "'");
    }
    if (tokens.size() == 3) {
        const std::uint64_t p = parse_uint64(tokens[2]);
        if (p != exemplar.modulus()) {
            throw invalid_input("literal modulus " + tokens[2] + " does not match field modulus " +
                                std::to_string(exemplar.modulus()));
        }
    }
    const mpz_class raw = parse_mpz(tokens[0]);
    mpz_class p(static_cast<unsigned long>(exemplar.modulus()));
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), raw.get_mpz_t(), p.get_mpz_t());
    return PrimeField(r.get_ui(), exemplar.modulus());
}

/// Consumes one scalar from a whitespace token stream (handles the
/// three-token "r mod p" spelling over prime fields).
inline Rational next_scalar(const std::vector<std::string>& tokens, std::size_t& pos, const Rational& exemplar) {
    if (pos >= tokens.size()) throw invalid_input("expected a scalar");
    return parse_scalar_text(tokens[pos++], exemplar);
}

inline PrimeField next_scalar(const std::vector<std::string>& tokens, std::size_t& pos, const PrimeField& exemplar) {
    if (pos >= tokens.size()) throw invalid_input("expected a scalar");
    std::string text = tokens[pos++];
    if (pos < tokens.size() && tokens[pos] == "mod") {
        if (pos + 1 >= tokens.size()) throw invalid_input("dangling 'mod'");
        text += " mod " + tokens[pos + 1];
        pos += 2;
    }
    return parse_scalar_text(text, exemplar);
}

// ---------------------------------------------------------------------------
// polynomials

template <FieldScalar K>
Poly<K> parse_poly_text(const std::string& text, const K& exemplar) {
    const K zero = zero_like(exemplar);
    const K one = one_like(exemplar);
    std::map<std::size_t, K> coeffs;
    for (const std::string& term : split_sum_terms(text)) {
        const auto xp = term.find('x');
        K c = zero;
        std::size_t deg = 0;
        if (xp == std::string::npos) {
            c = parse_scalar_text(term, exemplar);
        } else {
            std::string head = trim(term.substr(0, xp));
            if (!head.empty() && head.back() == '*') head = trim(head.substr(0, head.size() - 1));
            if (head.empty()) c = one;
            else if (head == "-") c = -one;
            else c = parse_scalar_text(head, exemplar);
            const std::string tail = trim(term.substr(xp + 1));
            if (tail.empty()) deg = 1;
            else if (tail[0] == '^') deg = static_cast<std::size_t>(parse_uint64(trim(tail.substr(1))));
            else throw invalid_input("bad polynomial term '" + term + "'");
        }
        auto it = coeffs.find(deg);
        if (it == coeffs.end()) coeffs.emplace(deg, c);
        else it->second = it->second + c;
    }
    std::size_t top = 0;
    for (const auto& [d, c] : coeffs) {
        if (!c.is_zero()) top = std::max(top, d + 1);
    }
    std::vector<K> out(top, zero);
    for (const auto& [d, c] : coeffs) {
        if (d < top) out[d] = c;
    }
    return Poly<K>(std::move(out));
}

// ---------------------------------------------------------------------------
// matrix files

struct MatrixHeader {
    std::size_t rows = 0;
    std::size_t cols = 0;
    FieldSpec field;
};

/// "matrix <rows> <cols> over <Q|Fp p>"
inline MatrixHeader parse_matrix_header(const std::string& line) {
    const auto tokens = split_ws(line);
    if (tokens.size() < 5 || tokens[0] != "matrix" || tokens[3] != "over") {
        throw invalid_input("bad matrix header '" + line + "'");
    }
    MatrixHeader h;
    h.rows = static_cast<std::size_t>(parse_uint64(tokens[1]));
    h.cols = static_cast<std::size_t>(parse_uint64(tokens[2]));
    h.field = parse_field_tokens(tokens, 4);
    return h;
}

template <FieldScalar K>
Matrix<K> parse_matrix_body(const std::vector<std::string>& body, const MatrixHeader& header, const K& exemplar) {
    if (body.size() != header.rows) {
        throw invalid_input("matrix body has " + std::to_string(body.size()) + " rows, header declares " +
                            std::to_string(header.rows));
    }
    Matrix<K> m = Matrix<K>::zeros(header.rows, header.cols, exemplar);
    for (std::size_t i = 0; i < header.rows; ++i) {
        const auto tokens = split_ws(body[i]);
        std::size_t pos = 0;
        for (std::size_t j = 0; j < header.cols; ++j) m(i, j) = next_scalar(tokens, pos, exemplar);
        if (pos != tokens.size()) throw invalid_input("trailing tokens in matrix row " + std::to_string(i + 1));
    }
    return m;
}

template <FieldScalar K>
std::string render_matrix_file(const Matrix<K>& m, const FieldSpec& field) {
    std::string out = "matrix " + std::to_string(m.rows()) + " " + std::to_string(m.cols()) + " over " +
                      field.to_string() + "\n";
    out += m.to_string();
    return out;
}

// ---------------------------------------------------------------------------
// module files

/// "module over <Q|Fp p>", then "free <r>", then one torsion polynomial per line.
inline FieldSpec parse_module_header(const std::string& line) {
    const auto tokens = split_ws(line);
    if (tokens.size() < 3 || tokens[0] != "module" || tokens[1] != "over") {
        throw invalid_input("bad module header '" + line + "'");
    }
    return parse_field_tokens(tokens, 2);
}

template <FieldScalar K>
ModulePresentation<K> parse_module_body(const std::vector<std::string>& body, const K& exemplar) {
    if (body.empty()) throw invalid_input("module file is missing the 'free <r>' line");
    const auto free_tokens = split_ws(body[0]);
    if (free_tokens.size() != 2 || free_tokens[0] != "free") {
        throw invalid_input("expected 'free <r>', got '" + body[0] + "'");
    }
    ModulePresentation<K> m;
    m.free_rank = static_cast<std::size_t>(parse_uint64(free_tokens[1]));
    for (std::size_t i = 1; i < body.size(); ++i) {
        m.torsion.push_back(parse_poly_text(body[i], exemplar));
    }
    validate_presentation(m);
    return m;
}

template <FieldScalar K>
std::string render_module_file(const ModulePresentation<K>& m, const FieldSpec& field) {
    std::string out = "module over " + field.to_string() + "\n";
    out += "free " + std::to_string(m.free_rank) + "\n";
    for (const auto& f : m.torsion) out += f.to_string() + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// sparse vectors

inline BasisIndex parse_basis_index(const std::string& text) {
    const std::string t = trim(text);
    if (t.size() < 4 || t[0] != 'e' || t[1] != '<' || t.back() != '>') {
        throw invalid_input("bad basis index '" + text + "' (expected e<i> or e<n,j>)");
    }
    const std::string inner = t.substr(2, t.size() - 3);
    const auto comma = inner.find(',');
    if (comma == std::string::npos) return mono_index(parse_uint64(trim(inner)));
    return graded_index(parse_uint64(trim(inner.substr(0, comma))), parse_uint64(trim(inner.substr(comma + 1))));
}

template <FieldScalar K>
SparseVector<K> parse_sparse_vector(const std::string& text, const K& exemplar) {
    const K one = one_like(exemplar);
    SparseVector<K> v;
    if (trim(text) == "0") return v;
    for (const std::string& term : split_sum_terms(text)) {
        const auto ep = term.find('e');
        if (ep == std::string::npos) throw invalid_input("bad vector term '" + term + "' (no basis index)");
        std::string head = trim(term.substr(0, ep));
        if (!head.empty() && head.back() == '*') head = trim(head.substr(0, head.size() - 1));
        K c = one;
        if (head == "-") c = -one;
        else if (!head.empty()) c = parse_scalar_text(head, exemplar);
        v.add_term(parse_basis_index(term.substr(ep)), c);
    }
    return v;
}

// ---------------------------------------------------------------------------
// operator files

struct OperatorHeader {
    std::string name;                       // builtin name, or "banded"
    std::optional<std::uint64_t> band;      // present for user-defined banded operators
    FieldSpec field;
};

/// "operator <builtin> over <F>" or "operator banded <B> over <F>"
inline OperatorHeader parse_operator_header(const std::string& line) {
    const auto tokens = split_ws(line);
    if (tokens.size() < 4 || tokens[0] != "operator") throw invalid_input("bad operator header '" + line + "'");
    OperatorHeader h;
    h.name = tokens[1];
    std::size_t over_pos = 2;
    if (h.name == "banded") {
        if (tokens.size() < 5) throw invalid_input("banded operator header needs a band bound");
        h.band = parse_uint64(tokens[2]);
        over_pos = 3;
    }
    if (tokens[over_pos] != "over") throw invalid_input("bad operator header '" + line + "'");
    h.field = parse_field_tokens(tokens, over_pos + 1);
    return h;
}

template <FieldScalar K>
struct ParsedOperator {
    BasisOperator<K> op;
    std::string canonical;  // canonical spelling of the whole file
};

template <FieldScalar K>
ParsedOperator<K> parse_operator_body(const OperatorHeader& header, const std::vector<std::string>& body,
                                      const K& exemplar) {
    const K one = one_like(exemplar);
    if (!header.band) {
        if (!body.empty()) throw invalid_input("built-in operators take no rule lines");
        BasisOperator<K> op = [&]() {
            if (header.name == "left_shift") return make_left_shift(one);
            if (header.name == "homothecy_hx") return make_homothecy_hx(one);
            if (header.name == "poly_derivative") return make_poly_derivative(one);
            if (header.name == "even_odd") return make_even_odd(one);
            throw invalid_input("unknown built-in operator '" + header.name + "'");
        }();
        return {std::move(op), "operator " + header.name + " over " + header.field.to_string() + "\n"};
    }

    // user-defined banded operator: the declared index set is exactly the
    // set of rule sources
    auto rules = std::make_shared<std::map<BasisIndex, SparseVector<K>>>();
    for (const std::string& line : body) {
        const auto arrow = line.find("->");
        if (arrow == std::string::npos) throw invalid_input("rule line without '->': '" + line + "'");
        const BasisIndex src = parse_basis_index(trim(line.substr(0, arrow)));
        const SparseVector<K> img = parse_sparse_vector(line.substr(arrow + 2), exemplar);
        for (const auto& [b, c] : img.terms()) {
            const std::uint64_t dp = b.primary > src.primary ? b.primary - src.primary : src.primary - b.primary;
            std::uint64_t ds = 0;
            if (b.secondary.has_value() != src.secondary.has_value()) {
                throw invalid_input("rule mixes plain and graded indices");
            }
            if (b.secondary) {
                ds = *b.secondary > *src.secondary ? *b.secondary - *src.secondary : *src.secondary - *b.secondary;
            }
            if (dp > *header.band || ds > *header.band) {
                throw invalid_input("rule image " + b.to_string() + " violates the declared band bound");
            }
        }
        if (!rules->emplace(src, img).second) throw invalid_input("duplicate rule for " + src.to_string());
    }
    BasisOperator<K> op(one);
    op.name = "banded";
    op.band = *header.band;
    op.valid_index = [rules](const BasisIndex& b) { return rules->count(b) > 0; };
    op.image_of = [rules](const BasisIndex& b) { return rules->at(b); };

    std::string canonical =
        "operator banded " + std::to_string(*header.band) + " over " + header.field.to_string() + "\n";
    for (const auto& [src, img] : *rules) canonical += src.to_string() + " -> " + img.to_string() + "\n";
    return {std::move(op), std::move(canonical)};
}

template <FieldScalar K>
std::vector<SparseVector<K>> parse_vectors_file(const std::vector<std::string>& lines, const K& exemplar) {
    std::vector<SparseVector<K>> out;
    out.reserve(lines.size());
    for (const auto& line : lines) out.push_back(parse_sparse_vector(line, exemplar));
    return out;
}

}  // namespace kxcn
