#pragma once

// Free graded-commutative algebras over Q: generators, canonical monomials,
// elements, and the Koszul-signed product.

#include "hirsch/linalg.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hirsch {

class StructureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Generator {
    std::string name;
    int degree = 1;
    bool odd() const { return degree % 2 != 0; }
    friend bool operator==(const Generator&, const Generator&) = default;
};

// Ordered list of named generators; a generator is identified by its index.
class GeneratorSet {
public:
    GeneratorSet() = default;
    explicit GeneratorSet(std::vector<Generator> gens) : gens_(std::move(gens)) {
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            const auto& g = gens_[i];
            if (g.degree < 1)
                throw StructureError("generator '" + g.name + "' has degree " + std::to_string(g.degree) +
                                     "; degrees must be >= 1");
            if (!valid_name(g.name)) throw StructureError("invalid generator name '" + g.name + "'");
            if (!index_.emplace(g.name, i).second) throw StructureError("duplicate generator name '" + g.name + "'");
        }
    }

    std::size_t size() const { return gens_.size(); }
    const Generator& operator[](std::size_t i) const { return gens_[i]; }
    const std::vector<Generator>& generators() const { return gens_; }

    std::optional<std::size_t> find(std::string_view name) const {
        auto it = index_.find(std::string(name));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t index_of(std::string_view name) const {
        auto i = find(name);
        if (!i) throw StructureError("unknown generator '" + std::string(name) + "'");
        return *i;
    }

    bool all_odd() const {
        return std::all_of(gens_.begin(), gens_.end(), [](const Generator& g) { return g.odd(); });
    }

    // Top nonzero degree of the free algebra; only finite when every generator is odd.
    std::optional<int> top_degree() const {
        if (!all_odd()) return std::nullopt;
        int s = 0;
        for (const auto& g : gens_) s += g.degree;
        return s;
    }

    static bool valid_name(std::string_view s) {
        if (s.empty()) return false;
        auto head = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
        auto tail = [&](char c) { return head(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '\''; };
        if (!head(s.front())) return false;
        return std::all_of(s.begin() + 1, s.end(), tail);
    }

    friend bool operator==(const GeneratorSet& a, const GeneratorSet& b) { return a.gens_ == b.gens_; }

private:
    std::vector<Generator> gens_;
    std::unordered_map<std::string, std::size_t> index_;
};

using GeneratorSetPtr = std::shared_ptr<const GeneratorSet>;

inline GeneratorSetPtr make_generators(std::vector<Generator> gens) {
    return std::make_shared<const GeneratorSet>(std::move(gens));
}

inline bool same_generators(const GeneratorSetPtr& a, const GeneratorSetPtr& b) {
    return a == b || (a && b && *a == *b);
}

// Exponent vector in ascending generator order. Ordered by degree, then
// lexicographically with larger exponents first (so x*y precedes x*z).
class Monomial {
public:
    Monomial() = default;
    Monomial(std::vector<std::uint32_t> exps, int degree) : exps_(std::move(exps)), degree_(degree) {}

    static Monomial unit(const GeneratorSet& g) { return Monomial(std::vector<std::uint32_t>(g.size(), 0), 0); }

    static Monomial generator(const GeneratorSet& g, std::size_t i) {
        std::vector<std::uint32_t> e(g.size(), 0);
        e.at(i) = 1;
        return Monomial(std::move(e), g[i].degree);
    }

    // Validating constructor.
    static Monomial from_exponents(const GeneratorSet& g, std::vector<std::uint32_t> exps) {
        if (exps.size() != g.size()) throw StructureError("exponent vector length does not match generator set");
        int deg = 0;
        for (std::size_t i = 0; i < exps.size(); ++i) {
            if (g[i].odd() && exps[i] > 1) return Monomial();  // caller checks is_valid()
            deg += static_cast<int>(exps[i]) * g[i].degree;
        }
        return Monomial(std::move(exps), deg);
    }

    bool is_valid() const { return degree_ >= 0; }
    bool is_unit() const { return std::all_of(exps_.begin(), exps_.end(), [](auto e) { return e == 0; }); }
    int degree() const { return degree_; }
    std::size_t size() const { return exps_.size(); }
    std::uint32_t operator[](std::size_t i) const { return exps_[i]; }
    const std::vector<std::uint32_t>& exponents() const { return exps_; }

    friend bool operator==(const Monomial&, const Monomial&) = default;
    friend bool operator<(const Monomial& a, const Monomial& b) {
        if (a.degree_ != b.degree_) return a.degree_ < b.degree_;
        return a.exps_ > b.exps_;
    }

private:
    std::vector<std::uint32_t> exps_;
    int degree_ = -1;
};

struct SignedMonomial {
    int sign = 1;
    Monomial monomial;
};

// Product m1*m2 rewritten in canonical order; nullopt when an odd generator repeats.
inline std::optional<SignedMonomial> koszul_product(const GeneratorSet& g, const Monomial& m1, const Monomial& m2) {
    if (m1.size() != g.size() || m2.size() != g.size()) throw StructureError("monomial over a different generator set");
    std::vector<std::uint32_t> e(g.size());
    int odd_after = 0;  // odd slots of m1 with index > current
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g[i].odd() && m1[i]) ++odd_after;
    int inversions = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const bool odd = g[i].odd();
        if (odd && m1[i]) --odd_after;
        if (odd && m1[i] && m2[i]) return std::nullopt;
        if (odd && m2[i]) inversions += odd_after;
        e[i] = m1[i] + m2[i];
    }
    return SignedMonomial{inversions % 2 ? -1 : 1, Monomial(std::move(e), m1.degree() + m2.degree())};
}

// Q-linear combination of canonical monomials. No zero coefficients are stored.
class Element {
public:
    using Terms = std::map<Monomial, Scalar>;

    Element() = default;
    explicit Element(GeneratorSetPtr g) : gens_(std::move(g)) {}
    Element(GeneratorSetPtr g, const Monomial& m, const Scalar& c = 1) : gens_(std::move(g)) { add_term(m, c); }

    static Element zero(GeneratorSetPtr g) { return Element(std::move(g)); }
    static Element one(GeneratorSetPtr g) {
        auto u = Monomial::unit(*g);
        return Element(std::move(g), u);
    }
    static Element scalar(GeneratorSetPtr g, const Scalar& c) {
        auto u = Monomial::unit(*g);
        return Element(std::move(g), u, c);
    }
    static Element generator(GeneratorSetPtr g, std::size_t i) {
        auto m = Monomial::generator(*g, i);
        return Element(std::move(g), m);
    }
    static Element generator(GeneratorSetPtr g, std::string_view name) {
        auto i = g->index_of(name);
        return generator(std::move(g), i);
    }

    const GeneratorSetPtr& generators() const { return gens_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    Scalar coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Scalar(0) : it->second;
    }

    void add_term(const Monomial& m, const Scalar& c) {
        if (sgn(c) == 0) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (sgn(it->second) == 0) terms_.erase(it);
        }
    }

    // Degree if homogeneous; nullopt for mixed degrees. The zero element is homogeneous of any degree.
    std::optional<int> degree() const {
        if (terms_.empty()) return std::nullopt;
        const int d = terms_.begin()->first.degree();
        if (terms_.rbegin()->first.degree() != d) return std::nullopt;
        return d;
    }
    bool is_homogeneous_of(int k) const { return terms_.empty() || degree() == std::optional<int>(k); }

    Element& operator+=(const Element& o) {
        check(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Element& operator-=(const Element& o) {
        check(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    Element& operator*=(const Scalar& s) {
        if (sgn(s) == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }

    friend Element operator+(Element a, const Element& b) { return a += b; }
    friend Element operator-(Element a, const Element& b) { return a -= b; }
    friend Element operator-(Element a) { return a *= Scalar(-1); }
    friend Element operator*(Element a, const Scalar& s) { return a *= s; }
    friend Element operator*(const Scalar& s, Element a) { return a *= s; }

    friend bool operator==(const Element& a, const Element& b) {
        return same_generators(a.gens_, b.gens_) && a.terms_ == b.terms_;
    }

    // Homogeneous component of degree k.
    Element component(int k) const {
        Element out(gens_);
        for (const auto& [m, c] : terms_)
            if (m.degree() == k) out.terms_.emplace(m, c);
        return out;
    }

    void check(const Element& o) const {
        if (!same_generators(gens_, o.gens_)) throw StructureError("elements over different generator sets");
    }

private:
    GeneratorSetPtr gens_;
    Terms terms_;
};

inline Element multiply(const Element& a, const Element& b) {
    a.check(b);
    Element out(a.generators());
    const auto& g = *a.generators();
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            auto p = koszul_product(g, ma, mb);
            if (!p) continue;
            Scalar c = ca * cb;
            if (p->sign < 0) c = -c;
            out.add_term(p->monomial, c);
        }
    return out;
}

inline Element operator*(const Element& a, const Element& b) { return multiply(a, b); }

inline Element power(const Element& a, unsigned n) {
    Element out = Element::one(a.generators());
    for (unsigned i = 0; i < n; ++i) out = multiply(out, a);
    return out;
}

// All monomials of degree exactly k, in monomial order.
inline std::vector<Monomial> degree_basis(const GeneratorSet& g, int k) {
    std::vector<Monomial> out;
    if (k < 0) return out;
    std::vector<std::uint32_t> e(g.size(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int remaining) {
        if (i == g.size()) {
            if (remaining == 0) out.emplace_back(e, k);
            return;
        }
        const int d = g[i].degree;
        const int max_e = g[i].odd() ? std::min(1, remaining / d) : remaining / d;
        for (int x = max_e; x >= 0; --x) {
            e[i] = static_cast<std::uint32_t>(x);
            rec(i + 1, remaining - x * d);
        }
        e[i] = 0;
    };
    rec(0, k);
    return out;
}

// Factor list of a canonical monomial, e.g. x*y^2 -> [x, y, y].
inline std::vector<std::size_t> factor_list(const Monomial& m) {
    std::vector<std::size_t> f;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::uint32_t e = 0; e < m[i]; ++e) f.push_back(i);
    return f;
}

// ---------------------------------------------------------------------------
// Text syntax: terms `c*g1^e1*g2^e2` joined by + and -, `1` the unit, p/q rationals.

inline std::string format_monomial(const GeneratorSet& g, const Monomial& m) {
    if (m.is_unit()) return "1";
    std::string s;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!m[i]) continue;
        if (!s.empty()) s += '*';
        s += g[i].name;
        if (m[i] > 1) s += '^' + std::to_string(m[i]);
    }
    return s;
}

inline std::string format_element(const Element& e) {
    if (e.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, c] : e.terms()) {
        const bool neg = sgn(c) < 0;
        const Scalar mag = abs(c);
        std::string body;
        if (m.is_unit())
            body = to_string(mag);
        else if (mag == 1)
            body = format_monomial(*e.generators(), m);
        else
            body = to_string(mag) + "*" + format_monomial(*e.generators(), m);
        if (first)
            s += neg ? "-" + body : body;
        else
            s += (neg ? " - " : " + ") + body;
        first = false;
    }
    return s;
}

inline std::ostream& operator<<(std::ostream& os, const Element& e) { return os << format_element(e); }

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

class ElementParser {
public:
    ElementParser(GeneratorSetPtr g, std::string_view text) : gens_(std::move(g)) {
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c))) src_ += c;
    }

    Element parse() {
        if (src_.empty()) throw ParseError("empty element expression");
        Element e = expr();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what + " at position " + std::to_string(pos_) + " in '" + src_ + "'");
    }
    bool peek(char c) const { return pos_ < src_.size() && src_[pos_] == c; }

    Element expr() {
        Element acc(gens_);
        bool first = true;
        while (true) {
            int sign = 1;
            if (peek('+') || peek('-')) {
                sign = peek('-') ? -1 : 1;
                ++pos_;
            } else if (!first) {
                break;
            }
            Element t = term();
            acc += sign < 0 ? -t : t;
            first = false;
            if (pos_ >= src_.size() || !(peek('+') || peek('-'))) break;
        }
        return acc;
    }

    Element term() {
        Element t = factor();
        while (peek('*')) {
            ++pos_;
            t = multiply(t, factor());
        }
        return t;
    }

    Element factor() {
        if (pos_ >= src_.size()) fail("unexpected end of expression");
        Element base(gens_);
        if (peek('(')) {
            ++pos_;
            base = expr();
            if (!peek(')')) fail("expected ')'");
            ++pos_;
        } else if (std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            return Element::scalar(gens_, rational());
        } else if (peek('-')) {
            ++pos_;
            return -factor();
        } else {
            const std::size_t start = pos_;
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
                                          src_[pos_] == '\''))
                ++pos_;
            const std::string name = src_.substr(start, pos_ - start);
            if (!GeneratorSet::valid_name(name)) fail("expected generator name or number");
            auto idx = gens_->find(name);
            if (!idx) fail("unknown generator '" + name + "'");
            base = Element::generator(gens_, *idx);
        }
        if (peek('^')) {
            ++pos_;
            const std::size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            if (start == pos_) fail("expected exponent");
            base = power(base, static_cast<unsigned>(std::stoul(src_.substr(start, pos_ - start))));
        }
        return base;
    }

    Scalar rational() {
        auto digits = [&] {
            const std::size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            if (start == pos_) fail("expected digits");
            return src_.substr(start, pos_ - start);
        };
        std::string num = digits();
        std::string den = "1";
        // `p/q`: a slash directly after an integer is always a fraction bar.
        if (peek('/')) {
            ++pos_;
            den = digits();
        }
        Scalar q{mpz_class(num), mpz_class(den)};
        if (sgn(q.get_den()) == 0) fail("zero denominator");
        q.canonicalize();
        return q;
    }

    GeneratorSetPtr gens_;
    std::string src_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Element parse_element(const GeneratorSetPtr& g, std::string_view text) {
    return detail::ElementParser(g, text).parse();
}

inline Scalar parse_rational(std::string_view text) {
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    try {
        Scalar q(s);
        if (sgn(q.get_den()) == 0) throw ParseError("zero denominator in '" + s + "'");
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw ParseError("invalid rational '" + s + "'");
    }
}

}  // namespace hirsch
