#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>

#include "confal/poly.hpp"

namespace confal {

// Canonical rendering. Terms are sorted by graded-lex order on the exponent
// tuple (d, l, m, n, params...), highest first; inside a term parameters
// print before operator variables, so e.g. "a*l + b - d".
inline std::string MultiPoly::to_string() const
{
    if (terms_.empty())
        return "0";
    std::vector<const std::pair<const Monomial, Rational>*> ts;
    ts.reserve(terms_.size());
    for (const auto& t : terms_)
        ts.push_back(&t);
    std::sort(ts.begin(), ts.end(), [](const auto* x, const auto* y) {
        int dx = detail::mono_total_degree(x->first);
        int dy = detail::mono_total_degree(y->first);
        if (dx != dy)
            return dx > dy;
        size_t n = std::max(x->first.size(), y->first.size());
        for (size_t i = 0; i < n; ++i) {
            int ex = detail::mono_get(x->first, static_cast<VarId>(i));
            int ey = detail::mono_get(y->first, static_cast<VarId>(i));
            if (ex != ey)
                return ex > ey;
        }
        return false;
    });

    std::string out;
    bool first = true;
    for (const auto* t : ts) {
        const Monomial& m = t->first;
        const Rational& c = t->second;
        bool neg = c.sign() < 0;
        Rational mag = neg ? -c : c;
        if (first) {
            if (neg)
                out += "-";
            first = false;
        } else {
            out += neg ? " - " : " + ";
        }
        std::string factors;
        auto emit = [&](VarId v) {
            int e = detail::mono_get(m, v);
            if (!e)
                return;
            if (!factors.empty())
                factors += "*";
            factors += VarRegistry::instance().name(v);
            if (e > 1)
                factors += "^" + std::to_string(e);
        };
        for (VarId v = vars::par_a; v < static_cast<VarId>(m.size()); ++v)
            emit(v);
        for (VarId v = 0; v < vars::par_a; ++v)
            emit(v);
        if (factors.empty()) {
            out += mag.to_string();
        } else {
            if (!mag.is_one())
                out += mag.to_string() + "*";
            out += factors;
        }
    }
    return out;
}

namespace poly_io {

// Grammar: expr := [+|-] term ((+|-) term)* ; term := factor (* factor)* ;
// factor := atom [^ uint] ; atom := uint [/ uint] | ident | ( expr ).
// Unknown identifiers are declared as parameters on first use.
class Parser {
  public:
    explicit Parser(std::string_view src) : src_(src) { next(); }

    MultiPoly parse()
    {
        MultiPoly p = parse_expr();
        if (kind_ != Kind::End)
            throw SyntaxError("unexpected trailing input", tok_pos_);
        return p;
    }

  private:
    enum class Kind { Int, Ident, Plus, Minus, Star, Caret, Slash, LParen, RParen, End };

    std::string_view src_;
    size_t pos_ = 0;
    Kind kind_ = Kind::End;
    std::string text_;
    size_t tok_pos_ = 0;

    void next()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
        tok_pos_ = pos_;
        text_.clear();
        if (pos_ >= src_.size()) {
            kind_ = Kind::End;
            return;
        }
        char ch = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                text_.push_back(src_[pos_++]);
            kind_ = Kind::Int;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                text_.push_back(src_[pos_++]);
            kind_ = Kind::Ident;
            return;
        }
        ++pos_;
        switch (ch) {
        case '+': kind_ = Kind::Plus; return;
        case '-': kind_ = Kind::Minus; return;
        case '*': kind_ = Kind::Star; return;
        case '^': kind_ = Kind::Caret; return;
        case '/': kind_ = Kind::Slash; return;
        case '(': kind_ = Kind::LParen; return;
        case ')': kind_ = Kind::RParen; return;
        default: throw SyntaxError(std::string("unexpected character '") + ch + "'", tok_pos_);
        }
    }

    MultiPoly parse_expr()
    {
        bool neg = false;
        if (kind_ == Kind::Plus || kind_ == Kind::Minus) {
            neg = kind_ == Kind::Minus;
            next();
        }
        MultiPoly p = parse_term();
        if (neg)
            p = -p;
        while (kind_ == Kind::Plus || kind_ == Kind::Minus) {
            bool sub = kind_ == Kind::Minus;
            next();
            MultiPoly q = parse_term();
            p = sub ? p - q : p + q;
        }
        return p;
    }

    MultiPoly parse_term()
    {
        MultiPoly p = parse_factor();
        while (kind_ == Kind::Star) {
            next();
            p *= parse_factor();
        }
        return p;
    }

    MultiPoly parse_factor()
    {
        MultiPoly p = parse_atom();
        if (kind_ == Kind::Caret) {
            next();
            if (kind_ != Kind::Int)
                throw SyntaxError("expected nonnegative integer exponent", tok_pos_);
            if (text_.size() > 4)
                throw SyntaxError("exponent too large", tok_pos_);
            unsigned e = static_cast<unsigned>(std::stoul(text_));
            next();
            p = p.pow(e);
        }
        return p;
    }

    MultiPoly parse_atom()
    {
        if (kind_ == Kind::Int) {
            BigInt num = BigInt::from_string(text_);
            size_t at = tok_pos_;
            next();
            if (kind_ == Kind::Slash) {
                next();
                if (kind_ != Kind::Int)
                    throw SyntaxError("expected denominator", tok_pos_);
                BigInt den = BigInt::from_string(text_);
                if (den.is_zero())
                    throw SyntaxError("zero denominator", at);
                next();
                return MultiPoly(Rational(std::move(num), std::move(den)));
            }
            return MultiPoly(Rational(std::move(num)));
        }
        if (kind_ == Kind::Ident) {
            VarId v = VarRegistry::instance().declare(text_);
            next();
            return MultiPoly::variable(v);
        }
        if (kind_ == Kind::LParen) {
            next();
            MultiPoly p = parse_expr();
            if (kind_ != Kind::RParen)
                throw SyntaxError("expected ')'", tok_pos_);
            next();
            return p;
        }
        throw SyntaxError("expected number, name or '('", tok_pos_);
    }
};

} // namespace poly_io

inline MultiPoly parse_poly(std::string_view text) { return poly_io::Parser(text).parse(); }

} // namespace confal
