#include "cyclebound/polyalg/parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "cyclebound/errors.hpp"

namespace cyclebound::polyalg {

namespace {

constexpr unsigned kMaxExponent = 1000;

class ExprParser {
public:
    ExprParser(std::string_view text, int line, int column_offset)
        : text_(text), line_(line), col_(column_offset + 1) {}

    Poly2 parse() {
        skip_space();
        if (at_end()) fail("empty expression");
        Poly2 result = expr();
        skip_space();
        if (!at_end()) {
            if (starts_base()) fail("implicit multiplication is not allowed");
            fail(std::string("unexpected '") + peek() + "'");
        }
        return result;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
    }

    bool accept(char c) {
        skip_space();
        if (peek() == c) {
            advance();
            return true;
        }
        return false;
    }

    bool starts_base() const {
        const char c = peek();
        return c == 'x' || c == 'y' || c == '(' || c == '.' || std::isdigit(static_cast<unsigned char>(c));
    }

    Poly2 expr() {
        Poly2 acc = term();
        for (;;) {
            if (accept('+')) {
                acc += term();
            } else if (accept('-')) {
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    Poly2 term() {
        Poly2 acc = factor();
        for (;;) {
            skip_space();
            if (accept('*')) {
                acc *= factor();
            } else if (peek() == '/') {
                const int l = line_, c = col_;
                advance();
                Poly2 d = factor();
                if (!d.is_constant() || d.is_zero())
                    throw ParseError("division is only allowed by a nonzero numeric constant", l, c);
                acc *= Rational(1 / d.coeff(0, 0));
            } else {
                skip_space();
                if (!at_end() && starts_base()) fail("implicit multiplication is not allowed");
                return acc;
            }
        }
    }

    Poly2 factor() {
        Poly2 b = base();
        skip_space();
        if (peek() == '^') {
            advance();
            skip_space();
            b = b.pow(exponent());
        }
        return b;
    }

    unsigned exponent() {
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            fail("exponent must be a nonnegative integer");
        unsigned long long value = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            value = value * 10 + static_cast<unsigned>(peek() - '0');
            if (value > kMaxExponent) fail("exponent too large");
            advance();
        }
        if (peek() == '.' || peek() == 'e' || peek() == 'E') fail("exponent must be a nonnegative integer");
        return static_cast<unsigned>(value);
    }

    Poly2 base() {
        skip_space();
        if (at_end()) fail("unexpected end of expression");
        const char c = peek();
        if (c == 'x') {
            advance();
            return Poly2::x();
        }
        if (c == 'y') {
            advance();
            return Poly2::y();
        }
        if (c == '(') {
            advance();
            Poly2 inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (c == '-') {
            advance();
            return -factor();
        }
        if (c == '+') {
            advance();
            return factor();
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Poly2(number());
        fail(std::string("unexpected '") + c + "'");
    }

    Rational number() {
        mpz_class mantissa = 0;
        long scale = 0;
        bool digits = false;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            mantissa = mantissa * 10 + (peek() - '0');
            digits = true;
            advance();
        }
        if (peek() == '.') {
            advance();
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                mantissa = mantissa * 10 + (peek() - '0');
                ++scale;
                digits = true;
                advance();
            }
        }
        if (!digits) fail("malformed number");
        if (peek() == 'e' || peek() == 'E') {
            advance();
            bool neg = false;
            if (peek() == '+' || peek() == '-') {
                neg = peek() == '-';
                advance();
            }
            if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("malformed exponent in number");
            long e = 0;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                e = e * 10 + (peek() - '0');
                if (e > 4000) fail("number exponent too large");
                advance();
            }
            scale += neg ? e : -e;
        }
        Rational value(mantissa);
        mpz_class p10;
        if (scale > 0) {
            mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(scale));
            value /= p10;
        } else if (scale < 0) {
            mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(-scale));
            value *= p10;
        }
        value.canonicalize();
        return value;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_;
    int col_;
};

std::string_view trim(std::string_view s, std::size_t* lead = nullptr) {
    std::size_t b = 0;
    while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    std::size_t e = s.size();
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    if (lead) *lead = b;
    return s.substr(b, e - b);
}

Rational parse_constant(std::string_view text, int line, int col) {
    std::size_t lead = 0;
    const std::string_view t = trim(text, &lead);
    Poly2 p = parse_poly(t, line, col + static_cast<int>(lead) - 1);
    if (!p.is_constant()) throw ParseError("box bound must be a number", line, col);
    return p.coeff(0, 0);
}

// box = [a, b] x [c, d]; `col` is the 1-based column of value[0].
SearchBox parse_box(std::string_view value, int line, int col) {
    auto fail = [&](const std::string& msg, std::size_t at) -> void {
        throw ParseError(msg, line, col + static_cast<int>(at));
    };
    std::size_t pos = 0;
    auto skip = [&] {
        while (pos < value.size() && std::isspace(static_cast<unsigned char>(value[pos]))) ++pos;
    };
    auto range = [&](Rational& lo, Rational& hi) {
        skip();
        if (pos >= value.size() || value[pos] != '[') fail("expected '['", pos);
        const std::size_t open = ++pos;
        const std::size_t comma = value.find(',', open);
        if (comma == std::string_view::npos) fail("expected ','", open);
        const std::size_t close = value.find(']', comma);
        if (close == std::string_view::npos) fail("expected ']'", comma);
        lo = parse_constant(value.substr(open, comma - open), line, col + static_cast<int>(open));
        hi = parse_constant(value.substr(comma + 1, close - comma - 1), line,
                            col + static_cast<int>(comma + 1));
        pos = close + 1;
    };
    SearchBox box;
    range(box.x_lo, box.x_hi);
    skip();
    if (pos >= value.size() || (value[pos] != 'x' && value[pos] != 'X')) fail("expected 'x' between ranges", pos);
    ++pos;
    range(box.y_lo, box.y_hi);
    skip();
    if (pos != value.size()) fail("trailing characters after box", pos);
    if (!(box.x_lo < box.x_hi) || !(box.y_lo < box.y_hi)) fail("box must have positive width and height", 0);
    return box;
}

std::string rational_literal(const Rational& q) {
    std::string s = q.get_num().get_str();
    if (q.get_den() != 1) s += "/" + q.get_den().get_str();
    return s;
}

} // namespace

Poly2 parse_poly(std::string_view text, int line, int column_offset) {
    return ExprParser(text, line, column_offset).parse();
}

VectorField parse_vector_field(std::string_view text) {
    std::optional<Poly2> p, q;
    std::optional<std::string> name;
    std::optional<SearchBox> box;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = text.substr(start, end - start);
        ++line_no;
        start = end + 1;
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        if (trim(raw).empty()) {
            if (end == text.size()) break;
            continue;
        }
        const auto eq = raw.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no, 1);
        std::size_t key_lead = 0;
        const std::string_view key = trim(raw.substr(0, eq), &key_lead);
        const std::string_view value = raw.substr(eq + 1);
        const int value_col = static_cast<int>(eq) + 2;  // 1-based column of value[0]
        const int key_col = static_cast<int>(key_lead) + 1;
        auto once = [&](bool seen) {
            if (seen) throw ParseError("duplicate key '" + std::string(key) + "'", line_no, key_col);
        };
        if (key == "P") {
            once(p.has_value());
            p = parse_poly(value, line_no, value_col - 1);
        } else if (key == "Q") {
            once(q.has_value());
            q = parse_poly(value, line_no, value_col - 1);
        } else if (key == "box") {
            once(box.has_value());
            box = parse_box(value, line_no, value_col);
        } else if (key == "name") {
            once(name.has_value());
            std::string_view n = trim(value);
            if (n.size() >= 2 && n.front() == '"' && n.back() == '"') n = n.substr(1, n.size() - 2);
            name = std::string(n);
        } else {
            throw ParseError("unknown key '" + std::string(key) + "'", line_no, key_col);
        }
        if (end == text.size()) break;
    }
    if (!p) throw ParseError("missing required key 'P'", line_no, 1);
    if (!q) throw ParseError("missing required key 'Q'", line_no, 1);
    if (p->is_zero() && q->is_zero()) throw ParseError("P and Q are both zero", line_no, 1);
    return VectorField(std::move(*p), std::move(*q), std::move(name), box.value_or(SearchBox{}));
}

VectorField load_vector_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_vector_field(ss.str());
}

std::string render_vector_field(const VectorField& v) {
    std::string out;
    if (v.name()) out += "name = " + *v.name() + "\n";
    out += "P = " + render(v.p()) + "\n";
    out += "Q = " + render(v.q()) + "\n";
    const auto& b = v.box();
    out += "box = [" + rational_literal(b.x_lo) + ", " + rational_literal(b.x_hi) + "] x [" +
           rational_literal(b.y_lo) + ", " + rational_literal(b.y_hi) + "]\n";
    return out;
}

} // namespace cyclebound::polyalg
