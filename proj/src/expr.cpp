#include "finsler/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

namespace finsler {

const char* error_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorCode::ArityError: return "ArityError";
    case ErrorCode::SpecSchema: return "SpecSchema";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::DegenerateGradient: return "DegenerateGradient";
    case ErrorCode::FamilyMismatch: return "FamilyMismatch";
    case ErrorCode::StrongConvexityViolated: return "StrongConvexityViolated";
    case ErrorCode::UnsupportedVariance: return "UnsupportedVariance";
    case ErrorCode::ZeroFunction: return "ZeroFunction";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::NotConverged: return "NotConverged";
    }
    return "Error";
}

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::SyntaxError:
    case ErrorCode::UnknownIdentifier:
    case ErrorCode::ArityError:
    case ErrorCode::SpecSchema:
        return 2;
    case ErrorCode::ConvergenceFailure:
    case ErrorCode::NotConverged:
        return 4;
    default:
        return 3;
    }
}

namespace {

using Node = SyntaxTree::Node;
using Kind = Node::Kind;
using NodePtr = std::unique_ptr<Node>;

constexpr int kMaxDepth = 200;

struct Parser {
    std::string_view src;
    int dimension;
    std::size_t pos = 0;
    int depth = 0;

    [[noreturn]] void fail(ErrorCode code, std::size_t at, std::string msg) const {
        throw Error(code, std::move(msg), static_cast<long>(at));
    }

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }

    static NodePtr make(Kind k, std::uint32_t b, std::uint32_t e, NodePtr l = nullptr,
                        NodePtr r = nullptr) {
        auto nd = std::make_unique<Node>();
        nd->kind = k;
        nd->begin = b;
        nd->end = e;
        nd->lhs = std::move(l);
        nd->rhs = std::move(r);
        return nd;
    }

    struct DepthGuard {
        Parser& p;
        explicit DepthGuard(Parser& pp) : p(pp) {
            if (++p.depth > kMaxDepth)
                p.fail(ErrorCode::SyntaxError, p.pos, "expression nested too deeply");
        }
        ~DepthGuard() { --p.depth; }
    };

    NodePtr parse_expr() {
        DepthGuard guard(*this);
        NodePtr lhs = parse_term();
        for (;;) {
            char c = peek();
            if (c != '+' && c != '-') break;
            ++pos;
            NodePtr rhs = parse_term();
            std::uint32_t b = lhs->begin, e = rhs->end;
            lhs = make(c == '+' ? Kind::Add : Kind::Sub, b, e, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    NodePtr parse_term() {
        DepthGuard guard(*this);
        NodePtr lhs = parse_unary();
        for (;;) {
            char c = peek();
            if (c != '*' && c != '/') break;
            ++pos;
            NodePtr rhs = parse_unary();
            std::uint32_t b = lhs->begin, e = rhs->end;
            lhs = make(c == '*' ? Kind::Mul : Kind::Div, b, e, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    NodePtr parse_unary() {
        DepthGuard guard(*this);
        char c = peek();
        if (c == '-') {
            std::uint32_t b = static_cast<std::uint32_t>(pos);
            ++pos;
            NodePtr inner = parse_unary();
            std::uint32_t e = inner->end;
            return make(Kind::Neg, b, e, std::move(inner));
        }
        if (c == '+') { // unary plus: accepted, no node
            ++pos;
            return parse_unary();
        }
        return parse_power();
    }

    NodePtr parse_power() {
        DepthGuard guard(*this);
        NodePtr base = parse_atom();
        if (peek() != '^') return base;
        ++pos;
        NodePtr expo = parse_unary(); // right-assoc, exponent may carry a sign
        std::uint32_t b = base->begin, e = expo->end;

        // literal integral exponents become repeated multiplication
        double lit = 0.0;
        if (literal_value(expo.get(), &lit) && lit == std::nearbyint(lit) &&
            std::fabs(lit) <= 1e6) {
            NodePtr nd = make(Kind::PowInt, b, e, std::move(base));
            nd->exponent = static_cast<int>(lit);
            return nd;
        }
        return make(Kind::Pow, b, e, std::move(base), std::move(expo));
    }

    static bool literal_value(const Node* nd, double* out) {
        if (nd->kind == Kind::Constant) {
            *out = nd->value;
            return true;
        }
        if (nd->kind == Kind::Neg && nd->lhs->kind == Kind::Constant) {
            *out = -nd->lhs->value;
            return true;
        }
        return false;
    }

    NodePtr parse_atom() {
        DepthGuard guard(*this);
        skip_ws();
        if (pos >= src.size())
            fail(ErrorCode::SyntaxError, pos, "unexpected end of expression");
        std::uint32_t b = static_cast<std::uint32_t>(pos);
        char c = src[pos];

        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();

        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();

        if (c == '(') {
            ++pos;
            NodePtr inner = parse_expr();
            if (!eat(')'))
                fail(ErrorCode::SyntaxError, pos, "expected ')'");
            inner->begin = b;
            inner->end = static_cast<std::uint32_t>(pos);
            return inner;
        }
        fail(ErrorCode::SyntaxError, pos, std::string("unexpected character '") + c + "'");
    }

    NodePtr parse_number() {
        std::uint32_t b = static_cast<std::uint32_t>(pos);
        double value = 0.0;
        const char* first = src.data() + pos;
        const char* last = src.data() + src.size();
        auto [end, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || end == first)
            fail(ErrorCode::SyntaxError, pos, "malformed number");
        pos += static_cast<std::size_t>(end - first);
        NodePtr nd = make(Kind::Constant, b, static_cast<std::uint32_t>(pos));
        nd->value = value;
        return nd;
    }

    NodePtr parse_ident() {
        std::uint32_t b = static_cast<std::uint32_t>(pos);
        std::size_t start = pos;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
            ++pos;
        std::string_view name = src.substr(start, pos - start);

        // positional variable x<k>
        if (name.size() >= 2 && name[0] == 'x') {
            bool digits = true;
            for (std::size_t i = 1; i < name.size(); ++i)
                if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
            if (digits) {
                long idx = std::strtol(std::string(name.substr(1)).c_str(), nullptr, 10);
                if (idx < 1 || idx > dimension)
                    fail(ErrorCode::UnknownIdentifier, b,
                         "variable '" + std::string(name) + "' out of range (dimension " +
                             std::to_string(dimension) + ")");
                NodePtr nd = make(Kind::Variable, b, static_cast<std::uint32_t>(pos));
                nd->index = static_cast<int>(idx - 1);
                return nd;
            }
        }

        FuncKind func{};
        bool is_func = true;
        if (name == "sin") func = FuncKind::Sin;
        else if (name == "cos") func = FuncKind::Cos;
        else if (name == "exp") func = FuncKind::Exp;
        else if (name == "log") func = FuncKind::Log;
        else if (name == "sqrt") func = FuncKind::Sqrt;
        else if (name == "tanh") func = FuncKind::Tanh;
        else is_func = false;

        if (!is_func)
            fail(ErrorCode::UnknownIdentifier, b,
                 "unknown identifier '" + std::string(name) +
                     "' (variables x1..xn; functions sin, cos, exp, log, sqrt, tanh)");

        if (!eat('('))
            fail(ErrorCode::ArityError, pos,
                 "function '" + std::string(name) + "' requires one parenthesized argument");
        if (peek() == ')')
            fail(ErrorCode::ArityError, pos,
                 "function '" + std::string(name) + "' requires exactly one argument");
        NodePtr arg = parse_expr();
        if (peek() == ',')
            fail(ErrorCode::ArityError, pos,
                 "function '" + std::string(name) + "' takes exactly one argument");
        if (!eat(')'))
            fail(ErrorCode::SyntaxError, pos, "expected ')'");
        NodePtr nd = make(Kind::Call, b, static_cast<std::uint32_t>(pos), std::move(arg));
        nd->func = func;
        return nd;
    }
};

} // namespace

SyntaxTree parse(std::string_view source, int dimension) {
    if (dimension < 1)
        throw Error(ErrorCode::SpecSchema, "dimension must be >= 1");
    Parser p{source, dimension};
    NodePtr root = p.parse_expr();
    p.skip_ws();
    if (p.pos != source.size())
        p.fail(ErrorCode::SyntaxError, p.pos, "trailing input after expression");
    return SyntaxTree(std::shared_ptr<const Node>(root.release()), dimension,
                      std::string(source));
}

SyntaxTree parse_field(std::string_view source, int dimension, const std::string& field) {
    try {
        return parse(source, dimension);
    } catch (const Error& e) {
        throw Error(e.code(),
                    "in field '" + field + "': " + e.what() +
                        (e.offset() >= 0 ? " (offset " + std::to_string(e.offset()) + ")" : ""),
                    e.offset());
    }
}

} // namespace finsler
