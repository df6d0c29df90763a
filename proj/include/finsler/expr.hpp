#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "finsler/errors.hpp"
#include "finsler/taylor.hpp"

namespace finsler {

enum class FuncKind { Sin, Cos, Exp, Log, Sqrt, Tanh };

// Immutable expression tree over positional variables x1..xn. Trees are
// produced by parse() and shared freely across threads; evaluation is pure.
class SyntaxTree {
public:
    struct Node {
        enum class Kind {
            Constant,
            Variable, // index (0-based)
            Neg,
            Add,
            Sub,
            Mul,
            Div,
            Pow,    // dynamic exponent, base must stay positive
            PowInt, // literal integer exponent, repeated multiplication
            Call,
        };
        Kind kind{};
        double value = 0.0;
        int index = 0;
        int exponent = 0;
        FuncKind func{};
        std::unique_ptr<const Node> lhs, rhs;
        std::uint32_t begin = 0, end = 0; // byte span in the source string
    };

    SyntaxTree() = default;
    SyntaxTree(std::shared_ptr<const Node> root, int dimension, std::string source)
        : root_(std::move(root)), dimension_(dimension), source_(std::move(source)) {}

    const Node* root() const { return root_.get(); }
    int dimension() const { return dimension_; }
    const std::string& source() const { return source_; }
    bool empty() const { return root_ == nullptr; }

private:
    std::shared_ptr<const Node> root_;
    int dimension_ = 0;
    std::string source_;
};

// Parses an infix expression over x1..x<dimension>. Throws Error with
// code SyntaxError / UnknownIdentifier / ArityError and the byte offset of
// the problem. Never crashes on malformed input.
SyntaxTree parse(std::string_view source, int dimension);

// Convenience: parse that reports errors against a named field (spec files).
SyntaxTree parse_field(std::string_view source, int dimension, const std::string& field);

namespace detail {

template <class T>
T eval_node(const SyntaxTree::Node* nd, std::span<const T> point, const std::string& src) {
    using namespace ad; // scalar functions for double / Dual / Taylor
    using K = SyntaxTree::Node::Kind;
    switch (nd->kind) {
    case K::Constant:
        return T(nd->value);
    case K::Variable:
        return point[static_cast<std::size_t>(nd->index)];
    case K::Neg:
        return -eval_node(nd->lhs.get(), point, src);
    case K::Add:
        return eval_node(nd->lhs.get(), point, src) + eval_node(nd->rhs.get(), point, src);
    case K::Sub:
        return eval_node(nd->lhs.get(), point, src) - eval_node(nd->rhs.get(), point, src);
    case K::Mul:
        return eval_node(nd->lhs.get(), point, src) * eval_node(nd->rhs.get(), point, src);
    case K::Div: {
        T num = eval_node(nd->lhs.get(), point, src);
        T den = eval_node(nd->rhs.get(), point, src);
        if (scalar_value(den) == 0.0)
            throw Error(ErrorCode::DomainError,
                        "division by zero in '" +
                            src.substr(nd->begin, nd->end - nd->begin) + "'",
                        nd->begin);
        return num / den;
    }
    case K::PowInt:
        return pow_int(eval_node(nd->lhs.get(), point, src), nd->exponent);
    case K::Pow: {
        T base = eval_node(nd->lhs.get(), point, src);
        T expo = eval_node(nd->rhs.get(), point, src);
        if (scalar_value(base) <= 0.0)
            throw Error(ErrorCode::DomainError,
                        "non-positive base in '" +
                            src.substr(nd->begin, nd->end - nd->begin) + "'",
                        nd->begin);
        return pow(base, expo);
    }
    case K::Call: {
        T arg = eval_node(nd->lhs.get(), point, src);
        double v = scalar_value(arg);
        switch (nd->func) {
        case FuncKind::Sin:
            return sin(arg);
        case FuncKind::Cos:
            return cos(arg);
        case FuncKind::Exp:
            return exp(arg);
        case FuncKind::Tanh:
            return tanh(arg);
        case FuncKind::Log:
            if (v <= 0.0)
                throw Error(ErrorCode::DomainError,
                            "log of non-positive value in '" +
                                src.substr(nd->begin, nd->end - nd->begin) + "'",
                            nd->begin);
            return log(arg);
        case FuncKind::Sqrt:
            if (v < 0.0)
                throw Error(ErrorCode::DomainError,
                            "sqrt of negative value in '" +
                                src.substr(nd->begin, nd->end - nd->begin) + "'",
                            nd->begin);
            return sqrt(arg);
        }
        break;
    }
    }
    throw Error(ErrorCode::DomainError, "corrupt expression tree");
}

} // namespace detail

// Evaluates the tree over any scalar algebra (double, ad::Dual,
// ad::Taylor<...>). point.size() must equal the tree dimension.
template <class T>
T evaluate(const SyntaxTree& tree, std::span<const T> point) {
    return detail::eval_node<T>(tree.root(), point, tree.source());
}

template <class T>
T evaluate(const SyntaxTree& tree, const std::vector<T>& point) {
    return detail::eval_node<T>(tree.root(), std::span<const T>(point), tree.source());
}

} // namespace finsler
