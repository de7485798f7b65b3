#ifndef SKEWALG_EXPR_HPP
#define SKEWALG_EXPR_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "skewalg/rational.hpp"

namespace skewalg {

class ExprError : public std::runtime_error {
public:
    explicit ExprError(const std::string& what) : std::runtime_error(what) {}
};

/// Parse failure; `position` is a 0-based offset into the input text.
class ParseError : public ExprError {
public:
    ParseError(const std::string& what, size_t position)
        : ExprError(what + " (at position " + std::to_string(position) + ")"),
          position(position) {}
    size_t position;
};

/// Evaluation hit an unbound symbol or a singular point (1/0, ln(<=0), sqrt(<0)).
class EvalError : public ExprError {
public:
    explicit EvalError(const std::string& what) : ExprError(what) {}
};

enum class FuncKind { Sin, Cos, Exp, Ln, Sqrt };

const char* func_name(FuncKind f);
std::optional<FuncKind> func_from_name(const std::string& name);

struct ExprNode;

/// Immutable symbolic expression over named scalar variables.
/// Nodes: exact rational constants, symbols, + - * /, integer powers,
/// and the functions sin, cos, exp, ln, sqrt.
class Expr {
public:
    Expr(); // the constant 0

    static Expr num(long long n);
    static Expr num(const Rational& r);
    static Expr sym(const std::string& name);
    static Expr call(FuncKind f, Expr arg);

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    Expr operator-() const;
    Expr& operator+=(const Expr& o) { return *this = *this + o; }
    Expr& operator-=(const Expr& o) { return *this = *this - o; }
    Expr& operator*=(const Expr& o) { return *this = *this * o; }

    friend Expr pow(const Expr& base, long long exponent);

    bool is_rational() const;
    std::optional<Rational> as_rational() const; // only for literal number nodes
    bool is_zero_literal() const;

    const ExprNode& node() const { return *node_; }
    const std::shared_ptr<const ExprNode>& ptr() const { return node_; }

    std::set<std::string> free_symbols() const;
    std::string to_string() const;

    /// Structural tree equality (exact node-by-node, no simplification).
    static bool identical(const Expr& a, const Expr& b);

private:
    explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const ExprNode> node_;
    friend Expr make_expr_node(ExprNode n);
    friend struct ExprNode;
};

/// internal node factory (used by the expression builders)
Expr make_expr_node(ExprNode n);

enum class NodeKind { Number, Symbol, Add, Sub, Mul, Div, Pow, Func };

struct ExprNode {
    NodeKind kind;
    Rational value;          // Number
    std::string name;        // Symbol
    long long exponent = 0;  // Pow
    FuncKind func = FuncKind::Sin; // Func
    std::shared_ptr<const ExprNode> left_, right_; // binary ops; Pow/Func use left_

    Expr left() const;
    Expr right() const;
};

// --- parsing & printing -------------------------------------------------

/// Parse `text` against the expression grammar. Every identifier must be
/// listed in `allowed_symbols` (unknown symbols raise ParseError naming the
/// offender). Pass the full symbol set the expression may mention.
Expr parse_expr(const std::string& text, const std::set<std::string>& allowed_symbols);

// --- evaluation ---------------------------------------------------------

/// Scalar value that stays exact-rational until a transcendental function
/// or an inexact input forces a double.
class Scalar {
public:
    Scalar() : exact_(true), rat_(0), dbl_(0) {}
    Scalar(double d) : exact_(false), rat_(0), dbl_(d) {}
    Scalar(int n) : exact_(true), rat_(n), dbl_(0) {}
    Scalar(long long n) : exact_(true), rat_(n), dbl_(0) {}
    Scalar(const Rational& r) : exact_(true), rat_(r), dbl_(0) {}

    bool exact() const { return exact_; }
    const Rational& rational() const { return rat_; }
    double to_double() const { return exact_ ? rat_.to_double() : dbl_; }

private:
    bool exact_;
    Rational rat_;
    double dbl_;
};

using Env = std::map<std::string, Scalar>;

/// Evaluate with exact rational arithmetic where possible. Throws EvalError
/// on unbound symbols and singular points.
Scalar eval_scalar(const Expr& e, const Env& env);
double eval_expr(const Expr& e, const Env& env);

// --- calculus & substitution ---------------------------------------------

/// Exact symbolic derivative; result is canonically simplified.
Expr diff_expr(const Expr& e, const std::string& var);

/// Simultaneous substitution followed by canonical simplification.
Expr subst_expr(const Expr& e, const std::map<std::string, Expr>& bindings);

} // namespace skewalg

#endif
