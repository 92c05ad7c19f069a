#ifndef MDEBIF_EXPR_HPP
#define MDEBIF_EXPR_HPP

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mdebif/errors.hpp"

namespace mdebif {

// Scalar math expressions over the variables t, lambda, x1..xn.  Trees are
// immutable after construction and safe to share across threads.

enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class UnaryOp { Neg };

enum class Func { Sin, Cos, Tan, Exp, Ln, Sqrt, Abs, Pow, Max, Min, Heaviside };

/// Which variable a Variable node refers to.
struct VarRef {
    enum class Kind { Time, Lambda, State };
    Kind kind = Kind::Time;
    int index = 0; // 1-based state index, used only for Kind::State

    static VarRef time() { return {Kind::Time, 0}; }
    static VarRef lambda() { return {Kind::Lambda, 0}; }
    static VarRef state(int i) { return {Kind::State, i}; }

    bool operator==(const VarRef&) const = default;
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

class Expr {
public:
    enum class Kind { Constant, Variable, Unary, Binary, Call };

    Kind kind;
    double value = 0.0;     // Constant
    VarRef var;             // Variable
    UnaryOp uop{};          // Unary
    BinaryOp bop{};         // Binary
    Func func{};            // Call
    std::vector<ExprPtr> args;
    std::size_t offset = 0; // source byte offset, 0 for programmatic nodes

    bool is_constant(double v) const { return kind == Kind::Constant && value == v; }
};

// Node constructors (fold-free; see fold() below for the simplifying variants).
ExprPtr make_constant(double v);
ExprPtr make_variable(VarRef v);
ExprPtr make_unary(UnaryOp op, ExprPtr a);
ExprPtr make_binary(BinaryOp op, ExprPtr a, ExprPtr b);
ExprPtr make_call(Func f, std::vector<ExprPtr> args);

/// Values bound to the variables during evaluation.
struct EvalContext {
    double t = 0.0;
    double lambda = 0.0;
    std::span<const double> x;
};

/// Parse `source` against the declared state dimension.  Accepts the grammar
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := atom ('^' factor)?
///   atom   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')' | '-' atom
/// with '^' right-associative and binding tighter than unary minus, so that
/// "-x1^2" reads as -(x1^2).  Throws ParseError with the byte offset of the
/// offending token.
ExprPtr parse(std::string_view source, int dimension);

/// IEEE double evaluation.  heaviside(u) is 0 for u <= 0 and 1 for u > 0.
/// Throws EvalError on domain violations.
double evaluate(const Expr& e, const EvalContext& ctx);
inline double evaluate(const ExprPtr& e, const EvalContext& ctx) { return evaluate(*e, ctx); }

/// Symbolic partial derivative with constant folding and 0/1 elimination.
/// Throws NonDifferentiableError when a heaviside lies on the differentiation
/// path (i.e. its argument depends on `var`).
ExprPtr differentiate(const ExprPtr& e, VarRef var);

/// Render the tree back to parseable source.
std::string to_string(const ExprPtr& e);

/// True if any node references lambda / a state variable.
bool uses_lambda(const ExprPtr& e);
bool uses_state(const ExprPtr& e);
bool uses_var(const ExprPtr& e, VarRef var);

} // namespace mdebif

#endif
