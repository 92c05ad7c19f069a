#include "mdebif/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>

namespace mdebif {

ExprPtr make_constant(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Constant;
    e->value = v;
    return e;
}

ExprPtr make_variable(VarRef v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Variable;
    e->var = v;
    return e;
}

ExprPtr make_unary(UnaryOp op, ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Unary;
    e->uop = op;
    e->args = {std::move(a)};
    return e;
}

ExprPtr make_binary(BinaryOp op, ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Binary;
    e->bop = op;
    e->args = {std::move(a), std::move(b)};
    return e;
}

ExprPtr make_call(Func f, std::vector<ExprPtr> args) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Call;
    e->func = f;
    e->args = std::move(args);
    return e;
}

// ---------------------------------------------------------------- evaluation

double evaluate(const Expr& e, const EvalContext& ctx) {
    switch (e.kind) {
    case Expr::Kind::Constant:
        return e.value;
    case Expr::Kind::Variable:
        switch (e.var.kind) {
        case VarRef::Kind::Time:
            return ctx.t;
        case VarRef::Kind::Lambda:
            return ctx.lambda;
        case VarRef::Kind::State:
            if (e.var.index < 1 || e.var.index > static_cast<int>(ctx.x.size()))
                throw EvalError("state variable x" + std::to_string(e.var.index) +
                                    " not bound by evaluation context",
                                e.offset);
            return ctx.x[static_cast<std::size_t>(e.var.index - 1)];
        }
        break;
    case Expr::Kind::Unary:
        return -evaluate(*e.args[0], ctx);
    case Expr::Kind::Binary: {
        const double a = evaluate(*e.args[0], ctx);
        const double b = evaluate(*e.args[1], ctx);
        switch (e.bop) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div:
            if (b == 0.0) throw EvalError("division by zero", e.offset);
            return a / b;
        case BinaryOp::Pow: {
            const double r = std::pow(a, b);
            if (std::isnan(r))
                throw EvalError("fractional power of a negative base", e.offset);
            return r;
        }
        }
        break;
    }
    case Expr::Kind::Call: {
        const double a = evaluate(*e.args[0], ctx);
        switch (e.func) {
        case Func::Sin: return std::sin(a);
        case Func::Cos: return std::cos(a);
        case Func::Tan: return std::tan(a);
        case Func::Exp: return std::exp(a);
        case Func::Ln:
            if (a <= 0.0) throw EvalError("ln of non-positive argument", e.offset);
            return std::log(a);
        case Func::Sqrt:
            if (a < 0.0) throw EvalError("sqrt of negative argument", e.offset);
            return std::sqrt(a);
        case Func::Abs: return std::abs(a);
        case Func::Heaviside: return a > 0.0 ? 1.0 : 0.0;
        case Func::Pow: {
            const double b = evaluate(*e.args[1], ctx);
            const double r = std::pow(a, b);
            if (std::isnan(r))
                throw EvalError("fractional power of a negative base", e.offset);
            return r;
        }
        case Func::Max: return std::max(a, evaluate(*e.args[1], ctx));
        case Func::Min: return std::min(a, evaluate(*e.args[1], ctx));
        }
        break;
    }
    }
    throw Error("corrupt expression node");
}

bool uses_var(const ExprPtr& e, VarRef var) {
    if (e->kind == Expr::Kind::Variable) return e->var == var;
    for (const auto& a : e->args)
        if (uses_var(a, var)) return true;
    return false;
}

static bool uses_kind(const ExprPtr& e, VarRef::Kind k) {
    if (e->kind == Expr::Kind::Variable) return e->var.kind == k;
    for (const auto& a : e->args)
        if (uses_kind(a, k)) return true;
    return false;
}

bool uses_lambda(const ExprPtr& e) { return uses_kind(e, VarRef::Kind::Lambda); }
bool uses_state(const ExprPtr& e) { return uses_kind(e, VarRef::Kind::State); }

// ------------------------------------------------------------------- parsing

namespace {

struct Parser {
    std::string_view src;
    std::size_t pos = 0;
    int dimension = 0;

    [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
        throw ParseError(msg, at);
    }

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    bool peek_is(char c) {
        skip_ws();
        return pos < src.size() && src[pos] == c;
    }

    bool accept(char c) {
        if (peek_is(c)) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c) {
        skip_ws();
        if (pos >= src.size() || src[pos] != c)
            fail(std::string("expected '") + c + "'", pos);
        ++pos;
    }

    ExprPtr parse_expr() {
        ExprPtr lhs = parse_term();
        for (;;) {
            skip_ws();
            if (accept('+'))
                lhs = make_binary(BinaryOp::Add, lhs, parse_term());
            else if (accept('-'))
                lhs = make_binary(BinaryOp::Sub, lhs, parse_term());
            else
                return lhs;
        }
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_factor();
        for (;;) {
            skip_ws();
            if (accept('*'))
                lhs = make_binary(BinaryOp::Mul, lhs, parse_factor());
            else if (accept('/'))
                lhs = make_binary(BinaryOp::Div, lhs, parse_factor());
            else
                return lhs;
        }
    }

    // '^' is right-associative and binds tighter than unary minus: -x1^2 is
    // -(x1^2), while 2^-3 still parses since the exponent is a factor.
    ExprPtr parse_factor() {
        skip_ws();
        if (accept('-')) return make_unary(UnaryOp::Neg, parse_factor());
        ExprPtr base = parse_atom();
        skip_ws();
        if (accept('^')) {
            const std::size_t at = pos - 1;
            ExprPtr expo = parse_factor();
            auto node = make_binary(BinaryOp::Pow, base, expo);
            const_cast<Expr&>(*node).offset = at;
            return node;
        }
        return base;
    }

    ExprPtr parse_atom() {
        skip_ws();
        if (pos >= src.size()) fail("unexpected end of input", pos);
        const char c = src[pos];
        if (c == '(') {
            ++pos;
            ExprPtr inner = parse_expr();
            expect(')');
            return inner;
        }
        if (c == '-') {
            ++pos;
            return make_unary(UnaryOp::Neg, parse_factor());
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        fail(std::string("unexpected character '") + c + "'", pos);
    }

    ExprPtr parse_number() {
        const std::size_t start = pos;
        const char* begin = src.data() + pos;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("malformed number", start);
        pos += static_cast<std::size_t>(end - begin);
        auto node = make_constant(v);
        const_cast<Expr&>(*node).offset = start;
        return node;
    }

    ExprPtr parse_ident() {
        const std::size_t start = pos;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
            ++pos;
        const std::string name(src.substr(start, pos - start));

        if (peek_is('(')) {
            ++pos;
            std::vector<ExprPtr> args;
            args.push_back(parse_expr());
            while (accept(',')) args.push_back(parse_expr());
            expect(')');
            return make_function(name, std::move(args), start);
        }
        return make_var_node(name, start);
    }

    ExprPtr make_function(const std::string& name, std::vector<ExprPtr> args, std::size_t at) {
        static const std::map<std::string, std::pair<Func, int>> table = {
            {"sin", {Func::Sin, 1}},   {"cos", {Func::Cos, 1}},
            {"tan", {Func::Tan, 1}},   {"exp", {Func::Exp, 1}},
            {"ln", {Func::Ln, 1}},     {"sqrt", {Func::Sqrt, 1}},
            {"abs", {Func::Abs, 1}},   {"pow", {Func::Pow, 2}},
            {"max", {Func::Max, 2}},   {"min", {Func::Min, 2}},
            {"heaviside", {Func::Heaviside, 1}},
        };
        auto it = table.find(name);
        if (it == table.end()) fail("unknown function '" + name + "'", at);
        if (static_cast<int>(args.size()) != it->second.second)
            fail("function '" + name + "' expects " + std::to_string(it->second.second) +
                     " argument(s), got " + std::to_string(args.size()),
                 at);
        auto node = make_call(it->second.first, std::move(args));
        const_cast<Expr&>(*node).offset = at;
        return node;
    }

    ExprPtr make_var_node(const std::string& name, std::size_t at) {
        std::optional<VarRef> ref;
        if (name == "t")
            ref = VarRef::time();
        else if (name == "lambda")
            ref = VarRef::lambda();
        else if (name.size() >= 2 && name[0] == 'x') {
            bool digits = true;
            for (std::size_t i = 1; i < name.size(); ++i)
                digits = digits && std::isdigit(static_cast<unsigned char>(name[i]));
            if (digits && name[1] != '0') {
                const int idx = std::atoi(name.c_str() + 1);
                if (idx >= 1 && idx <= dimension) ref = VarRef::state(idx);
            }
        }
        if (!ref) fail("unknown identifier '" + name + "'", at);
        auto node = make_variable(*ref);
        const_cast<Expr&>(*node).offset = at;
        return node;
    }
};

} // namespace

ExprPtr parse(std::string_view source, int dimension) {
    Parser p{source, 0, dimension};
    ExprPtr e = p.parse_expr();
    p.skip_ws();
    if (p.pos != source.size()) p.fail("trailing input", p.pos);
    return e;
}

// ----------------------------------------------------------- differentiation

namespace {

bool is_zero(const ExprPtr& e) { return e->is_constant(0.0); }
bool is_one(const ExprPtr& e) { return e->is_constant(1.0); }

// Fold a node over constant children; leaves nodes whose evaluation would
// raise a domain error untouched so the error surfaces at run time instead.
ExprPtr fold(ExprPtr e) {
    if (e->kind == Expr::Kind::Constant || e->kind == Expr::Kind::Variable) return e;
    for (const auto& a : e->args)
        if (a->kind != Expr::Kind::Constant) return e;
    try {
        return make_constant(evaluate(*e, EvalContext{}));
    } catch (const EvalError&) {
        return e;
    }
}

ExprPtr neg(ExprPtr a) {
    if (a->kind == Expr::Kind::Constant) return make_constant(-a->value);
    if (a->kind == Expr::Kind::Unary) return a->args[0];
    return make_unary(UnaryOp::Neg, std::move(a));
}

ExprPtr add(ExprPtr a, ExprPtr b) {
    if (is_zero(a)) return b;
    if (is_zero(b)) return a;
    return fold(make_binary(BinaryOp::Add, std::move(a), std::move(b)));
}

ExprPtr sub(ExprPtr a, ExprPtr b) {
    if (is_zero(b)) return a;
    if (is_zero(a)) return neg(std::move(b));
    return fold(make_binary(BinaryOp::Sub, std::move(a), std::move(b)));
}

ExprPtr mul(ExprPtr a, ExprPtr b) {
    if (is_zero(a) || is_zero(b)) return make_constant(0.0);
    if (is_one(a)) return b;
    if (is_one(b)) return a;
    return fold(make_binary(BinaryOp::Mul, std::move(a), std::move(b)));
}

ExprPtr div(ExprPtr a, ExprPtr b) {
    if (is_zero(a)) return make_constant(0.0);
    if (is_one(b)) return a;
    return fold(make_binary(BinaryOp::Div, std::move(a), std::move(b)));
}

ExprPtr pw(ExprPtr a, ExprPtr b) {
    if (is_zero(b)) return make_constant(1.0);
    if (is_one(b)) return a;
    return fold(make_binary(BinaryOp::Pow, std::move(a), std::move(b)));
}

ExprPtr diff(const ExprPtr& e, VarRef var);

ExprPtr diff_pow(const ExprPtr& base, const ExprPtr& expo, VarRef var) {
    ExprPtr da = diff(base, var);
    ExprPtr db = diff(expo, var);
    if (is_zero(db)) {
        // d(a^c) = c * a^(c-1) * da
        ExprPtr cm1 = sub(expo, make_constant(1.0));
        return mul(mul(expo, pw(base, cm1)), da);
    }
    if (is_zero(da)) {
        // d(c^b) = c^b * ln(c) * db
        return mul(mul(pw(base, expo), make_call(Func::Ln, {base})), db);
    }
    // d(a^b) = a^b * (db*ln(a) + b*da/a)
    ExprPtr inner = add(mul(db, make_call(Func::Ln, {base})), div(mul(expo, da), base));
    return mul(pw(base, expo), inner);
}

ExprPtr diff(const ExprPtr& e, VarRef var) {
    switch (e->kind) {
    case Expr::Kind::Constant:
        return make_constant(0.0);
    case Expr::Kind::Variable:
        return make_constant(e->var == var ? 1.0 : 0.0);
    case Expr::Kind::Unary:
        return neg(diff(e->args[0], var));
    case Expr::Kind::Binary: {
        const ExprPtr& a = e->args[0];
        const ExprPtr& b = e->args[1];
        switch (e->bop) {
        case BinaryOp::Add: return add(diff(a, var), diff(b, var));
        case BinaryOp::Sub: return sub(diff(a, var), diff(b, var));
        case BinaryOp::Mul: return add(mul(diff(a, var), b), mul(a, diff(b, var)));
        case BinaryOp::Div:
            return div(sub(mul(diff(a, var), b), mul(a, diff(b, var))),
                       pw(b, make_constant(2.0)));
        case BinaryOp::Pow: return diff_pow(a, b, var);
        }
        break;
    }
    case Expr::Kind::Call: {
        const ExprPtr& u = e->args[0];
        ExprPtr du = diff(u, var);
        switch (e->func) {
        case Func::Sin: return mul(make_call(Func::Cos, {u}), du);
        case Func::Cos: return neg(mul(make_call(Func::Sin, {u}), du));
        case Func::Tan: {
            ExprPtr t2 = pw(make_call(Func::Tan, {u}), make_constant(2.0));
            return mul(add(make_constant(1.0), t2), du);
        }
        case Func::Exp: return mul(make_call(Func::Exp, {u}), du);
        case Func::Ln: return div(du, u);
        case Func::Sqrt:
            return div(du, mul(make_constant(2.0), make_call(Func::Sqrt, {u})));
        case Func::Abs:
            // d|u| = u/|u| * du; evaluation at u == 0 raises the division error.
            return mul(div(u, make_call(Func::Abs, {u})), du);
        case Func::Pow: return diff_pow(u, e->args[1], var);
        case Func::Max: {
            ExprPtr dv = diff(e->args[1], var);
            ExprPtr gate = make_call(Func::Heaviside, {sub(u, e->args[1])});
            return add(mul(gate, du), mul(sub(make_constant(1.0), gate), dv));
        }
        case Func::Min: {
            ExprPtr dv = diff(e->args[1], var);
            ExprPtr gate = make_call(Func::Heaviside, {sub(e->args[1], u)});
            return add(mul(gate, du), mul(sub(make_constant(1.0), gate), dv));
        }
        case Func::Heaviside:
            if (is_zero(du)) return make_constant(0.0);
            throw NonDifferentiableError(
                "heaviside is not differentiable along the requested variable");
        }
        break;
    }
    }
    throw Error("corrupt expression node");
}

} // namespace

ExprPtr differentiate(const ExprPtr& e, VarRef var) { return diff(e, var); }

// ------------------------------------------------------------------ printing

namespace {

// Precedence used for parenthesization: add/sub 1, mul/div 2, unary minus 3,
// pow 4, atoms 5.
int prec(const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::Constant: return e.value < 0 ? 3 : 5;
    case Expr::Kind::Variable: return 5;
    case Expr::Kind::Call: return 5;
    case Expr::Kind::Unary: return 3;
    case Expr::Kind::Binary:
        switch (e.bop) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return 1;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 2;
        case BinaryOp::Pow: return 4;
        }
    }
    return 5;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void print(const ExprPtr& e, std::string& out);

void print_wrapped(const ExprPtr& e, int min_prec, std::string& out) {
    if (prec(*e) < min_prec) {
        out += '(';
        print(e, out);
        out += ')';
    } else {
        print(e, out);
    }
}

const char* func_name(Func f) {
    switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Tan: return "tan";
    case Func::Exp: return "exp";
    case Func::Ln: return "ln";
    case Func::Sqrt: return "sqrt";
    case Func::Abs: return "abs";
    case Func::Pow: return "pow";
    case Func::Max: return "max";
    case Func::Min: return "min";
    case Func::Heaviside: return "heaviside";
    }
    return "?";
}

void print(const ExprPtr& e, std::string& out) {
    switch (e->kind) {
    case Expr::Kind::Constant:
        out += fmt_double(e->value);
        return;
    case Expr::Kind::Variable:
        switch (e->var.kind) {
        case VarRef::Kind::Time: out += 't'; return;
        case VarRef::Kind::Lambda: out += "lambda"; return;
        case VarRef::Kind::State: out += "x" + std::to_string(e->var.index); return;
        }
        return;
    case Expr::Kind::Unary:
        out += '-';
        print_wrapped(e->args[0], 4, out);
        return;
    case Expr::Kind::Binary: {
        const char* op = nullptr;
        int lp = 0, rp = 0;
        switch (e->bop) {
        case BinaryOp::Add: op = "+"; lp = 1; rp = 1; break;
        case BinaryOp::Sub: op = "-"; lp = 1; rp = 2; break;
        case BinaryOp::Mul: op = "*"; lp = 2; rp = 2; break;
        case BinaryOp::Div: op = "/"; lp = 2; rp = 3; break;
        case BinaryOp::Pow: op = "^"; lp = 5; rp = 4; break;
        }
        print_wrapped(e->args[0], lp, out);
        out += op;
        print_wrapped(e->args[1], rp, out);
        return;
    }
    case Expr::Kind::Call:
        out += func_name(e->func);
        out += '(';
        for (std::size_t i = 0; i < e->args.size(); ++i) {
            if (i) out += ',';
            print(e->args[i], out);
        }
        out += ')';
        return;
    }
}

} // namespace

std::string to_string(const ExprPtr& e) {
    std::string out;
    print(e, out);
    return out;
}

} // namespace mdebif
