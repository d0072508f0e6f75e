#include "sbvp/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "sbvp/errors.hpp"
#include "sbvp/numerics.hpp"

namespace sbvp::expr {

// ---------------------------------------------------------------------------
// lexer
// ---------------------------------------------------------------------------

std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = src.size();
    while (i < n) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            // number: digits [. digits] [e[+-]digits], longest match
            while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            if (i < n && src[i] == '.') {
                ++i;
                while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            }
            if (i < n && (src[i] == 'e' || src[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < n && (src[j] == '+' || src[j] == '-')) ++j;
                if (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) {
                    i = j;
                    while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
                }
            }
            out.push_back({TokenKind::number, src.substr(start, i - start), start});
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < n && (std::isalnum(static_cast<unsigned char>(src[i])) ||
                             src[i] == '_'))
                ++i;
            out.push_back({TokenKind::identifier, src.substr(start, i - start), start});
        } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
            out.push_back({TokenKind::op, std::string(1, c), start});
            ++i;
        } else if (c == '(' || c == ')') {
            out.push_back({TokenKind::paren, std::string(1, c), start});
            ++i;
        } else if (c == ',') {
            out.push_back({TokenKind::comma, ",", start});
            ++i;
        } else {
            throw ParseError(std::string("illegal character '") + c + "'", start);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// parser (precedence climbing)
// ---------------------------------------------------------------------------

namespace {

struct FnInfo {
    const char* name;
    Fn fn;
    int arity;
};
constexpr FnInfo kFns[] = {{"abs", Fn::abs, 1}, {"min", Fn::min, 2},
                           {"max", Fn::max, 2}, {"exp", Fn::exp, 1},
                           {"log", Fn::log, 1}, {"gammafn", Fn::gammafn, 1}};

const FnInfo* lookup_fn(const std::string& name) {
    for (const auto& f : kFns)
        if (name == f.name) return &f;
    return nullptr;
}

Ast make_const(double v) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::constant;
    n->value = v;
    return n;
}

Ast make_var(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::variable;
    n->name = std::move(name);
    return n;
}

Ast make_neg(Ast a) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::negate;
    n->args = {std::move(a)};
    return n;
}

Ast make_bin(BinOp op, Ast l, Ast r) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::binary;
    n->op = op;
    n->args = {std::move(l), std::move(r)};
    return n;
}

Ast make_call(Fn fn, std::vector<Ast> args) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::call;
    n->fn = fn;
    n->args = std::move(args);
    return n;
}

class Parser {
public:
    explicit Parser(const std::vector<Token>& toks) : toks_(toks) {}

    Ast run() {
        Ast e = parse_expr(0);
        if (pos_ < toks_.size())
            throw ParseError("unexpected token '" + toks_[pos_].lexeme + "'",
                             toks_[pos_].pos);
        return e;
    }

private:
    static constexpr int kMaxDepth = 200;
    const std::vector<Token>& toks_;
    std::size_t pos_ = 0;
    int depth_ = 0;

    struct DepthGuard {
        Parser& p;
        explicit DepthGuard(Parser& p_) : p(p_) {
            if (++p.depth_ > kMaxDepth)
                throw ParseError("expression too deeply nested",
                                 p.pos_ < p.toks_.size() ? p.toks_[p.pos_].pos : 0);
        }
        ~DepthGuard() { --p.depth_; }
    };

    [[noreturn]] void fail_eof() const {
        std::size_t p = toks_.empty() ? 0 : toks_.back().pos + toks_.back().lexeme.size();
        throw ParseError("unexpected end of input", p);
    }

    const Token& peek() const {
        if (pos_ >= toks_.size()) fail_eof();
        return toks_[pos_];
    }
    bool at_end() const { return pos_ >= toks_.size(); }
    const Token& take() {
        const Token& t = peek();
        ++pos_;
        return t;
    }
    bool accept_op(const char* o) {
        if (!at_end() && toks_[pos_].kind == TokenKind::op && toks_[pos_].lexeme == o) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool accept_paren(char p) {
        if (!at_end() && toks_[pos_].kind == TokenKind::paren &&
            toks_[pos_].lexeme[0] == p) {
            ++pos_;
            return true;
        }
        return false;
    }

    // levels: 0 = +,-   1 = *,/   (unary and ^ handled in parse_unary)
    Ast parse_expr(int level) {
        DepthGuard guard(*this);
        if (level == 0) {
            Ast l = parse_expr(1);
            for (;;) {
                if (accept_op("+"))
                    l = make_bin(BinOp::add, l, parse_expr(1));
                else if (accept_op("-"))
                    l = make_bin(BinOp::sub, l, parse_expr(1));
                else
                    return l;
            }
        }
        Ast l = parse_unary();
        for (;;) {
            if (accept_op("*"))
                l = make_bin(BinOp::mul, l, parse_unary());
            else if (accept_op("/"))
                l = make_bin(BinOp::div, l, parse_unary());
            else
                return l;
        }
    }

    // unary minus binds looser than ^:  -2^2 == -(2^2)
    Ast parse_unary() {
        DepthGuard guard(*this);
        if (accept_op("-")) return make_neg(parse_unary());
        if (accept_op("+")) return parse_unary();
        return parse_power();
    }

    // ^ is right-associative; its exponent may start with unary minus
    Ast parse_power() {
        Ast base = parse_primary();
        if (accept_op("^")) return make_bin(BinOp::pow, base, parse_unary());
        return base;
    }

    Ast parse_primary() {
        DepthGuard guard(*this);
        const Token& t = peek();
        if (t.kind == TokenKind::number) {
            take();
            return make_const(std::stod(t.lexeme));
        }
        if (t.kind == TokenKind::identifier) {
            take();
            if (!at_end() && toks_[pos_].kind == TokenKind::paren &&
                toks_[pos_].lexeme == "(") {
                const FnInfo* fi = lookup_fn(t.lexeme);
                if (!fi) throw ParseError("unknown function '" + t.lexeme + "'", t.pos);
                take();  // '('
                std::vector<Ast> args;
                args.push_back(parse_expr(0));
                while (!at_end() && toks_[pos_].kind == TokenKind::comma) {
                    take();
                    args.push_back(parse_expr(0));
                }
                if (!accept_paren(')')) {
                    if (at_end()) fail_eof();
                    throw ParseError("expected ')'", peek().pos);
                }
                if (int(args.size()) != fi->arity)
                    throw ParseError("function '" + t.lexeme + "' expects " +
                                         std::to_string(fi->arity) + " argument(s)",
                                     t.pos);
                return make_call(fi->fn, std::move(args));
            }
            return make_var(t.lexeme);
        }
        if (t.kind == TokenKind::paren && t.lexeme == "(") {
            take();
            Ast e = parse_expr(0);
            if (!accept_paren(')')) {
                if (at_end()) fail_eof();
                throw ParseError("expected ')'", peek().pos);
            }
            return e;
        }
        throw ParseError("unexpected token '" + t.lexeme + "'", t.pos);
    }
};

}  // namespace

Ast parse(const std::vector<Token>& tokens) { return Parser(tokens).run(); }

Ast parse(const std::string& src) { return parse(tokenize(src)); }

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

namespace {

int precedence(const Node& n) {
    switch (n.kind) {
        case NodeKind::binary:
            switch (n.op) {
                case BinOp::add:
                case BinOp::sub: return 0;
                case BinOp::mul:
                case BinOp::div: return 1;
                case BinOp::pow: return 3;
            }
            return 0;
        case NodeKind::negate: return 2;
        default: return 4;  // atoms
    }
}

const char* op_str(BinOp op) {
    switch (op) {
        case BinOp::add: return "+";
        case BinOp::sub: return "-";
        case BinOp::mul: return "*";
        case BinOp::div: return "/";
        case BinOp::pow: return "^";
    }
    return "?";
}

const char* fn_str(Fn fn) {
    switch (fn) {
        case Fn::abs: return "abs";
        case Fn::min: return "min";
        case Fn::max: return "max";
        case Fn::exp: return "exp";
        case Fn::log: return "log";
        case Fn::gammafn: return "gammafn";
    }
    return "?";
}

void print_rec(const Ast& a, std::string& out, int parent_prec, bool right_side) {
    int prec = precedence(*a);
    bool need_paren = false;
    if (a->kind == NodeKind::binary || a->kind == NodeKind::negate) {
        if (prec < parent_prec) need_paren = true;
        // left-assoc ops: parenthesize an equal-precedence right child;
        // right-assoc ^ the other way around
        if (prec == parent_prec) {
            if (parent_prec == 3)
                need_paren = !right_side;
            else
                need_paren = right_side;
        }
    }
    if (need_paren) out += '(';
    switch (a->kind) {
        case NodeKind::constant: {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", a->value);
            out += buf;
            break;
        }
        case NodeKind::variable:
            out += a->name;
            break;
        case NodeKind::negate:
            out += '-';
            print_rec(a->args[0], out, prec, true);
            break;
        case NodeKind::binary:
            print_rec(a->args[0], out, prec, false);
            out += op_str(a->op);
            print_rec(a->args[1], out, prec, true);
            break;
        case NodeKind::call:
            out += fn_str(a->fn);
            out += '(';
            for (std::size_t i = 0; i < a->args.size(); ++i) {
                if (i) out += ',';
                print_rec(a->args[i], out, 0, false);
            }
            out += ')';
            break;
    }
    if (need_paren) out += ')';
}

}  // namespace

std::string print(const Ast& ast) {
    std::string out;
    print_rec(ast, out, 0, false);
    return out;
}

bool structurally_equal(const Ast& a, const Ast& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case NodeKind::constant:
            return a->value == b->value ||
                   (std::isnan(a->value) && std::isnan(b->value));
        case NodeKind::variable: return a->name == b->name;
        case NodeKind::binary:
            if (a->op != b->op) return false;
            break;
        case NodeKind::call:
            if (a->fn != b->fn) return false;
            break;
        case NodeKind::negate: break;
    }
    if (a->args.size() != b->args.size()) return false;
    for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!structurally_equal(a->args[i], b->args[i])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// environment + evaluation
// ---------------------------------------------------------------------------

void Env::bind(const std::string& name, double value) {
    if (has(name)) throw ConfigError("Env: duplicate binding '" + name + "'");
    if (!std::isfinite(value))
        throw ConfigError("Env: non-finite value for '" + name + "'");
    entries_.emplace_back(name, value);
}

void Env::set(const std::string& name, double value) {
    if (!std::isfinite(value))
        throw ConfigError("Env: non-finite value for '" + name + "'");
    for (auto& e : entries_)
        if (e.first == name) {
            e.second = value;
            return;
        }
    entries_.emplace_back(name, value);
}

bool Env::has(const std::string& name) const {
    for (const auto& e : entries_)
        if (e.first == name) return true;
    return false;
}

double Env::get(const std::string& name) const {
    for (const auto& e : entries_)
        if (e.first == name) return e.second;
    throw EvalDomainError("unbound identifier '" + name + "'");
}

namespace {

bool is_integer(double x) { return std::isfinite(x) && x == std::nearbyint(x); }

double checked_pow(double base, double expo) {
    if (base < 0.0 && !is_integer(expo))
        throw EvalDomainError("negative base with non-integer exponent");
    if (base == 0.0 && expo < 0.0)
        throw EvalDomainError("zero raised to a negative power");
    return std::pow(base, expo);
}

double apply_fn(Fn fn, const double* a) {
    switch (fn) {
        case Fn::abs: return std::fabs(a[0]);
        case Fn::min: return std::fmin(a[0], a[1]);
        case Fn::max: return std::fmax(a[0], a[1]);
        case Fn::exp: return std::exp(a[0]);
        case Fn::log:
            if (!(a[0] > 0.0)) throw EvalDomainError("log of a nonpositive value");
            return std::log(a[0]);
        case Fn::gammafn:
            if (!(a[0] > 0.0))
                throw EvalDomainError("gammafn of a nonpositive value");
            return gamma_fn(a[0]);
    }
    throw EvalDomainError("unknown function");
}

}  // namespace

double eval(const Ast& ast, const Env& env) {
    switch (ast->kind) {
        case NodeKind::constant: return ast->value;
        case NodeKind::variable: return env.get(ast->name);
        case NodeKind::negate: return -eval(ast->args[0], env);
        case NodeKind::binary: {
            double l = eval(ast->args[0], env);
            double r = eval(ast->args[1], env);
            switch (ast->op) {
                case BinOp::add: return l + r;
                case BinOp::sub: return l - r;
                case BinOp::mul: return l * r;
                case BinOp::div:
                    if (r == 0.0) throw EvalDomainError("division by zero");
                    return l / r;
                case BinOp::pow: return checked_pow(l, r);
            }
            break;
        }
        case NodeKind::call: {
            double a[2] = {0.0, 0.0};
            for (std::size_t i = 0; i < ast->args.size(); ++i)
                a[i] = eval(ast->args[i], env);
            return apply_fn(ast->fn, a);
        }
    }
    throw EvalDomainError("malformed expression node");
}

std::vector<std::string> variables(const Ast& ast) {
    std::set<std::string> s;
    std::vector<const Node*> stack{ast.get()};
    while (!stack.empty()) {
        const Node* n = stack.back();
        stack.pop_back();
        if (n->kind == NodeKind::variable) s.insert(n->name);
        for (const auto& c : n->args) stack.push_back(c.get());
    }
    return {s.begin(), s.end()};
}

// ---------------------------------------------------------------------------
// compiled programs
// ---------------------------------------------------------------------------

Program Program::compile(const Ast& ast, const std::vector<std::string>& slots,
                         const Env& frozen_params) {
    Program p;
    std::size_t depth = 0;
    auto grow = [&](std::size_t d) { p.max_stack_ = std::max(p.max_stack_, d); };

    std::function<void(const Ast&)> emit = [&](const Ast& a) {
        switch (a->kind) {
            case NodeKind::constant:
                p.consts_.push_back(a->value);
                p.code_.push_back({Op::push_const, std::uint32_t(p.consts_.size() - 1)});
                grow(++depth);
                return;
            case NodeKind::variable: {
                auto it = std::find(slots.begin(), slots.end(), a->name);
                if (it != slots.end()) {
                    p.code_.push_back(
                        {Op::push_slot, std::uint32_t(it - slots.begin())});
                } else if (frozen_params.has(a->name)) {
                    p.consts_.push_back(frozen_params.get(a->name));
                    p.code_.push_back(
                        {Op::push_const, std::uint32_t(p.consts_.size() - 1)});
                } else {
                    throw EvalDomainError("unbound identifier '" + a->name + "'");
                }
                grow(++depth);
                return;
            }
            case NodeKind::negate:
                emit(a->args[0]);
                p.code_.push_back({Op::neg, 0});
                return;
            case NodeKind::binary:
                emit(a->args[0]);
                emit(a->args[1]);
                switch (a->op) {
                    case BinOp::add: p.code_.push_back({Op::add, 0}); break;
                    case BinOp::sub: p.code_.push_back({Op::sub, 0}); break;
                    case BinOp::mul: p.code_.push_back({Op::mul, 0}); break;
                    case BinOp::div: p.code_.push_back({Op::div, 0}); break;
                    case BinOp::pow: p.code_.push_back({Op::pow, 0}); break;
                }
                --depth;
                return;
            case NodeKind::call:
                for (const auto& c : a->args) emit(c);
                switch (a->fn) {
                    case Fn::abs: p.code_.push_back({Op::fn_abs, 0}); break;
                    case Fn::min: p.code_.push_back({Op::fn_min, 0}); break;
                    case Fn::max: p.code_.push_back({Op::fn_max, 0}); break;
                    case Fn::exp: p.code_.push_back({Op::fn_exp, 0}); break;
                    case Fn::log: p.code_.push_back({Op::fn_log, 0}); break;
                    case Fn::gammafn: p.code_.push_back({Op::fn_gamma, 0}); break;
                }
                depth -= a->args.size() - 1;
                return;
        }
    };
    emit(ast);
    if (p.max_stack_ > 64)
        throw ConfigError("Program: expression stack too deep");
    return p;
}

double Program::operator()(const double* slot_values) const {
    double stack[64];
    std::size_t sp = 0;
    for (const auto& ins : code_) {
        switch (ins.op) {
            case Op::push_const: stack[sp++] = consts_[ins.idx]; break;
            case Op::push_slot: stack[sp++] = slot_values[ins.idx]; break;
            case Op::neg: stack[sp - 1] = -stack[sp - 1]; break;
            case Op::add: stack[sp - 2] += stack[sp - 1]; --sp; break;
            case Op::sub: stack[sp - 2] -= stack[sp - 1]; --sp; break;
            case Op::mul: stack[sp - 2] *= stack[sp - 1]; --sp; break;
            case Op::div:
                if (stack[sp - 1] == 0.0) throw EvalDomainError("division by zero");
                stack[sp - 2] /= stack[sp - 1];
                --sp;
                break;
            case Op::pow:
                stack[sp - 2] = checked_pow(stack[sp - 2], stack[sp - 1]);
                --sp;
                break;
            case Op::fn_abs: stack[sp - 1] = std::fabs(stack[sp - 1]); break;
            case Op::fn_min:
                stack[sp - 2] = std::fmin(stack[sp - 2], stack[sp - 1]);
                --sp;
                break;
            case Op::fn_max:
                stack[sp - 2] = std::fmax(stack[sp - 2], stack[sp - 1]);
                --sp;
                break;
            case Op::fn_exp: stack[sp - 1] = std::exp(stack[sp - 1]); break;
            case Op::fn_log:
                if (!(stack[sp - 1] > 0.0))
                    throw EvalDomainError("log of a nonpositive value");
                stack[sp - 1] = std::log(stack[sp - 1]);
                break;
            case Op::fn_gamma:
                if (!(stack[sp - 1] > 0.0))
                    throw EvalDomainError("gammafn of a nonpositive value");
                stack[sp - 1] = gamma_fn(stack[sp - 1]);
                break;
        }
    }
    return stack[0];
}

}  // namespace sbvp::expr
