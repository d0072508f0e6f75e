#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

// Arithmetic expression language for problem definitions: +,-,*,/,^ with
// unary minus, calls abs,min,max,exp,log,gammafn, decimal literals with
// optional exponent. ^ binds tightest and is right-associative; unary minus
// binds looser than ^. Real powers are sign-aware: a negative base with a
// non-integer exponent is a domain error, never a complex value.
namespace sbvp::expr {

enum class TokenKind { number, identifier, op, paren, comma };

struct Token {
    TokenKind kind;
    std::string lexeme;
    std::size_t pos;
};

std::vector<Token> tokenize(const std::string& src);  // throws ParseError

enum class NodeKind { constant, variable, negate, binary, call };
enum class BinOp { add, sub, mul, div, pow };
enum class Fn { abs, min, max, exp, log, gammafn };

struct Node;
using Ast = std::shared_ptr<const Node>;

struct Node {
    NodeKind kind;
    double value = 0.0;       // constant
    std::string name;         // variable
    BinOp op = BinOp::add;    // binary
    Fn fn = Fn::abs;          // call
    std::vector<Ast> args;    // negate: 1, binary: 2, call: arity
};

Ast parse(const std::vector<Token>& tokens);  // throws ParseError
Ast parse(const std::string& src);

// Canonical rendering; parse(print(ast)) is structurally identical to ast.
std::string print(const Ast& ast);
bool structurally_equal(const Ast& a, const Ast& b);

// Name -> value bindings. Duplicate names and non-finite values are rejected.
class Env {
public:
    void bind(const std::string& name, double value);  // throws ConfigError on dup
    void set(const std::string& name, double value);   // bind or overwrite
    bool has(const std::string& name) const;
    double get(const std::string& name) const;         // throws EvalDomainError
    const std::vector<std::pair<std::string, double>>& entries() const {
        return entries_;
    }

private:
    std::vector<std::pair<std::string, double>> entries_;
};

// Tree-walking evaluation; throws EvalDomainError on domain violations and
// unbound identifiers. Returns a finite real otherwise.
double eval(const Ast& ast, const Env& env);

// Names of all variables referenced by the expression (sorted, unique).
std::vector<std::string> variables(const Ast& ast);

// Flattened postfix program bound to a fixed slot layout, for hot loops.
// Equivalent to eval() (equivalence-tested); slot values are supplied per
// call, parameters can be frozen into constants at compile time.
class Program {
public:
    static Program compile(const Ast& ast, const std::vector<std::string>& slots,
                           const Env& frozen_params);
    double operator()(const double* slot_values) const;

private:
    enum class Op : std::uint8_t {
        push_const, push_slot, neg, add, sub, mul, div, pow,
        fn_abs, fn_min, fn_max, fn_exp, fn_log, fn_gamma
    };
    struct Instr {
        Op op;
        std::uint32_t idx = 0;  // constant index or slot index
    };
    std::vector<Instr> code_;
    std::vector<double> consts_;
    std::size_t max_stack_ = 0;
};

}  // namespace sbvp::expr
