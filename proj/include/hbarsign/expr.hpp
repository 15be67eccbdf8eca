#pragma once

#include "hbarsign/grid1d.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace hbarsign {

/// Error with a 1-based source column attached.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int column)
      : std::runtime_error(message + " (column " + std::to_string(column) + ")"),
        column_(column) {}
  int column() const { return column_; }

 private:
  int column_;
};

class CompileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TokenKind { number, identifier, op, lparen, rparen, comma, end };

struct Token {
  TokenKind kind;
  std::string lexeme;
  int column;  // 1-based
};

/// Whitespace-insensitive lexer. Throws ParseError on an illegal character.
std::vector<Token> tokenize(const std::string& text);

struct ExprAst;
using AstPtr = std::shared_ptr<const ExprAst>;

/// Operator-expression AST.
///
/// Grammar (EBNF, also in docs/expression-grammar.md):
///   expr   := term (('+' | '-') term)*
///   term   := factor (('*' | '/') factor)*
///   factor := '-' factor | power
///   power  := atom ('^' integer)*
///   atom   := number | name | name '(' expr ')' | '(' expr ')'
/// Binary operators associate left; '^' binds tighter than unary minus and
/// takes a literal non-negative integer exponent.
struct ExprAst {
  enum class Kind { constant, parameter, symbol, call, negate, binary, power };

  Kind kind;
  double value = 0.0;      // constant
  std::string name;        // parameter / symbol / call
  char op = 0;             // binary: + - * /
  int exponent = 0;        // power
  std::vector<AstPtr> children;
};

bool ast_equal(const ExprAst& a, const ExprAst& b);

/// Parses a token stream from tokenize(). Trailing tokens are an error.
AstPtr parse(const std::vector<Token>& tokens);
AstPtr parse_expression(const std::string& text);

/// Fully parenthesized rendering that re-parses to an identical AST.
std::string to_text(const ExprAst& ast);

struct CompiledOperator {
  GeneralOperator op;
  std::string source;
};

/// Compiles an expression to a dense linear operator on the grid.
/// x and p map to build_position / build_momentum(grid, params.hbar_signed);
/// m, e, c, hbar to scalars from params; Phi, A to diagonal samples of the
/// spec potentials at time t; products compose in source order, so x*p and
/// p*x differ. Functions (sin, cos, exp, sqr) and division require arguments
/// built from x alone; compiling the same text with hbar_signed negated
/// yields the entrywise-conjugated operator for any expression over x, p and
/// real functions of x.
CompiledOperator compile(const ExprAst& ast, const Grid& grid, const HamiltonianSpec& params,
                         double t = 0.0);
CompiledOperator compile(const std::string& text, const Grid& grid,
                         const HamiltonianSpec& params, double t = 0.0);

/// True when the expression never references p (so it compiles to a diagonal
/// multiplication operator).
bool is_position_only(const ExprAst& ast);

/// Scalar evaluation of a position-only expression at point x; used for
/// potentials given as text.
double evaluate_at(const ExprAst& ast, double x, const HamiltonianSpec& params, double t = 0.0);

}  // namespace hbarsign
