#include "hbarsign/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace hbarsign {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

}  // namespace

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> tokens;
  size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    const int column = static_cast<int>(i) + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (is_digit(c) || (c == '.' && i + 1 < text.size() && is_digit(text[i + 1]))) {
      size_t j = i;
      while (j < text.size() && is_digit(text[j])) ++j;
      if (j < text.size() && text[j] == '.') {
        ++j;
        while (j < text.size() && is_digit(text[j])) ++j;
      }
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < text.size() && is_digit(text[k])) {
          while (k < text.size() && is_digit(text[k])) ++k;
          j = k;
        }
      }
      tokens.push_back({TokenKind::number, text.substr(i, j - i), column});
      i = j;
      continue;
    }
    if (is_ident_start(c)) {
      size_t j = i;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      tokens.push_back({TokenKind::identifier, text.substr(i, j - i), column});
      i = j;
      continue;
    }
    switch (c) {
      case '+':
      case '-':
      case '*':
      case '/':
      case '^':
        tokens.push_back({TokenKind::op, std::string(1, c), column});
        break;
      case '(':
        tokens.push_back({TokenKind::lparen, "(", column});
        break;
      case ')':
        tokens.push_back({TokenKind::rparen, ")", column});
        break;
      case ',':
        tokens.push_back({TokenKind::comma, ",", column});
        break;
      default:
        throw ParseError(std::string("illegal character '") + c + "'", column);
    }
    ++i;
  }
  tokens.push_back({TokenKind::end, "", static_cast<int>(text.size()) + 1});
  return tokens;
}

namespace {

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {}

  AstPtr run() {
    AstPtr ast = expression();
    if (peek().kind != TokenKind::end) {
      throw ParseError("unexpected token '" + peek().lexeme + "'", peek().column);
    }
    return ast;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }

  bool match_op(char c) {
    if (peek().kind == TokenKind::op && peek().lexeme[0] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  AstPtr expression() {
    AstPtr lhs = term();
    for (;;) {
      if (match_op('+')) {
        lhs = binary('+', lhs, term());
      } else if (match_op('-')) {
        lhs = binary('-', lhs, term());
      } else {
        return lhs;
      }
    }
  }

  AstPtr term() {
    AstPtr lhs = factor();
    for (;;) {
      if (match_op('*')) {
        lhs = binary('*', lhs, factor());
      } else if (match_op('/')) {
        lhs = binary('/', lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  AstPtr factor() {
    if (match_op('-')) {
      auto node = std::make_shared<ExprAst>();
      node->kind = ExprAst::Kind::negate;
      node->children.push_back(factor());
      return node;
    }
    return power();
  }

  AstPtr power() {
    AstPtr base = atom();
    while (match_op('^')) {
      const Token& exp = peek();
      if (exp.kind != TokenKind::number) {
        throw ParseError("'^' requires a literal integer exponent", exp.column);
      }
      const double value = std::stod(exp.lexeme);
      const int k = static_cast<int>(value);
      if (static_cast<double>(k) != value || k < 0) {
        throw ParseError("'^' exponent must be a non-negative integer", exp.column);
      }
      advance();
      auto node = std::make_shared<ExprAst>();
      node->kind = ExprAst::Kind::power;
      node->exponent = k;
      node->children.push_back(base);
      base = node;
    }
    return base;
  }

  AstPtr atom() {
    const Token& tok = peek();
    if (tok.kind == TokenKind::number) {
      advance();
      auto node = std::make_shared<ExprAst>();
      node->kind = ExprAst::Kind::constant;
      node->value = std::stod(tok.lexeme);
      return node;
    }
    if (tok.kind == TokenKind::identifier) {
      advance();
      if (peek().kind == TokenKind::lparen) {
        advance();
        AstPtr arg = expression();
        if (peek().kind != TokenKind::rparen) {
          throw ParseError("expected ')' to close call to '" + tok.lexeme + "'", peek().column);
        }
        advance();
        auto node = std::make_shared<ExprAst>();
        node->kind = ExprAst::Kind::call;
        node->name = tok.lexeme;
        node->children.push_back(arg);
        return node;
      }
      auto node = std::make_shared<ExprAst>();
      node->kind = (tok.lexeme == "x" || tok.lexeme == "p") ? ExprAst::Kind::symbol
                                                            : ExprAst::Kind::parameter;
      node->name = tok.lexeme;
      return node;
    }
    if (tok.kind == TokenKind::lparen) {
      advance();
      AstPtr inner = expression();
      if (peek().kind != TokenKind::rparen) {
        throw ParseError("unbalanced parentheses", peek().column);
      }
      advance();
      return inner;
    }
    if (tok.kind == TokenKind::end) {
      throw ParseError("unexpected end of expression", tok.column);
    }
    throw ParseError("unexpected token '" + tok.lexeme + "'", tok.column);
  }

  static AstPtr binary(char op, AstPtr lhs, AstPtr rhs) {
    auto node = std::make_shared<ExprAst>();
    node->kind = ExprAst::Kind::binary;
    node->op = op;
    node->children.push_back(std::move(lhs));
    node->children.push_back(std::move(rhs));
    return node;
  }

  const std::vector<Token>& tokens_;
  size_t pos_ = 0;
};

}  // namespace

AstPtr parse(const std::vector<Token>& tokens) { return Parser(tokens).run(); }

AstPtr parse_expression(const std::string& text) { return parse(tokenize(text)); }

bool ast_equal(const ExprAst& a, const ExprAst& b) {
  if (a.kind != b.kind || a.value != b.value || a.name != b.name || a.op != b.op ||
      a.exponent != b.exponent || a.children.size() != b.children.size()) {
    return false;
  }
  for (size_t i = 0; i < a.children.size(); ++i) {
    if (!ast_equal(*a.children[i], *b.children[i])) return false;
  }
  return true;
}

std::string to_text(const ExprAst& ast) {
  switch (ast.kind) {
    case ExprAst::Kind::constant: {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", ast.value);
      return buf;
    }
    case ExprAst::Kind::parameter:
    case ExprAst::Kind::symbol:
      return ast.name;
    case ExprAst::Kind::call:
      return ast.name + "(" + to_text(*ast.children[0]) + ")";
    case ExprAst::Kind::negate:
      return "(-" + to_text(*ast.children[0]) + ")";
    case ExprAst::Kind::power:
      return "(" + to_text(*ast.children[0]) + "^" + std::to_string(ast.exponent) + ")";
    case ExprAst::Kind::binary:
      return "(" + to_text(*ast.children[0]) + std::string(1, ast.op) + to_text(*ast.children[1]) +
             ")";
  }
  throw std::logic_error("to_text: unknown node kind");
}

bool is_position_only(const ExprAst& ast) {
  if (ast.kind == ExprAst::Kind::symbol && ast.name == "p") return false;
  for (const auto& child : ast.children) {
    if (!is_position_only(*child)) return false;
  }
  return true;
}

namespace {

// Compilation value lattice: scalar < diagonal < full. Scalars and diagonals
// stay real (every construct producing them is real-valued); only p brings in
// complex entries.
struct Value {
  enum class Kind { scalar, diagonal, full } kind;
  double scalar = 0.0;
  Eigen::VectorXd diagonal;
  ComplexMatrix full;
};

Value scalar_value(double s) { return {Value::Kind::scalar, s, {}, {}}; }
Value diagonal_value(Eigen::VectorXd d) { return {Value::Kind::diagonal, 0.0, std::move(d), {}}; }
Value full_value(ComplexMatrix m) { return {Value::Kind::full, 0.0, {}, std::move(m)}; }

class Compiler {
 public:
  Compiler(const Grid& grid, const HamiltonianSpec& params, double t)
      : grid_(grid), params_(params), t_(t) {}

  Value eval(const ExprAst& ast) {
    switch (ast.kind) {
      case ExprAst::Kind::constant:
        return scalar_value(ast.value);
      case ExprAst::Kind::parameter:
        return parameter(ast.name);
      case ExprAst::Kind::symbol:
        return symbol(ast.name);
      case ExprAst::Kind::call:
        return call(ast.name, eval(*ast.children[0]));
      case ExprAst::Kind::negate:
        return negate(eval(*ast.children[0]));
      case ExprAst::Kind::power:
        return power(eval(*ast.children[0]), ast.exponent);
      case ExprAst::Kind::binary: {
        Value lhs = eval(*ast.children[0]);
        Value rhs = eval(*ast.children[1]);
        switch (ast.op) {
          case '+':
            return add(std::move(lhs), std::move(rhs), 1.0);
          case '-':
            return add(std::move(lhs), std::move(rhs), -1.0);
          case '*':
            return multiply(std::move(lhs), std::move(rhs));
          case '/':
            return divide(std::move(lhs), std::move(rhs));
        }
        throw CompileError("unknown binary operator");
      }
    }
    throw CompileError("unknown AST node");
  }

  ComplexMatrix materialize(const Value& v) const {
    switch (v.kind) {
      case Value::Kind::scalar:
        return v.scalar * ComplexMatrix::Identity(grid_.n, grid_.n);
      case Value::Kind::diagonal: {
        ComplexMatrix m = ComplexMatrix::Zero(grid_.n, grid_.n);
        m.diagonal() = v.diagonal.cast<Complex>();
        return m;
      }
      case Value::Kind::full:
        return v.full;
    }
    throw CompileError("unknown value kind");
  }

 private:
  Value parameter(const std::string& name) {
    if (name == "m") return scalar_value(params_.mass);
    if (name == "e") return scalar_value(params_.charge);
    if (name == "c") return scalar_value(params_.light_speed);
    if (name == "hbar") return scalar_value(params_.hbar_signed);
    if (name == "t") return scalar_value(t_);
    if (name == "Phi") return sampled_potential(params_.scalar_potential, "Phi");
    if (name == "A") return sampled_potential(params_.vector_potential, "A");
    throw CompileError("unknown identifier '" + name + "'");
  }

  Value sampled_potential(const Potential& v, const char* name) {
    Eigen::VectorXd d(grid_.n);
    for (Eigen::Index j = 0; j < grid_.n; ++j) {
      d(j) = v ? v(grid_.point(j), t_) : 0.0;
      if (!std::isfinite(d(j))) {
        throw CompileError(std::string(name) + " sample is non-finite on the grid");
      }
    }
    return diagonal_value(std::move(d));
  }

  Value symbol(const std::string& name) {
    if (name == "x") return diagonal_value(grid_.points());
    return full_value(build_momentum(grid_, params_.hbar_signed).mat);
  }

  Value call(const std::string& name, Value arg) {
    if (arg.kind == Value::Kind::full) {
      throw CompileError("function '" + name +
                         "' applied to an operator that is not a function of x alone");
    }
    auto apply_fn = [&](double v) -> double {
      if (name == "sin") return std::sin(v);
      if (name == "cos") return std::cos(v);
      if (name == "exp") return std::exp(v);
      if (name == "sqr") return v * v;
      throw CompileError("unknown function '" + name + "'");
    };
    if (arg.kind == Value::Kind::scalar) return scalar_value(apply_fn(arg.scalar));
    Eigen::VectorXd d = arg.diagonal;
    for (Eigen::Index j = 0; j < d.size(); ++j) d(j) = apply_fn(d(j));
    return diagonal_value(std::move(d));
  }

  Value negate(Value v) {
    switch (v.kind) {
      case Value::Kind::scalar:
        return scalar_value(-v.scalar);
      case Value::Kind::diagonal:
        v.diagonal = -v.diagonal;
        return v;
      case Value::Kind::full:
        v.full = -v.full;
        return v;
    }
    throw CompileError("unknown value kind");
  }

  Value power(Value base, int k) {
    if (k == 0) return scalar_value(1.0);
    Value acc = base;
    for (int i = 1; i < k; ++i) acc = multiply(std::move(acc), base);
    return acc;
  }

  Eigen::VectorXd as_diagonal(const Value& v) const {
    if (v.kind == Value::Kind::diagonal) return v.diagonal;
    return Eigen::VectorXd::Constant(grid_.n, v.scalar);
  }

  Value add(Value lhs, Value rhs, double sign) {
    if (lhs.kind == Value::Kind::scalar && rhs.kind == Value::Kind::scalar) {
      return scalar_value(lhs.scalar + sign * rhs.scalar);
    }
    if (lhs.kind != Value::Kind::full && rhs.kind != Value::Kind::full) {
      return diagonal_value(as_diagonal(lhs) + sign * as_diagonal(rhs));
    }
    return full_value(materialize(lhs) + sign * materialize(rhs));
  }

  // Source order: lhs acts after rhs on a state, i.e. the matrix product
  // lhs * rhs.
  Value multiply(Value lhs, const Value& rhs) {
    if (lhs.kind == Value::Kind::scalar && rhs.kind == Value::Kind::scalar) {
      return scalar_value(lhs.scalar * rhs.scalar);
    }
    if (lhs.kind != Value::Kind::full && rhs.kind != Value::Kind::full) {
      return diagonal_value(as_diagonal(lhs).cwiseProduct(as_diagonal(rhs)));
    }
    if (lhs.kind == Value::Kind::full && rhs.kind == Value::Kind::full) {
      return full_value(lhs.full * rhs.full);
    }
    if (lhs.kind == Value::Kind::full) {
      if (rhs.kind == Value::Kind::scalar) return full_value(lhs.full * rhs.scalar);
      return full_value(lhs.full * rhs.diagonal.cast<Complex>().asDiagonal());
    }
    // lhs scalar or diagonal, rhs full
    if (lhs.kind == Value::Kind::scalar) return full_value(lhs.scalar * rhs.full);
    return full_value(lhs.diagonal.cast<Complex>().asDiagonal() * rhs.full);
  }

  Value divide(Value lhs, const Value& rhs) {
    if (rhs.kind == Value::Kind::full) {
      throw CompileError("division by an operator that is not a function of x alone");
    }
    if (rhs.kind == Value::Kind::scalar) {
      if (rhs.scalar == 0.0) throw CompileError("division by zero");
      switch (lhs.kind) {
        case Value::Kind::scalar:
          return scalar_value(lhs.scalar / rhs.scalar);
        case Value::Kind::diagonal:
          return diagonal_value(lhs.diagonal / rhs.scalar);
        case Value::Kind::full:
          return full_value(lhs.full / rhs.scalar);
      }
      throw CompileError("unknown value kind");
    }
    for (Eigen::Index j = 0; j < rhs.diagonal.size(); ++j) {
      if (rhs.diagonal(j) == 0.0) {
        throw CompileError("division by an operator with a zero sample on the grid");
      }
    }
    // a / b = a * diag(1/b), composed in source order.
    const Eigen::VectorXd inverse = rhs.diagonal.cwiseInverse();
    if (lhs.kind == Value::Kind::full) {
      return full_value(lhs.full * inverse.cast<Complex>().asDiagonal());
    }
    return diagonal_value(as_diagonal(lhs).cwiseProduct(inverse));
  }

  const Grid& grid_;
  const HamiltonianSpec& params_;
  double t_;
};

}  // namespace

CompiledOperator compile(const ExprAst& ast, const Grid& grid, const HamiltonianSpec& params,
                         double t) {
  Compiler compiler(grid, params, t);
  const Value value = compiler.eval(ast);
  return {linear_op(compiler.materialize(value)), to_text(ast)};
}

CompiledOperator compile(const std::string& text, const Grid& grid,
                         const HamiltonianSpec& params, double t) {
  Compiler compiler(grid, params, t);
  const Value value = compiler.eval(*parse_expression(text));
  return {linear_op(compiler.materialize(value)), text};
}

double evaluate_at(const ExprAst& ast, double x, const HamiltonianSpec& params, double t) {
  switch (ast.kind) {
    case ExprAst::Kind::constant:
      return ast.value;
    case ExprAst::Kind::parameter: {
      if (ast.name == "m") return params.mass;
      if (ast.name == "e") return params.charge;
      if (ast.name == "c") return params.light_speed;
      if (ast.name == "hbar") return params.hbar_signed;
      if (ast.name == "t") return t;
      throw CompileError("identifier '" + ast.name + "' is not usable in a potential");
    }
    case ExprAst::Kind::symbol:
      if (ast.name == "p") throw CompileError("potentials must be functions of x alone");
      return x;
    case ExprAst::Kind::call: {
      const double v = evaluate_at(*ast.children[0], x, params, t);
      if (ast.name == "sin") return std::sin(v);
      if (ast.name == "cos") return std::cos(v);
      if (ast.name == "exp") return std::exp(v);
      if (ast.name == "sqr") return v * v;
      throw CompileError("unknown function '" + ast.name + "'");
    }
    case ExprAst::Kind::negate:
      return -evaluate_at(*ast.children[0], x, params, t);
    case ExprAst::Kind::power: {
      const double base = evaluate_at(*ast.children[0], x, params, t);
      double acc = 1.0;
      for (int i = 0; i < ast.exponent; ++i) acc *= base;
      return acc;
    }
    case ExprAst::Kind::binary: {
      const double lhs = evaluate_at(*ast.children[0], x, params, t);
      const double rhs = evaluate_at(*ast.children[1], x, params, t);
      switch (ast.op) {
        case '+':
          return lhs + rhs;
        case '-':
          return lhs - rhs;
        case '*':
          return lhs * rhs;
        case '/':
          if (rhs == 0.0) throw CompileError("division by zero in potential");
          return lhs / rhs;
      }
      throw CompileError("unknown binary operator");
    }
  }
  throw CompileError("unknown AST node");
}

}  // namespace hbarsign
