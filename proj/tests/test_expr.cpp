#include <doctest.h>

#include "hbarsign/expr.hpp"

#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace {

using hbarsign::AstPtr;
using hbarsign::Complex;
using hbarsign::ComplexMatrix;
using hbarsign::CompileError;
using hbarsign::ExprAst;
using hbarsign::Grid;
using hbarsign::HamiltonianSpec;
using hbarsign::ParseError;
using hbarsign::Token;
using hbarsign::TokenKind;

HamiltonianSpec natural_units(double hbar_signed = 1.0) {
  HamiltonianSpec spec;
  spec.hbar_signed = hbar_signed;
  return spec;
}

AstPtr node(ExprAst ast) { return std::make_shared<const ExprAst>(std::move(ast)); }

AstPtr constant(double v) {
  ExprAst ast;
  ast.kind = ExprAst::Kind::constant;
  ast.value = v;
  return node(std::move(ast));
}

AstPtr named(ExprAst::Kind kind, std::string name, std::vector<AstPtr> children = {}) {
  ExprAst ast;
  ast.kind = kind;
  ast.name = std::move(name);
  ast.children = std::move(children);
  return node(std::move(ast));
}

AstPtr binary(char op, AstPtr lhs, AstPtr rhs) {
  ExprAst ast;
  ast.kind = ExprAst::Kind::binary;
  ast.op = op;
  ast.children = {std::move(lhs), std::move(rhs)};
  return node(std::move(ast));
}

AstPtr random_ast(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 6);
  switch (pick(rng)) {
    case 0:
      return constant(std::uniform_real_distribution<double>(0.1, 9.0)(rng));
    case 1:
      return named(ExprAst::Kind::symbol, (rng() % 2) ? "x" : "p");
    case 2: {
      static const char* params[] = {"m", "e", "c", "hbar", "t"};
      return named(ExprAst::Kind::parameter, params[rng() % 5]);
    }
    case 3: {
      static const char* fns[] = {"sin", "cos", "exp", "sqr"};
      return named(ExprAst::Kind::call, fns[rng() % 4], {random_ast(rng, depth - 1)});
    }
    case 4: {
      ExprAst ast;
      ast.kind = ExprAst::Kind::negate;
      ast.children = {random_ast(rng, depth - 1)};
      return node(std::move(ast));
    }
    case 5: {
      ExprAst ast;
      ast.kind = ExprAst::Kind::power;
      ast.exponent = static_cast<int>(rng() % 4);
      ast.children = {random_ast(rng, depth - 1)};
      return node(std::move(ast));
    }
    default: {
      static const char ops[] = {'+', '-', '*', '/'};
      return binary(ops[rng() % 4], random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    }
  }
}

}  // namespace

TEST_CASE("tokenizer splits operators, numbers, and names") {
  const std::vector<Token> tokens = hbarsign::tokenize("p^2/(2*m)");
  const std::vector<TokenKind> kinds = {
      TokenKind::identifier, TokenKind::op,     TokenKind::number, TokenKind::op,
      TokenKind::lparen,     TokenKind::number, TokenKind::op,     TokenKind::identifier,
      TokenKind::rparen,     TokenKind::end};
  REQUIRE(tokens.size() == kinds.size());
  for (size_t k = 0; k < kinds.size(); ++k) CHECK(tokens[k].kind == kinds[k]);
  CHECK(tokens[0].lexeme == "p");
  CHECK(tokens[0].column == 1);
  CHECK(tokens[4].column == 5);
  CHECK(tokens[7].lexeme == "m");

  CHECK(hbarsign::tokenize("").size() == 1);
  CHECK(hbarsign::tokenize("").front().kind == TokenKind::end);
  CHECK(hbarsign::tokenize("  \t x ").size() == 2);
}

TEST_CASE("tokenizer accepts the usual number spellings") {
  for (const char* text : {"0.5", ".5", "2.", "1e-3", "2.5E+4", "7"}) {
    const std::vector<Token> tokens = hbarsign::tokenize(text);
    REQUIRE(tokens.size() == 2);
    CHECK(tokens[0].kind == TokenKind::number);
    CHECK(tokens[0].lexeme == text);
  }
}

TEST_CASE("tokenizer reports illegal characters with their column") {
  try {
    hbarsign::tokenize("p @ x");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.column() == 3);
    CHECK(std::string(e.what()).find("illegal character '@'") != std::string::npos);
  }
}

TEST_CASE("parser follows the stated precedence") {
  // a - b - c associates left.
  const AstPtr left = hbarsign::parse_expression("x - p - m");
  CHECK(hbarsign::ast_equal(
      *left, *binary('-', binary('-', named(ExprAst::Kind::symbol, "x"),
                                 named(ExprAst::Kind::symbol, "p")),
                     named(ExprAst::Kind::parameter, "m"))));

  // '*' binds tighter than '+', '^' tighter than unary minus.
  CHECK(hbarsign::ast_equal(*hbarsign::parse_expression("x + p*m"),
                            *binary('+', named(ExprAst::Kind::symbol, "x"),
                                    binary('*', named(ExprAst::Kind::symbol, "p"),
                                           named(ExprAst::Kind::parameter, "m")))));

  ExprAst power;
  power.kind = ExprAst::Kind::power;
  power.exponent = 2;
  power.children = {named(ExprAst::Kind::symbol, "x")};
  ExprAst negated;
  negated.kind = ExprAst::Kind::negate;
  negated.children = {node(std::move(power))};
  CHECK(hbarsign::ast_equal(*hbarsign::parse_expression("-x^2"), negated));

  CHECK(hbarsign::ast_equal(*hbarsign::parse_expression("exp(-x^2/2)"),
                            *hbarsign::parse_expression("exp((-(x^2))/2)")));
}

TEST_CASE("parser rejects malformed input") {
  CHECK_THROWS_AS(hbarsign::parse_expression("p +"), ParseError);
  CHECK_THROWS_AS(hbarsign::parse_expression("(x"), ParseError);
  CHECK_THROWS_AS(hbarsign::parse_expression("x 2"), ParseError);
  CHECK_THROWS_AS(hbarsign::parse_expression("x ^ p"), ParseError);
  CHECK_THROWS_AS(hbarsign::parse_expression("x ^ (2)"), ParseError);
  CHECK_THROWS_AS(hbarsign::parse_expression("x ^ -2"), ParseError);
  CHECK_THROWS_AS(hbarsign::parse_expression("x ^ 2.5"), ParseError);
  CHECK_THROWS_AS(hbarsign::parse_expression(""), ParseError);
  CHECK_THROWS_AS(hbarsign::parse_expression("sin()"), ParseError);
  CHECK_THROWS_AS(hbarsign::parse_expression("*x"), ParseError);

  try {
    hbarsign::parse_expression("p +");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("unexpected end of expression") != std::string::npos);
  }
}

TEST_CASE("rendering round-trips through the parser") {
  for (const char* text :
       {"p^2/(2*m)", "x*p - p*x", "exp(-x^2/2)", "-x", "x^0", "sin(x)*cos(x)",
        "e*Phi + A*p/(m*c)", "2.5e-3*x^3", "hbar*t", "sqr(x)/(1 + x^2)"}) {
    const AstPtr first = hbarsign::parse_expression(text);
    const AstPtr second = hbarsign::parse_expression(hbarsign::to_text(*first));
    CHECK(hbarsign::ast_equal(*first, *second));
  }

  std::mt19937_64 rng(20240805);
  for (int trial = 0; trial < 200; ++trial) {
    const AstPtr ast = random_ast(rng, 4);
    const AstPtr reparsed = hbarsign::parse_expression(hbarsign::to_text(*ast));
    CHECK(hbarsign::ast_equal(*ast, *reparsed));
  }
}

TEST_CASE("ast_equal distinguishes structure") {
  CHECK(!hbarsign::ast_equal(*hbarsign::parse_expression("x*p"),
                             *hbarsign::parse_expression("p*x")));
  CHECK(!hbarsign::ast_equal(*hbarsign::parse_expression("x"),
                             *hbarsign::parse_expression("p")));
  CHECK(hbarsign::ast_equal(*hbarsign::parse_expression("x + (p)"),
                            *hbarsign::parse_expression("x + p")));
}

TEST_CASE("is_position_only") {
  CHECK(hbarsign::is_position_only(*hbarsign::parse_expression("exp(-x^2/2)*m")));
  CHECK(!hbarsign::is_position_only(*hbarsign::parse_expression("x + p")));
  CHECK(!hbarsign::is_position_only(*hbarsign::parse_expression("sin(p)")));
}

TEST_CASE("compiled kinetic term matches the momentum operator") {
  const Grid grid(64, 20.0);
  const HamiltonianSpec params = natural_units();
  const ComplexMatrix p = hbarsign::build_momentum(grid, 1.0).mat;

  const ComplexMatrix kinetic = hbarsign::compile("p^2/(2*m)", grid, params).op.mat;
  CHECK(hbarsign::max_abs(kinetic - (p * p) / 2.0) < 1e-12);

  // And with the full electromagnetic assembly at A = Phi = 0.
  const ComplexMatrix h_free = hbarsign::build_hamiltonian(grid, params, 0.0).mat;
  CHECK(hbarsign::max_abs(kinetic - h_free) < 1e-9);
}

TEST_CASE("compilation is additive and multiplicative in source order") {
  const Grid grid(32, 16.0);
  const HamiltonianSpec params = natural_units();

  for (const auto& [a, b] : std::vector<std::pair<std::string, std::string>>{
           {"x*p", "p^2 + x"}, {"sin(x)", "p"}, {"m*x^2", "exp(-x^2/9)"}}) {
    const ComplexMatrix ma = hbarsign::compile(a, grid, params).op.mat;
    const ComplexMatrix mb = hbarsign::compile(b, grid, params).op.mat;
    const ComplexMatrix sum = hbarsign::compile(a + " + " + b, grid, params).op.mat;
    const ComplexMatrix prod = hbarsign::compile("(" + a + ")*(" + b + ")", grid, params).op.mat;
    CHECK(hbarsign::max_abs(sum - (ma + mb)) < 1e-12);
    CHECK(hbarsign::max_abs(prod - ma * mb) < 1e-12);
  }

  // Operator products do not commute and the compiler must not pretend so.
  const ComplexMatrix xp = hbarsign::compile("x*p", grid, params).op.mat;
  const ComplexMatrix px = hbarsign::compile("p*x", grid, params).op.mat;
  CHECK(hbarsign::max_abs(xp - px) > 0.5);

  const ComplexMatrix comm = hbarsign::compile("x*p - p*x", grid, params).op.mat;
  const ComplexMatrix x = hbarsign::build_position(grid).mat;
  const ComplexMatrix p = hbarsign::build_momentum(grid, 1.0).mat;
  CHECK(hbarsign::max_abs(comm - (x * p - p * x)) < 1e-12);
}

TEST_CASE("position-only expressions compile to the pointwise diagonal") {
  const Grid grid(64, 20.0);
  const ComplexMatrix m = hbarsign::compile("exp(-x^2/2)", grid, natural_units()).op.mat;
  for (Eigen::Index j = 0; j < grid.n; ++j) {
    const double x = grid.point(j);
    CHECK(std::abs(m(j, j) - std::exp(-x * x / 2.0)) < 1e-15);
  }
  ComplexMatrix off = m;
  off.diagonal().setZero();
  CHECK(hbarsign::max_abs(off) == 0.0);
}

TEST_CASE("parameters and time enter as scalars") {
  const Grid grid(16, 8.0);
  HamiltonianSpec params = natural_units();
  params.mass = 2.0;
  params.charge = -1.5;
  params.light_speed = 3.0;

  const ComplexMatrix m = hbarsign::compile("m*e/c + t^2", grid, params, 2.0).op.mat;
  const Complex expected(2.0 * -1.5 / 3.0 + 4.0, 0.0);
  CHECK(hbarsign::max_abs(m - expected * ComplexMatrix::Identity(16, 16)) < 1e-15);

  params.scalar_potential = [](double x, double t) { return x * t; };
  const ComplexMatrix phi = hbarsign::compile("Phi", grid, params, 0.5).op.mat;
  CHECK(std::abs(phi(3, 3) - Complex(grid.point(3) * 0.5, 0.0)) < 1e-15);
}

TEST_CASE("flipping the sign of hbar conjugates every compiled operator") {
  const Grid grid(32, 16.0);
  HamiltonianSpec forward = natural_units(1.0);
  HamiltonianSpec mirrored = natural_units(-1.0);
  forward.scalar_potential = [](double x, double) { return 0.5 * x * x; };
  mirrored.scalar_potential = forward.scalar_potential;
  forward.vector_potential = [](double x, double) { return 0.25 * std::sin(x); };
  mirrored.vector_potential = forward.vector_potential;

  for (const char* text :
       {"p^2/(2*m)", "x*p - p*x", "exp(-x^2/8)*p", "p*sin(x) + sin(x)*p",
        "x^3 - p^2/(2*m)", "e*Phi + (A*p + p*A)/(2*m*c)", "p^2/(1 + x^2)"}) {
    const ComplexMatrix plus = hbarsign::compile(text, grid, forward).op.mat;
    const ComplexMatrix minus = hbarsign::compile(text, grid, mirrored).op.mat;
    CHECK(hbarsign::max_abs(minus - plus.conjugate()) < 1e-12);
  }

  // hbar itself is sign-aware by design, so expressions that mention it are
  // deliberately outside the covariance guarantee.
  const ComplexMatrix plus = hbarsign::compile("hbar*x", grid, forward).op.mat;
  const ComplexMatrix minus = hbarsign::compile("hbar*x", grid, mirrored).op.mat;
  CHECK(hbarsign::max_abs(minus - plus.conjugate()) > 0.5);
}

TEST_CASE("compile rejects what the operator model cannot express") {
  const Grid grid(16, 8.0);
  const HamiltonianSpec params = natural_units();

  CHECK_THROWS_AS(hbarsign::compile("sin(p)", grid, params), CompileError);
  CHECK_THROWS_AS(hbarsign::compile("1/p", grid, params), CompileError);
  CHECK_THROWS_AS(hbarsign::compile("x/p", grid, params), CompileError);
  CHECK_THROWS_AS(hbarsign::compile("1/x", grid, params), CompileError);  // x = 0 on the grid
  CHECK_THROWS_AS(hbarsign::compile("1/0", grid, params), CompileError);
  CHECK_THROWS_AS(hbarsign::compile("foo(x)", grid, params), CompileError);
  CHECK_THROWS_AS(hbarsign::compile("y + 1", grid, params), CompileError);

  CHECK_NOTHROW(hbarsign::compile("p/2", grid, params));
  CHECK_NOTHROW(hbarsign::compile("x/(1 + x^2)", grid, params));
  CHECK_NOTHROW(hbarsign::compile("x^0", grid, params));
}

TEST_CASE("evaluate_at matches compile on position-only expressions") {
  const Grid grid(16, 8.0);
  HamiltonianSpec params = natural_units();
  params.mass = 2.0;

  const AstPtr ast = hbarsign::parse_expression("sin(x)*m + c/(1 + sqr(x))");
  const ComplexMatrix compiled = hbarsign::compile(*ast, grid, params).op.mat;
  for (Eigen::Index j = 0; j < grid.n; ++j) {
    const double direct = hbarsign::evaluate_at(*ast, grid.point(j), params);
    CHECK(std::abs(compiled(j, j) - Complex(direct, 0.0)) < 1e-15);
  }

  CHECK_THROWS_AS(hbarsign::evaluate_at(*hbarsign::parse_expression("p + x"), 0.0, params),
                  CompileError);
  CHECK_THROWS_AS(hbarsign::evaluate_at(*hbarsign::parse_expression("Phi"), 0.0, params),
                  CompileError);
}
