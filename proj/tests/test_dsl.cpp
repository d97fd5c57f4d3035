#include <doctest.h>

#include <random>

#include "rb/term.hpp"

using namespace rb;

namespace {

Term var(const char* n) { return Term::variable(n); }
Term ap(Op op, Term l, Term r) { return Term::apply(op, std::move(l), std::move(r)); }

Term random_term(std::mt19937& rng, int depth) {
  static const char* names[] = {"x", "y", "z", "u", "w", "ab"};
  std::uniform_int_distribution<int> coin(0, 3);
  if (depth == 0 || coin(rng) == 0) return var(names[std::uniform_int_distribution<int>(0, 5)(rng)]);
  const Op op = kAllOps[std::uniform_int_distribution<int>(0, 4)(rng)];
  return ap(op, random_term(rng, depth - 1), random_term(rng, depth - 1));
}

}  // namespace

TEST_CASE("parse_term builds the expected trees") {
  CHECK(parse_term("x * (y ^ z)") == ap(Op::Mult, var("x"), ap(Op::Meet, var("y"), var("z"))));
  CHECK(parse_term("x") == var("x"));
  CHECK(parse_term("x \\ (y v z)") == ap(Op::LRes, var("x"), ap(Op::Join, var("y"), var("z"))));
  CHECK(parse_term("(x / z)") == ap(Op::RRes, var("x"), var("z")));
}

TEST_CASE("same-operator chains associate to the left") {
  CHECK(parse_term("x ^ y ^ z") == ap(Op::Meet, ap(Op::Meet, var("x"), var("y")), var("z")));
}

TEST_CASE("mixed unparenthesized operators are rejected") {
  CHECK_THROWS_AS(parse_term("x ^ y v z"), SyntaxError);
  try {
    parse_term("x ^ y v z");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 6);
  }
  CHECK_THROWS_AS(parse_term("x * y / z"), SyntaxError);
}

TEST_CASE("malformed terms report a position") {
  CHECK_THROWS_AS(parse_term(""), SyntaxError);
  CHECK_THROWS_AS(parse_term("(x ^ y"), SyntaxError);
  CHECK_THROWS_AS(parse_term("x ^"), SyntaxError);
  CHECK_THROWS_AS(parse_term("x y"), SyntaxError);
  CHECK_THROWS_AS(parse_term("x + y"), SyntaxError);
  try {
    parse_term("(x ^ y");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 6);
    CHECK(e.expected() == "')'");
  }
}

TEST_CASE("parse_identity") {
  const Identity d1 = parse_identity("x * (y ^ z) = (x * y) ^ (x * z)", "D1");
  CHECK(d1 == builtin_identity("D1"));
  const Identity trivial = parse_identity("x = x");
  CHECK(trivial.lhs == trivial.rhs);
  CHECK(parse_identity("x ^ (y v z) = (x ^ y) v (x ^ z)", "LD") == builtin_identity("LD"));
  CHECK_THROWS_AS(parse_identity("x ^ y"), SyntaxError);
  CHECK_THROWS_AS(parse_identity("x = y = z"), SyntaxError);
  try {
    parse_identity("x = (y");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 6);
  }
}

TEST_CASE("builtin catalogue matches the distributivity identities") {
  CHECK(format_identity(builtin_identity("D5")) == "((x ^ y) \\ z) = ((x \\ z) v (y \\ z))");
  CHECK(format_identity(builtin_identity("D6")) == "(x / (y ^ z)) = ((x / y) v (x / z))");
  CHECK(builtin_identity("D5") == parse_identity("(x ^ y) \\ z = (x \\ z) v (y \\ z)", "D5"));
  CHECK(builtin_identity("D2") == parse_identity("(x ^ y) * z = (x * z) ^ (y * z)", "D2"));
  CHECK(builtin_identity("D3") == parse_identity("x \\ (y v z) = (x \\ y) v (x \\ z)", "D3"));
  CHECK(builtin_identity("D4") == parse_identity("(x v y) / z = (x / z) v (y / z)", "D4"));
  CHECK_THROWS_AS(builtin_identity("Q7"), UnknownName);
  CHECK_THROWS_AS(builtin("RES"), UnknownName);
  CHECK(builtin("LATTICE").size() == 8);
  CHECK(lattice_axioms().size() == 8);

  for (const auto& name : distributivity_names()) {
    const Identity id = builtin_identity(name);
    CHECK(id.variables() == std::vector<std::string>{"x", "y", "z"});
    CHECK(id.lhs.depth() == 2);
    CHECK(id.rhs.depth() == 2);
  }
}

TEST_CASE("format_term is fully parenthesized") {
  CHECK(format_term(builtin_identity("D1").lhs) == "(x * (y ^ z))");
  CHECK(format_term(var("x")) == "x");
  CHECK(format_term(builtin_identity("LD").rhs) == "((x ^ y) v (x ^ z))");
}

TEST_CASE("parse(format(t)) == t for generated terms") {
  std::mt19937 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const Term t = random_term(rng, 5);
    CHECK(parse_term(format_term(t)) == t);
  }
}

TEST_CASE("axiom files") {
  const auto ids = parse_axiom_file(
      "# distributivity\n"
      "D1: x * (y ^ z) = (x * y) ^ (x * z)\n"
      "\n"
      "x = x   # trivial\n"
      "LD: x ^ (y v z) = (x ^ y) v (x ^ z)");
  REQUIRE(ids.size() == 3);
  CHECK(ids[0] == builtin_identity("D1"));
  CHECK(ids[1].name == "eq1");
  CHECK(ids[2] == builtin_identity("LD"));
  CHECK_THROWS_AS(parse_axiom_file("A: x ^ y v z = x"), SyntaxError);
  try {
    parse_axiom_file("ok: x = x\nA: x ^ y v z = x");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 10 + 9);  // line 2 starts at 10; 'v' is 9 bytes into it
  }
}
