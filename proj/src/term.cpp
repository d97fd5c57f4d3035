#include "rb/term.hpp"

#include <cctype>
#include <sstream>

namespace rb {

std::string_view op_name(Op op) {
  switch (op) {
    case Op::Meet: return "meet";
    case Op::Join: return "join";
    case Op::Mult: return "mult";
    case Op::LRes: return "lres";
    case Op::RRes: return "rres";
  }
  return "?";
}

std::string_view op_symbol(Op op) {
  switch (op) {
    case Op::Meet: return "^";
    case Op::Join: return "v";
    case Op::Mult: return "*";
    case Op::LRes: return "\\";
    case Op::RRes: return "/";
  }
  return "?";
}

std::optional<Op> op_from_name(std::string_view name) {
  for (Op op : kAllOps) {
    if (op_name(op) == name) return op;
  }
  return std::nullopt;
}

Term Term::variable(std::string name) {
  auto node = std::make_shared<Node>();
  node->is_var = true;
  node->name = std::move(name);
  return Term(std::move(node));
}

Term Term::apply(Op op, Term left, Term right) {
  auto node = std::make_shared<Node>();
  node->op = op;
  node->left = std::make_shared<const Term>(std::move(left));
  node->right = std::make_shared<const Term>(std::move(right));
  return Term(std::move(node));
}

std::size_t Term::depth() const {
  if (is_variable()) return 0;
  return 1 + std::max(left().depth(), right().depth());
}

void Term::collect_variables(std::set<std::string>& out) const {
  if (is_variable()) {
    out.insert(name());
    return;
  }
  left().collect_variables(out);
  right().collect_variables(out);
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.is_variable() != b.is_variable()) return false;
  if (a.is_variable()) return a.name() == b.name();
  return a.op() == b.op() && a.left() == b.left() && a.right() == b.right();
}

std::vector<std::string> Identity::variables() const {
  std::set<std::string> vars;
  lhs.collect_variables(vars);
  rhs.collect_variables(vars);
  return {vars.begin(), vars.end()};
}

bool operator==(const Identity& a, const Identity& b) {
  return a.name == b.name && a.lhs == b.lhs && a.rhs == b.rhs;
}

SyntaxError::SyntaxError(std::size_t position, std::string expected)
    : std::runtime_error("syntax error at position " + std::to_string(position) +
                         ": expected " + expected),
      position_(position),
      expected_(std::move(expected)) {}

namespace {

struct Token {
  enum Kind { Ident, OpSym, LParen, RParen, End } kind;
  std::size_t pos;
  std::string text;
  Op op = Op::Meet;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) { advance(); }

  Term parse_all() {
    Term t = parse_expr();
    if (tok_.kind != Token::End) {
      throw SyntaxError(tok_.pos, "end of input");
    }
    return t;
  }

 private:
  void advance() {
    while (at_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[at_]))) ++at_;
    tok_ = Token{Token::End, at_, {}};
    if (at_ >= text_.size()) return;
    const char c = text_[at_];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = at_;
      while (at_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[at_]))) ++at_;
      tok_.text = std::string(text_.substr(start, at_ - start));
      tok_.pos = start;
      if (tok_.text == "v") {
        tok_.kind = Token::OpSym;
        tok_.op = Op::Join;
      } else {
        tok_.kind = Token::Ident;
      }
      return;
    }
    ++at_;
    switch (c) {
      case '(': tok_.kind = Token::LParen; return;
      case ')': tok_.kind = Token::RParen; return;
      case '^': tok_.kind = Token::OpSym; tok_.op = Op::Meet; return;
      case '*': tok_.kind = Token::OpSym; tok_.op = Op::Mult; return;
      case '\\': tok_.kind = Token::OpSym; tok_.op = Op::LRes; return;
      case '/': tok_.kind = Token::OpSym; tok_.op = Op::RRes; return;
      default: throw SyntaxError(at_ - 1, "variable, operator or parenthesis");
    }
  }

  Term parse_expr() {
    Term acc = parse_primary();
    if (tok_.kind != Token::OpSym) return acc;
    const Op chain = tok_.op;
    while (tok_.kind == Token::OpSym) {
      if (tok_.op != chain) {
        throw SyntaxError(tok_.pos, "'" + std::string(op_symbol(chain)) +
                                        "' or ')' (mixed operators need parentheses)");
      }
      advance();
      Term rhs = parse_primary();
      acc = Term::apply(chain, std::move(acc), std::move(rhs));
    }
    return acc;
  }

  Term parse_primary() {
    if (tok_.kind == Token::Ident) {
      Term t = Term::variable(tok_.text);
      advance();
      return t;
    }
    if (tok_.kind == Token::LParen) {
      advance();
      Term t = parse_expr();
      if (tok_.kind != Token::RParen) throw SyntaxError(tok_.pos, "')'");
      advance();
      return t;
    }
    throw SyntaxError(tok_.pos, "variable or '('");
  }

  std::string_view text_;
  std::size_t at_ = 0;
  Token tok_{Token::End, 0, {}};
};

}  // namespace

Term parse_term(std::string_view text) { return Parser(text).parse_all(); }

Identity parse_identity(std::string_view text, std::string name) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw SyntaxError(text.size(), "'='");
  if (text.find('=', eq + 1) != std::string_view::npos) {
    throw SyntaxError(text.find('=', eq + 1), "a single '='");
  }
  Term lhs = parse_term(text.substr(0, eq));
  auto rhs = [&] {
    try {
      return parse_term(text.substr(eq + 1));
    } catch (const SyntaxError& e) {
      throw SyntaxError(eq + 1 + e.position(), e.expected());
    }
  }();
  return Identity{std::move(name), std::move(lhs), std::move(rhs)};
}

std::string format_term(const Term& t) {
  if (t.is_variable()) return t.name();
  std::string out = "(";
  out += format_term(t.left());
  out += ' ';
  out += op_symbol(t.op());
  out += ' ';
  out += format_term(t.right());
  out += ')';
  return out;
}

std::string format_identity(const Identity& id) {
  return format_term(id.lhs) + " = " + format_term(id.rhs);
}

std::vector<Identity> parse_axiom_file(std::string_view text) {
  std::vector<Identity> out;
  std::size_t line_start = 0;
  std::size_t unnamed = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    std::string_view line = text.substr(line_start, line_end - line_start);
    line = line.substr(0, line.find('#'));
    const auto first = line.find_first_not_of(" \t\r");
    if (first != std::string_view::npos) {
      std::string name;
      std::string_view body = line;
      const auto colon = line.find(':');
      if (colon != std::string_view::npos) {
        std::string_view raw = line.substr(0, colon);
        const auto b = raw.find_first_not_of(" \t");
        const auto e = raw.find_last_not_of(" \t");
        if (b == std::string_view::npos) throw SyntaxError(line_start + colon, "identity name");
        name = std::string(raw.substr(b, e - b + 1));
        body = line.substr(colon + 1);
      } else {
        name = "eq" + std::to_string(++unnamed);
      }
      try {
        out.push_back(parse_identity(body, name));
      } catch (const SyntaxError& e) {
        const std::size_t offset = line_start + static_cast<std::size_t>(body.data() - line.data());
        throw SyntaxError(offset + e.position(), e.expected());
      }
    }
    if (line_end == text.size()) break;
    line_start = line_end + 1;
  }
  return out;
}

namespace {

struct BuiltinText {
  const char* name;
  const char* equation;
};

constexpr BuiltinText kBuiltins[] = {
    {"D1", "x * (y ^ z) = (x * y) ^ (x * z)"},
    {"D2", "(x ^ y) * z = (x * z) ^ (y * z)"},
    {"D3", "x \\ (y v z) = (x \\ y) v (x \\ z)"},
    {"D4", "(x v y) / z = (x / z) v (y / z)"},
    {"D5", "(x ^ y) \\ z = (x \\ z) v (y \\ z)"},
    {"D6", "x / (y ^ z) = (x / y) v (x / z)"},
    {"LD", "x ^ (y v z) = (x ^ y) v (x ^ z)"},
};

constexpr BuiltinText kLattice[] = {
    {"meet-commutativity", "x ^ y = y ^ x"},
    {"join-commutativity", "x v y = y v x"},
    {"meet-associativity", "(x ^ y) ^ z = x ^ (y ^ z)"},
    {"join-associativity", "(x v y) v z = x v (y v z)"},
    {"meet-idempotence", "x ^ x = x"},
    {"join-idempotence", "x v x = x"},
    {"meet-absorption", "x ^ (x v y) = x"},
    {"join-absorption", "x v (x ^ y) = x"},
};

}  // namespace

Identity builtin_identity(std::string_view name) {
  for (const auto& b : kBuiltins) {
    if (name == b.name) return parse_identity(b.equation, b.name);
  }
  throw UnknownName(std::string(name));
}

std::vector<Identity> lattice_axioms() {
  std::vector<Identity> out;
  for (const auto& b : kLattice) out.push_back(parse_identity(b.equation, b.name));
  return out;
}

std::vector<Identity> builtin(std::string_view name) {
  if (name == "LATTICE") return lattice_axioms();
  return {builtin_identity(name)};
}

const std::vector<std::string>& distributivity_names() {
  static const std::vector<std::string> names = {"D1", "D2", "D3", "D4", "D5", "D6"};
  return names;
}

}  // namespace rb
