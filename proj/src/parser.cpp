// Recursive-descent parser for the ASCII formula syntax.
//
//   iff     := implies ('<->' implies)*
//   implies := or ('->' implies)?
//   or      := and ('|' and)*
//   and     := unary ('&' unary)*
//   unary   := '!' unary | MOD '[' id ']' unary | 'B' '[' id ';' id ']' unary | primary
//   primary := atom | 'true' | 'false' | '(' iff ')'

#include <cctype>
#include <string>
#include <vector>

#include "namelogic/error.hpp"
#include "namelogic/formula.hpp"

namespace namelogic {
namespace {

enum class Tok { Ident, Bang, Amp, Bar, Arrow, DoubleArrow, LParen, RParen, LBracket, RBracket,
                 Semicolon, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    const std::size_t l = line, col = column;
    auto push = [&](Tok kind, std::size_t n) {
      tokens.push_back({kind, std::string(text.substr(i, n)), l, col});
      advance(n);
    };
    if (ident_start(c) || std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t n = 1;
      while (i + n < text.size() && ident_char(text[i + n])) ++n;
      push(Tok::Ident, n);
    } else if (text.substr(i, 3) == "<->") {
      push(Tok::DoubleArrow, 3);
    } else if (text.substr(i, 2) == "->") {
      push(Tok::Arrow, 2);
    } else {
      switch (c) {
        case '!': push(Tok::Bang, 1); break;
        case '&': push(Tok::Amp, 1); break;
        case '|': push(Tok::Bar, 1); break;
        case '(': push(Tok::LParen, 1); break;
        case ')': push(Tok::RParen, 1); break;
        case '[': push(Tok::LBracket, 1); break;
        case ']': push(Tok::RBracket, 1); break;
        case ';': push(Tok::Semicolon, 1); break;
        default: {
          // Report the whole UTF-8 sequence rather than a lone lead byte.
          std::size_t n = 1;
          while (i + n < text.size() && (static_cast<unsigned char>(text[i + n]) & 0xC0) == 0x80)
            ++n;
          throw ParseError("unknown token '" + std::string(text.substr(i, n)) + "'", l, col);
        }
      }
    }
  }
  tokens.push_back({Tok::End, "", line, column});
  return tokens;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Formula parse() {
    Formula f = parse_iff();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  [[noreturn]] void fail(const std::string& message) const {
    const Token& t = peek();
    throw ParseError(t.kind == Tok::End ? message + " at end of input" : message, t.line,
                     t.column);
  }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what);
    ++pos_;
  }

  std::string expect_identifier(const char* what) {
    if (peek().kind != Tok::Ident) fail(std::string("expected ") + what);
    return next().text;
  }

  Formula parse_iff() {
    Formula f = parse_implies();
    while (peek().kind == Tok::DoubleArrow) {
      ++pos_;
      f = equivalence(f, parse_implies());
    }
    return f;
  }

  Formula parse_implies() {
    Formula f = parse_or();
    if (peek().kind == Tok::Arrow) {
      ++pos_;
      return implication(f, parse_implies());
    }
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (peek().kind == Tok::Bar) {
      ++pos_;
      f = disjunction(f, parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (peek().kind == Tok::Amp) {
      ++pos_;
      f = conjunction(f, parse_unary());
    }
    return f;
  }

  Formula parse_unary() {
    const Token& t = peek();
    if (t.kind == Tok::Bang) {
      ++pos_;
      return negation(parse_unary());
    }
    if (t.kind == Tok::Ident && tokens_[pos_ + 1].kind == Tok::LBracket) {
      const std::string letter = t.text;
      if (letter == "B") {
        pos_ += 2;
        std::string agent = expect_identifier("agent");
        expect(Tok::Semicolon, "';'");
        std::string name = expect_identifier("name");
        expect(Tok::RBracket, "']'");
        return believes(std::move(agent), std::move(name), parse_unary());
      }
      Op op;
      if (letter == "E") op = Op::Everyone;
      else if (letter == "S") op = Op::Someone;
      else if (letter == "C") op = Op::Common;
      else if (letter == "D") op = Op::Distributed;
      else fail("unknown modality '" + letter + "'");
      pos_ += 2;
      std::string name = expect_identifier("name");
      expect(Tok::RBracket, "']'");
      Formula body = parse_unary();
      return Formula::make(op, std::move(name), "", &body, nullptr);
    }
    return parse_primary();
  }

  Formula parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::LParen: {
        ++pos_;
        Formula f = parse_iff();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Ident: {
        if (t.text == "true") {
          ++pos_;
          return verum();
        }
        if (t.text == "false") {
          ++pos_;
          return falsum();
        }
        if (!std::islower(static_cast<unsigned char>(t.text[0])))
          fail("atoms must be lowercase identifiers, got '" + t.text + "'");
        ++pos_;
        return atom(t.text);
      }
      case Tok::End:
        fail("expected formula");
      default:
        fail("unexpected '" + t.text + "'");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(tokenize(text)).parse(); }

}  // namespace namelogic
