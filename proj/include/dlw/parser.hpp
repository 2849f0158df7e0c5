/// Recursive-descent parsing for formulas and .dlt theory files.
///
/// Formula grammar, loosest first:  <->  ->  |  &  ~  primary,
/// with '->' right-associative and '<->' left-associative.
///
/// .dlt grammar: '#' starts a comment; an optional first line "#generated"
/// permits reserved "__" atoms; "W: <formula>." declares the background
/// (at most once, default true); "<name>: <prec?> : <just?> / <cons>."
/// declares a default, empty fields meaning true.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <dlw/theory.hpp>

namespace dlw {

namespace detail {

enum class Tok {
  Ident, True, False, Not, And, Or, Implies, Iff,
  LParen, RParen, Colon, Slash, Dot, End
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  std::vector<Token> tokenize() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      int line = line_, col = col_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", line, col});
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string word;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '_'))
          word += advance();
        Tok k = word == "true" ? Tok::True
                : word == "false" ? Tok::False
                                  : Tok::Ident;
        out.push_back({k, std::move(word), line, col});
        continue;
      }
      switch (c) {
        case '~': advance(); out.push_back({Tok::Not, "~", line, col}); break;
        case '&': advance(); out.push_back({Tok::And, "&", line, col}); break;
        case '|': advance(); out.push_back({Tok::Or, "|", line, col}); break;
        case '(': advance(); out.push_back({Tok::LParen, "(", line, col}); break;
        case ')': advance(); out.push_back({Tok::RParen, ")", line, col}); break;
        case ':': advance(); out.push_back({Tok::Colon, ":", line, col}); break;
        case '/': advance(); out.push_back({Tok::Slash, "/", line, col}); break;
        case '.': advance(); out.push_back({Tok::Dot, ".", line, col}); break;
        case '-':
          advance();
          if (pos_ < src_.size() && src_[pos_] == '>') {
            advance();
            out.push_back({Tok::Implies, "->", line, col});
            break;
          }
          throw ParseError("expected '->'", line, col);
        case '<':
          advance();
          if (pos_ + 1 < src_.size() && src_[pos_] == '-' &&
              src_[pos_ + 1] == '>') {
            advance();
            advance();
            out.push_back({Tok::Iff, "<->", line, col});
            break;
          }
          throw ParseError("expected '<->'", line, col);
        default:
          throw ParseError(std::string("unexpected character '") + c + "'",
                           line, col);
      }
    }
  }

 private:
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class FormulaParser {
 public:
  FormulaParser(const std::vector<Token>& toks, std::size_t& pos)
      : toks_(toks), pos_(pos) {}

  Formula parse() { return parse_iff(); }

  const Token& peek() const { return toks_[pos_]; }

 private:
  const Token& next() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw ParseError(msg + (t.kind == Tok::End
                                ? " at end of input"
                                : " near '" + t.text + "'"),
                     t.line, t.column);
  }

  Formula parse_iff() {
    Formula f = parse_implies();
    while (peek().kind == Tok::Iff) {
      next();
      f = Formula::iff(f, parse_implies());
    }
    return f;
  }

  Formula parse_implies() {
    Formula f = parse_or();
    if (peek().kind == Tok::Implies) {
      next();
      return Formula::implies(f, parse_implies());
    }
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (peek().kind == Tok::Or) {
      next();
      f = f | parse_and();
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (peek().kind == Tok::And) {
      next();
      f = f & parse_unary();
    }
    return f;
  }

  Formula parse_unary() {
    if (peek().kind == Tok::Not) {
      next();
      return !parse_unary();
    }
    return parse_primary();
  }

  Formula parse_primary() {
    switch (peek().kind) {
      case Tok::True:
        next();
        return Formula::constant(true);
      case Tok::False:
        next();
        return Formula::constant(false);
      case Tok::Ident:
        return Formula::var(Atom(next().text));
      case Tok::LParen: {
        next();
        Formula f = parse_iff();
        if (peek().kind != Tok::RParen) fail("expected ')'");
        next();
        return f;
      }
      default:
        fail("expected a formula");
    }
  }

  const std::vector<Token>& toks_;
  std::size_t& pos_;
};

}  // namespace detail

/// Parses a standalone formula. Reserved atoms are allowed here; queries
/// against generated theories legitimately mention them.
inline Formula parse_formula(const std::string& text) {
  auto toks = detail::Lexer(text).tokenize();
  std::size_t pos = 0;
  detail::FormulaParser p(toks, pos);
  Formula f = p.parse();
  if (toks[pos].kind != detail::Tok::End)
    throw ParseError("trailing input after formula", toks[pos].line,
                     toks[pos].column);
  return f;
}

/// Parses a .dlt document. Unless the document opens with "#generated",
/// atoms with the reserved "__" prefix are rejected.
inline DefaultTheory parse_theory(const std::string& text) {
  bool generated = false;
  {
    std::size_t eol = text.find('\n');
    std::string first = text.substr(0, eol == std::string::npos ? text.size()
                                                                : eol);
    while (!first.empty() && (first.back() == '\r' || first.back() == ' ' ||
                              first.back() == '\t'))
      first.pop_back();
    generated = first == "#generated";
  }

  auto toks = detail::Lexer(text).tokenize();
  std::size_t pos = 0;

  std::optional<Formula> background;
  std::vector<Default> defaults;

  auto expect = [&](detail::Tok k, const char* what) -> const detail::Token& {
    const detail::Token& t = toks[pos];
    if (t.kind != k)
      throw ParseError(std::string("expected ") + what +
                           (t.kind == detail::Tok::End
                                ? " at end of input"
                                : " near '" + t.text + "'"),
                       t.line, t.column);
    ++pos;
    return t;
  };

  while (toks[pos].kind != detail::Tok::End) {
    const detail::Token& name = expect(detail::Tok::Ident, "a name");
    expect(detail::Tok::Colon, "':'");
    detail::FormulaParser fp(toks, pos);

    if (name.text == "W") {
      if (background)
        throw ParseError("multiple background declarations", name.line,
                         name.column);
      background = fp.parse();
      expect(detail::Tok::Dot, "'.'");
      continue;
    }

    Formula prec = toks[pos].kind == detail::Tok::Colon
                       ? Formula::constant(true)
                       : fp.parse();
    expect(detail::Tok::Colon, "':'");
    Formula just = toks[pos].kind == detail::Tok::Slash
                       ? Formula::constant(true)
                       : fp.parse();
    expect(detail::Tok::Slash, "'/'");
    Formula cons = fp.parse();
    expect(detail::Tok::Dot, "'.'");
    defaults.push_back({name.text, prec, just, cons});
  }

  DefaultTheory theory(background.value_or(Formula::constant(true)),
                       std::move(defaults));
  if (!generated) {
    for (const Atom& a : theory.atoms())
      if (a.reserved())
        throw ValidationError("reserved atom '" + a.name() +
                              "' outside a #generated theory");
  }
  return theory;
}

}  // namespace dlw
