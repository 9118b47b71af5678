#include "dsl_lexer.hpp"

#include "hcm/rational.hpp"

#include <array>
#include <charconv>

namespace hcm::detail {

std::string_view describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Semi: return "';'";
    case Tok::Assign: return "'='";
    case Tok::NotEq: return "'!='";
    case Tok::Arrow: return "'->'";
    case Tok::LeftArrow: return "'<-'";
    case Tok::Amp: return "'&'";
    case Tok::Pipe: return "'|'";
    case Tok::Bang: return "'!'";
    case Tok::Slash: return "'/'";
    case Tok::End: return "end of input";
  }
  return "?";
}

bool is_keyword(std::string_view word) {
  static constexpr std::array<std::string_view, 11> kKeywords = {
      "model", "exo", "var", "outcome", "utility", "default", "context", "case", "when", "else", "version"};
  for (auto k : kKeywords) {
    if (k == word) return true;
  }
  return false;
}

namespace {

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_blank();
      if (pos_ >= text_.size()) {
        out.push_back(Token{Tok::End, "", {line_, col_, 0}});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  void skip_blank() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    const unsigned char c = static_cast<unsigned char>(text_[pos_++]);
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else if ((c & 0xC0) != 0x80) {
      ++col_;
    }
  }

  [[noreturn]] void error(const std::string& message, std::size_t length = 1) const {
    Diagnostic d;
    d.kind = DiagnosticKind::LexError;
    d.message = message;
    d.span = {line_, col_, length};
    d.token = std::string(text_.substr(pos_, length));
    throw DslError(std::move(d));
  }

  Token make(Tok kind, std::size_t length) {
    Token t{kind, std::string(text_.substr(pos_, length)), {line_, col_, length}};
    for (std::size_t i = 0; i < length; ++i) advance();
    return t;
  }

  static bool ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
  static bool digit(char c) { return c >= '0' && c <= '9'; }

  char peek(std::size_t ahead = 1) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  Token number() {
    std::size_t len = text_[pos_] == '-' ? 1 : 0;
    while (pos_ + len < text_.size() && digit(text_[pos_ + len])) ++len;
    if (pos_ + len < text_.size() && ident_start(text_[pos_ + len])) {
      error("malformed number '" + std::string(text_.substr(pos_, len + 1)) + "'", len + 1);
    }
    std::int64_t value = 0;
    const char* first = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, first + len, value);
    if (ec != std::errc{} || ptr != first + len) error("integer literal out of range", len);
    Token t = make(Tok::Int, len);
    t.text = std::to_string(value);
    return t;
  }

  Token next() {
    const char c = text_[pos_];
    if (ident_start(c)) {
      std::size_t len = 1;
      while (pos_ + len < text_.size() && ident_char(text_[pos_ + len])) ++len;
      return make(Tok::Ident, len);
    }
    if (digit(c) || (c == '-' && digit(peek()))) return number();
    switch (c) {
      case '{': return make(Tok::LBrace, 1);
      case '}': return make(Tok::RBrace, 1);
      case '(': return make(Tok::LParen, 1);
      case ')': return make(Tok::RParen, 1);
      case '[': return make(Tok::LBracket, 1);
      case ']': return make(Tok::RBracket, 1);
      case ',': return make(Tok::Comma, 1);
      case ':': return make(Tok::Colon, 1);
      case ';': return make(Tok::Semi, 1);
      case '=': return make(Tok::Assign, 1);
      case '&': return make(Tok::Amp, 1);
      case '|': return make(Tok::Pipe, 1);
      case '/': return make(Tok::Slash, 1);
      case '!': return peek() == '=' ? make(Tok::NotEq, 2) : make(Tok::Bang, 1);
      case '-':
        if (peek() == '>') return make(Tok::Arrow, 2);
        error("unexpected '-'");
      case '<':
        if (peek() == '-') return make(Tok::LeftArrow, 2);
        error("unexpected '<'");
      default: break;
    }
    const unsigned char uc = static_cast<unsigned char>(c);
    if (uc >= 0x80) {
      std::size_t len = 1;
      while (pos_ + len < text_.size() && (static_cast<unsigned char>(text_[pos_ + len]) & 0xC0) == 0x80) ++len;
      error("non-ASCII character outside a comment", len);
    }
    if (uc < 0x20 || uc == 0x7F) error("control character in input");
    error(std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

}  // namespace

std::vector<Token> lex(std::string_view text) { return Lexer(text).run(); }

}  // namespace hcm::detail
