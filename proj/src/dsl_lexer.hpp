#pragma once

#include "hcm/dsl.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace hcm::detail {

enum class Tok {
  Ident, Int, LBrace, RBrace, LParen, RParen, LBracket, RBracket,
  Comma, Colon, Semi, Assign, NotEq, Arrow, LeftArrow, Amp, Pipe, Bang, Slash, End,
};

std::string_view describe(Tok t);

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

// Whole input at once; throws DslError(LexError).
std::vector<Token> lex(std::string_view text);

bool is_keyword(std::string_view word);

}  // namespace hcm::detail
