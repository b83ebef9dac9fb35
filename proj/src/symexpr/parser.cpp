#include "imcheck/symexpr/parser.hpp"

#include <cctype>

#include "imcheck/symexpr/expr.hpp"

namespace imcheck::sym {

namespace {

bool ascii_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ascii_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Non-ASCII code points that act as operators rather than identifier bytes.
struct Alias {
  std::string_view bytes;
  Token::Kind kind;
};
constexpr Alias kAliases[] = {
    {"\xC2\xB7", Token::Kind::Star},       // ·
    {"\xE2\x88\x92", Token::Kind::Minus},  // −
    {"\xE2\x88\xA7", Token::Kind::Caret},  // ∧
};

const Alias* match_alias(std::string_view rest) {
  for (const auto& a : kAliases)
    if (rest.starts_with(a.bytes)) return &a;
  return nullptr;
}

std::size_t utf8_length(unsigned char lead) {
  if (lead >= 0xF0) return 4;
  if (lead >= 0xE0) return 3;
  if (lead >= 0xC0) return 2;
  return 1;
}

struct ExprSemantics {
  using Value = Expr;

  Value number(const std::string& text, std::size_t at) {
    try {
      return Expr(Rational::from_decimal(text));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), at);
    } catch (const std::overflow_error& e) {
      throw ParseError(e.what(), at);
    }
  }
  Value identifier(const std::string& name, std::size_t) { return Expr::variable(name); }
  Value call(const std::string& name, Value arg, std::size_t at) {
    if (auto v = call_by_name(name, arg)) return *v;
    throw ParseError("unknown function '" + name + "'", at);
  }
  Value add(Value a, Value b, std::size_t) { return a + b; }
  Value sub(Value a, Value b, std::size_t) { return a - b; }
  Value mul(Value a, Value b, std::size_t) { return a * b; }
  Value div(Value a, Value b, std::size_t) { return a / b; }
  Value neg(Value a, std::size_t) { return -a; }
  Value pow(Value base, Value exponent, std::size_t at) {
    if (!exponent.is_constant()) throw ParseError("exponent must be a rational constant", at);
    return base.pow(exponent.constant_value());
  }
};

}  // namespace

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    auto single = [&](Token::Kind k) {
      out.push_back({k, std::string(1, c), start});
      ++i;
    };
    switch (c) {
      case '+':
        single(Token::Kind::Plus);
        continue;
      case '-':
        single(Token::Kind::Minus);
        continue;
      case '*':
        single(Token::Kind::Star);
        continue;
      case '/':
        single(Token::Kind::Slash);
        continue;
      case '^':
        single(Token::Kind::Caret);
        continue;
      case '(':
        single(Token::Kind::LParen);
        continue;
      case ')':
        single(Token::Kind::RParen);
        continue;
      default:
        break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) ++i;
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
          i = j;
          while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        }
      }
      out.push_back({Token::Kind::Number, std::string(s.substr(start, i - start)), start});
      continue;
    }
    if (const Alias* a = match_alias(s.substr(i))) {
      out.push_back({a->kind, std::string(a->bytes), start});
      i += a->bytes.size();
      continue;
    }
    auto unsigned_c = static_cast<unsigned char>(c);
    if (ascii_ident_start(c) || unsigned_c >= 0x80) {
      while (i < s.size()) {
        auto u = static_cast<unsigned char>(s[i]);
        if (u >= 0x80) {
          if (match_alias(s.substr(i))) break;
          i += utf8_length(u);
        } else if (ascii_ident_char(s[i])) {
          ++i;
        } else {
          break;
        }
      }
      if (i > s.size()) throw ParseError("truncated UTF-8 sequence", start);
      out.push_back({Token::Kind::Identifier, std::string(s.substr(start, i - start)), start});
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", start);
  }
  out.push_back({Token::Kind::End, "", s.size()});
  return out;
}

std::optional<Expr> call_by_name(std::string_view name, const Expr& arg) {
  if (name == "sin") return Expr::call(Function::Sin, arg);
  if (name == "cos") return Expr::call(Function::Cos, arg);
  if (name == "exp") return Expr::call(Function::Exp, arg);
  if (name == "log") return Expr::call(Function::Log, arg);
  if (name == "sqrt") return arg.pow(Rational(1, 2));
  return std::nullopt;
}

Expr parse(std::string_view source) {
  ExprSemantics sem;
  Parser<ExprSemantics> parser(source, sem);
  return parser.parse();
}

}  // namespace imcheck::sym
