#include "antilinear/expr.hpp"

#include <array>
#include <cctype>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cmath>
#include <numbers>
#include <optional>

namespace antilinear::expr {

namespace {

constexpr std::array<std::pair<std::string_view, Function>, 13> kFunctions{{
    {"sin", Function::sin},   {"cos", Function::cos},   {"tan", Function::tan},   {"sinh", Function::sinh},
    {"cosh", Function::cosh}, {"tanh", Function::tanh}, {"exp", Function::exp},   {"log", Function::log},
    {"sqrt", Function::sqrt}, {"abs", Function::abs},   {"re", Function::re},     {"im", Function::im},
    {"conj", Function::conj},
}};

enum class TokenKind { number, identifier, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
  TokenKind kind;
  std::size_t offset;
  std::string_view text;
  double number = 0.0;
};

std::string_view describe(TokenKind k) {
  switch (k) {
    case TokenKind::number: return "number";
    case TokenKind::identifier: return "identifier";
    case TokenKind::plus: return "'+'";
    case TokenKind::minus: return "'-'";
    case TokenKind::star: return "'*'";
    case TokenKind::slash: return "'/'";
    case TokenKind::caret: return "'^'";
    case TokenKind::lparen: return "'('";
    case TokenKind::rparen: return "')'";
    case TokenKind::end: return "end of input";
  }
  return "token";
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ == src_.size()) return {TokenKind::end, start, {}};
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(start);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      return {TokenKind::identifier, start, src_.substr(start, pos_ - start)};
    }
    ++pos_;
    switch (c) {
      case '+': return {TokenKind::plus, start, src_.substr(start, 1)};
      case '-': return {TokenKind::minus, start, src_.substr(start, 1)};
      case '*': return {TokenKind::star, start, src_.substr(start, 1)};
      case '/': return {TokenKind::slash, start, src_.substr(start, 1)};
      case '^': return {TokenKind::caret, start, src_.substr(start, 1)};
      case '(': return {TokenKind::lparen, start, src_.substr(start, 1)};
      case ')': return {TokenKind::rparen, start, src_.substr(start, 1)};
      default: break;
    }
    throw ParseError(start, "operand or operator", std::string("unexpected character '") + c + "'");
  }

 private:
  Token number(std::size_t start) {
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError(start, "digit", "malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      // Only an exponent if digits follow; otherwise 'e' is left for the lexer (e.g. "2e" is an error later).
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        digits();
      }
    }
    const std::string_view text = src_.substr(start, pos_ - start);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value))
      throw ParseError(start, "finite number", "number literal out of range: " + std::string(text));
    return {TokenKind::number, start, text, value};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

// Binding powers. Unary minus sits between '*' and '^'.
constexpr int kAdditive = 10;
constexpr int kMultiplicative = 20;
constexpr int kUnary = 30;
constexpr int kPower = 40;

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { advance(); }

  NodePtr parse_all() {
    NodePtr root = parse_expr(0);
    if (current_.kind != TokenKind::end)
      throw ParseError(current_.offset, "operator or end of input",
                       "unexpected " + std::string(describe(current_.kind)));
    return root;
  }

 private:
  void advance() { current_ = lexer_.next(); }

  static NodePtr make(auto&& kind) { return std::make_shared<const Node>(Node{std::forward<decltype(kind)>(kind)}); }

  static std::optional<std::pair<int, BinaryOp>> infix(TokenKind k) {
    switch (k) {
      case TokenKind::plus: return std::pair{kAdditive, BinaryOp::add};
      case TokenKind::minus: return std::pair{kAdditive, BinaryOp::sub};
      case TokenKind::star: return std::pair{kMultiplicative, BinaryOp::mul};
      case TokenKind::slash: return std::pair{kMultiplicative, BinaryOp::div};
      case TokenKind::caret: return std::pair{kPower, BinaryOp::pow};
      default: return std::nullopt;
    }
  }

  NodePtr parse_expr(int min_bp) {
    NodePtr lhs = parse_prefix();
    while (auto op = infix(current_.kind)) {
      const auto [bp, which] = *op;
      if (bp <= min_bp) break;
      advance();
      // Right-associative '^' re-enters at one below its own power.
      NodePtr rhs = parse_expr(which == BinaryOp::pow ? bp - 1 : bp);
      lhs = make(Binary{which, std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  NodePtr parse_prefix() {
    const Token tok = current_;
    switch (tok.kind) {
      case TokenKind::number:
        advance();
        return make(Number{tok.number});
      case TokenKind::minus:
        advance();
        return make(Negate{parse_expr(kUnary)});
      case TokenKind::lparen: {
        advance();
        NodePtr inner = parse_expr(0);
        expect(TokenKind::rparen);
        return inner;
      }
      case TokenKind::identifier: return parse_identifier(tok);
      default:
        throw ParseError(tok.offset, "number, identifier, '(' or '-'",
                         "unexpected " + std::string(describe(tok.kind)));
    }
  }

  NodePtr parse_identifier(const Token& tok) {
    advance();
    // 'i' is reserved and shadows everything else.
    if (tok.text == "i") return make(NamedConstant{Constant::imaginary_unit});
    if (tok.text == "x") return make(Variable{});
    if (tok.text == "pi") return make(NamedConstant{Constant::pi});
    if (tok.text == "e") return make(NamedConstant{Constant::e});
    for (const auto& [name, fn] : kFunctions) {
      if (name == tok.text) {
        expect(TokenKind::lparen);
        NodePtr arg = parse_expr(0);
        expect(TokenKind::rparen);
        return make(Call{fn, std::move(arg)});
      }
    }
    throw ParseError(tok.offset, "x, i, pi, e or a known function",
                     "unknown identifier '" + std::string(tok.text) + "'");
  }

  void expect(TokenKind k) {
    if (current_.kind != k)
      throw ParseError(current_.offset, std::string(describe(k)),
                       "expected " + std::string(describe(k)) + ", found " + std::string(describe(current_.kind)));
    advance();
  }

  Lexer lexer_;
  Token current_{TokenKind::end, 0, {}};
};

cplx integer_power(cplx base, long long n) {
  const bool invert = n < 0;
  unsigned long long m = invert ? static_cast<unsigned long long>(-n) : static_cast<unsigned long long>(n);
  cplx result{1.0, 0.0};
  while (m != 0) {
    if (m & 1ULL) result *= base;
    base *= base;
    m >>= 1;
  }
  return invert ? cplx{1.0, 0.0} / result : result;
}

cplx power(cplx base, cplx exponent) {
  if (exponent.imag() == 0.0) {
    const double p = exponent.real();
    if (p == std::trunc(p) && std::abs(p) <= 1024.0) return integer_power(base, static_cast<long long>(p));
    if (base.imag() == 0.0 && base.real() >= 0.0) return {std::pow(base.real(), p), 0.0};
  }
  return std::pow(base, exponent);
}

cplx eval(const Node& node, double x) {
  return std::visit(
      [x](const auto& n) -> cplx {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Number>) {
          return {n.value, 0.0};
        } else if constexpr (std::is_same_v<T, Variable>) {
          return {x, 0.0};
        } else if constexpr (std::is_same_v<T, NamedConstant>) {
          switch (n.which) {
            case Constant::imaginary_unit: return {0.0, 1.0};
            case Constant::pi: return {std::numbers::pi, 0.0};
            case Constant::e: return {std::numbers::e, 0.0};
          }
          return {};
        } else if constexpr (std::is_same_v<T, Negate>) {
          // Keep +0 imaginary parts on real operands: sqrt(-4) is 2i, not -2i.
          const cplx v = eval(*n.operand, x);
          return {-v.real(), v.imag() == 0.0 ? 0.0 : -v.imag()};
        } else if constexpr (std::is_same_v<T, Binary>) {
          const cplx a = eval(*n.lhs, x);
          const cplx b = eval(*n.rhs, x);
          switch (n.op) {
            case BinaryOp::add: return a + b;
            case BinaryOp::sub: return a - b;
            case BinaryOp::mul: return a * b;
            case BinaryOp::div: return a / b;
            case BinaryOp::pow: return power(a, b);
          }
          return {};
        } else {
          const cplx a = eval(*n.arg, x);
          switch (n.fn) {
            case Function::sin: return std::sin(a);
            case Function::cos: return std::cos(a);
            case Function::tan: return std::tan(a);
            case Function::sinh: return std::sinh(a);
            case Function::cosh: return std::cosh(a);
            case Function::tanh: return std::tanh(a);
            case Function::exp: return std::exp(a);
            case Function::log: return std::log(a);
            case Function::sqrt: return std::sqrt(a);
            case Function::abs: return {std::abs(a), 0.0};
            case Function::re: return {a.real(), 0.0};
            case Function::im: return {a.imag(), 0.0};
            case Function::conj: return std::conj(a);
          }
          return {};
        }
      },
      node.kind);
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void print(const Node& node, std::string& out) {
  std::visit(
      [&out](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Number>) {
          out += format_number(n.value);
        } else if constexpr (std::is_same_v<T, Variable>) {
          out += 'x';
        } else if constexpr (std::is_same_v<T, NamedConstant>) {
          out += n.which == Constant::imaginary_unit ? "i" : n.which == Constant::pi ? "pi" : "e";
        } else if constexpr (std::is_same_v<T, Negate>) {
          out += "(-";
          print(*n.operand, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, Binary>) {
          static constexpr std::array<char, 5> symbols{'+', '-', '*', '/', '^'};
          out += '(';
          print(*n.lhs, out);
          out += symbols[static_cast<std::size_t>(n.op)];
          print(*n.rhs, out);
          out += ')';
        } else {
          out += function_name(n.fn);
          out += '(';
          print(*n.arg, out);
          out += ')';
        }
      },
      node.kind);
}

}  // namespace

std::string_view function_name(Function fn) {
  for (const auto& [name, f] : kFunctions)
    if (f == fn) return name;
  return "?";
}

Expression parse(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos)
    throw ParseError(0, "expression", "empty expression");
  return Expression(Parser(text).parse_all());
}

cplx Expression::evaluate(double x) const {
  const cplx v = eval(*root_, x);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw DomainError("expression " + to_string() + " is not finite at x = " + format_number(x));
  return v;
}

std::string Expression::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind.index() != b.kind.index()) return false;
  return std::visit(
      [&b](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        const T& m = std::get<T>(b.kind);
        if constexpr (std::is_same_v<T, Number>) {
          return std::bit_cast<std::uint64_t>(n.value) == std::bit_cast<std::uint64_t>(m.value);
        } else if constexpr (std::is_same_v<T, Variable>) {
          return true;
        } else if constexpr (std::is_same_v<T, NamedConstant>) {
          return n.which == m.which;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return structurally_equal(*n.operand, *m.operand);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return n.op == m.op && structurally_equal(*n.lhs, *m.lhs) && structurally_equal(*n.rhs, *m.rhs);
        } else {
          return n.fn == m.fn && structurally_equal(*n.arg, *m.arg);
        }
      },
      a.kind);
}

bool operator==(const Expression& a, const Expression& b) { return structurally_equal(*a.root_, *b.root_); }

CoefficientFunction to_coefficient(const Expression& value) {
  return CoefficientFunction([value](double x) { return value.evaluate(x); });
}

CoefficientFunction to_coefficient(const Expression& value, const Expression& derivative) {
  return CoefficientFunction([value](double x) { return value.evaluate(x); },
                             [derivative](double x) { return derivative.evaluate(x); });
}

}  // namespace antilinear::expr
