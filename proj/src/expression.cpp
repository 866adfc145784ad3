#include "dephasim/expression.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "dephasim/errors.hpp"

namespace dephasim {

namespace {

// Expressions compile to a small postfix program; evaluation is a stack
// machine with no allocation per call.
enum class Op : unsigned char { PushConst, PushT, Add, Sub, Mul, Div, Pow, Neg, Exp, Sqrt };

struct Instr {
  Op op;
  double value = 0.0;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  std::vector<Instr> parse() {
    std::vector<Instr> program;
    expression(program);
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return program;
  }

 private:
  // expression := term (('+'|'-') term)*
  void expression(std::vector<Instr>& out) {
    term(out);
    for (;;) {
      skip_ws();
      if (consume('+')) {
        term(out);
        out.push_back({Op::Add});
      } else if (consume('-')) {
        term(out);
        out.push_back({Op::Sub});
      } else {
        return;
      }
    }
  }

  // term := factor (('*'|'/') factor)*
  void term(std::vector<Instr>& out) {
    factor(out);
    for (;;) {
      skip_ws();
      if (consume('*')) {
        factor(out);
        out.push_back({Op::Mul});
      } else if (consume('/')) {
        factor(out);
        out.push_back({Op::Div});
      } else {
        return;
      }
    }
  }

  // factor := unary ('^' factor)?   (right-associative)
  void factor(std::vector<Instr>& out) {
    unary(out);
    skip_ws();
    if (consume('^')) {
      factor(out);
      out.push_back({Op::Pow});
    }
  }

  // unary := '-' unary | primary
  void unary(std::vector<Instr>& out) {
    skip_ws();
    if (consume('-')) {
      unary(out);
      out.push_back({Op::Neg});
      return;
    }
    primary(out);
  }

  // primary := number | 't' | 'exp' '(' expr ')' | 'sqrt' '(' expr ')' | '(' expr ')'
  void primary(std::vector<Instr>& out) {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      out.push_back({Op::PushConst, v});
      return;
    }

    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string name = text_.substr(start, pos_ - start);
      if (name == "t") {
        out.push_back({Op::PushT});
        return;
      }
      if (name == "exp" || name == "sqrt") {
        skip_ws();
        if (!consume('(')) fail("expected '(' after function name");
        expression(out);
        skip_ws();
        if (!consume(')')) fail("expected ')'");
        out.push_back({name == "exp" ? Op::Exp : Op::Sqrt});
        return;
      }
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }

    if (consume('(')) {
      expression(out);
      skip_ws();
      if (!consume(')')) fail("expected ')'");
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw ConfigError("expression error at position " + std::to_string(pos_) + ": " + what +
                      " in \"" + text_ + "\"");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

double run(const std::vector<Instr>& program, double t) {
  double stack[64];
  int top = -1;
  for (const Instr& in : program) {
    switch (in.op) {
      case Op::PushConst:
        stack[++top] = in.value;
        break;
      case Op::PushT:
        stack[++top] = t;
        break;
      case Op::Add:
        --top;
        stack[top] += stack[top + 1];
        break;
      case Op::Sub:
        --top;
        stack[top] -= stack[top + 1];
        break;
      case Op::Mul:
        --top;
        stack[top] *= stack[top + 1];
        break;
      case Op::Div:
        --top;
        stack[top] /= stack[top + 1];
        break;
      case Op::Pow:
        --top;
        stack[top] = std::pow(stack[top], stack[top + 1]);
        break;
      case Op::Neg:
        stack[top] = -stack[top];
        break;
      case Op::Exp:
        stack[top] = std::exp(stack[top]);
        break;
      case Op::Sqrt:
        stack[top] = std::sqrt(stack[top]);
        break;
    }
  }
  return stack[0];
}

}  // namespace

std::function<double(double)> parse_expression(const std::string& text) {
  Parser parser(text);
  std::vector<Instr> program = parser.parse();

  // Depth check once at parse time so run() can use a fixed stack.
  int depth = 0, max_depth = 0;
  for (const Instr& in : program) {
    switch (in.op) {
      case Op::PushConst:
      case Op::PushT:
        max_depth = std::max(max_depth, ++depth);
        break;
      case Op::Neg:
      case Op::Exp:
      case Op::Sqrt:
        break;
      default:
        --depth;
    }
  }
  if (max_depth > 63) throw ConfigError("expression too deeply nested");

  return [program = std::move(program)](double t) { return run(program, t); };
}

}  // namespace dephasim
