#include <cctype>
#include <charconv>

#include "polyint/polynomial.hpp"

namespace polyint {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + what),
      line_(line),
      column_(column) {}

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::size_t dim, std::size_t line, std::size_t column_offset)
      : text_(text), dim_(dim), line_(line), column_offset_(column_offset) {}

  Polynomial parse() {
    std::vector<Term> terms;
    skip_space();
    if (at_end()) fail("empty polynomial expression");
    double sign = 1.0;
    // A leading sign binds to the first term, so "-x1" and "-2*x1" both parse.
    if (peek() == '+' || peek() == '-') {
      if (!starts_number()) {
        sign = peek() == '-' ? -1.0 : 1.0;
        ++pos_;
      }
    }
    terms.push_back(term(sign));
    skip_space();
    while (!at_end()) {
      const char op = peek();
      if (op != '+' && op != '-') fail(std::string("expected '+' or '-', found '") + op + "'");
      ++pos_;
      terms.push_back(term(op == '-' ? -1.0 : 1.0));
      skip_space();
    }
    return Polynomial::from_terms(dim_, std::move(terms));
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, line_, column_offset_ + pos_ + 1);
  }

  // Sign immediately followed by a digit or '.'.
  bool starts_number() const {
    std::size_t p = pos_;
    if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
    return p < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[p])) || text_[p] == '.');
  }

  Term term(double sign) {
    skip_space();
    if (at_end()) fail("expected a term");
    std::vector<std::pair<VarId, std::uint32_t>> pairs;
    double coeff = sign;
    if (starts_number()) {
      coeff *= number();
    } else if (peek() == 'x') {
      pairs.push_back(factor());
    } else {
      fail(std::string("expected a number or variable, found '") + peek() + "'");
    }
    skip_space();
    while (!at_end() && peek() == '*') {
      ++pos_;
      skip_space();
      if (at_end() || peek() != 'x') fail("expected a variable after '*'");
      pairs.push_back(factor());
      skip_space();
    }
    return {Monomial::from_pairs(std::move(pairs)), coeff};
  }

  double number() {
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    const char* start = begin;
    // from_chars rejects a leading '+'.
    if (*start == '+') ++start;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(start, end, value);
    if (ec != std::errc{}) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }

  std::uint32_t integer(const char* what) {
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) {
      pos_ = start;
      fail(std::string("expected ") + what);
    }
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc{}) {
      pos_ = start;
      fail(std::string(what) + " out of range");
    }
    return value;
  }

  std::pair<VarId, std::uint32_t> factor() {
    const std::size_t start = pos_;
    ++pos_;  // 'x'
    const std::uint32_t index = integer("variable index");
    if (index == 0) {
      pos_ = start;
      fail("variable indices start at 1 (found x0)");
    }
    if (index > dim_) {
      pos_ = start;
      fail("variable x" + std::to_string(index) + " exceeds dimension " + std::to_string(dim_));
    }
    std::uint32_t exponent = 1;
    skip_space();
    if (!at_end() && peek() == '^') {
      ++pos_;
      skip_space();
      exponent = integer("exponent");
    }
    return {VarId{index - 1}, exponent};
  }

  std::string_view text_;
  std::size_t dim_;
  std::size_t line_;
  std::size_t column_offset_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, std::size_t dim, std::size_t line,
                            std::size_t column_offset) {
  return Parser(text, dim, line, column_offset).parse();
}

}  // namespace polyint
