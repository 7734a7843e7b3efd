#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include "polyint/problems.hpp"

namespace polyint {

namespace {

struct Located {
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;  // 1-based column of text[0]
};

std::size_t skip_ws(std::string_view s, std::size_t pos) {
  while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\r')) ++pos;
  return pos;
}

Located trimmed(std::string_view s, std::size_t begin, std::size_t end, std::size_t line) {
  begin = skip_ws(s, begin);
  while (end > begin && (s[end - 1] == ' ' || s[end - 1] == '\t' || s[end - 1] == '\r')) --end;
  return {std::string(s.substr(begin, end - begin)), line, begin + 1};
}

double parse_real(const Located& v, std::size_t offset, std::size_t length) {
  std::string_view s(v.text);
  std::size_t b = offset;
  std::size_t e = offset + length;
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  if (b < e && s[b] == '+') ++b;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data() + b, s.data() + e, value);
  if (ec != std::errc{} || ptr != s.data() + e || b == e) {
    throw ParseError("malformed number '" + std::string(s.substr(offset, length)) + "'", v.line,
                     v.column + offset);
  }
  return value;
}

}  // namespace

ProblemSpec parse_problem(std::string_view text, const std::string& origin) {
  std::optional<Located> name, dim, field, structure, ic, h;
  std::vector<Located> integrals;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t stop = text.find('\n', start);
    if (stop == std::string_view::npos) stop = text.size();
    ++line_no;
    std::string_view line = text.substr(start, stop - start);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    start = stop + 1;

    const std::size_t first = skip_ws(line, 0);
    if (first == line.size()) {
      if (stop == text.size()) break;
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no, first + 1);
    const Located key = trimmed(line, first, eq, line_no);
    const Located value = trimmed(line, eq + 1, line.size(), line_no);
    if (value.text.empty()) throw ParseError("missing value for '" + key.text + "'", line_no, eq + 2);

    auto once = [&](std::optional<Located>& slot) {
      if (slot) throw ParseError("duplicate key '" + key.text + "'", line_no, key.column);
      slot = value;
    };
    if (key.text == "name") once(name);
    else if (key.text == "dim") once(dim);
    else if (key.text == "field") once(field);
    else if (key.text == "integral") integrals.push_back(value);
    else if (key.text == "structure") once(structure);
    else if (key.text == "ic") once(ic);
    else if (key.text == "h") once(h);
    else throw ParseError("unknown key '" + key.text + "'", line_no, key.column);

    if (stop == text.size()) break;
  }

  const std::size_t last_line = line_no;
  if (!dim) throw ParseError(origin + ": missing 'dim'", last_line, 1);
  if (!field) throw ParseError(origin + ": missing 'field'", last_line, 1);
  if (integrals.empty()) throw ParseError(origin + ": missing 'integral'", last_line, 1);

  std::size_t n = 0;
  {
    const auto& v = *dim;
    auto [ptr, ec] = std::from_chars(v.text.data(), v.text.data() + v.text.size(), n);
    if (ec != std::errc{} || ptr != v.text.data() + v.text.size() || n == 0) {
      throw ParseError("dim must be a positive integer", v.line, v.column);
    }
  }

  ProblemSpec spec;
  spec.name = name ? name->text : origin;
  spec.description = "loaded from " + origin;

  // field = p1; p2; ...; pn   (trailing ';' optional)
  {
    const auto& v = *field;
    std::size_t pos = 0;
    while (pos < v.text.size()) {
      std::size_t semi = v.text.find(';', pos);
      if (semi == std::string::npos) semi = v.text.size();
      const Located piece = trimmed(v.text, pos, semi, v.line);
      if (!piece.text.empty()) {
        spec.field.push_back(parse_polynomial(piece.text, n, v.line, v.column + piece.column - 2));
      } else if (semi != v.text.size()) {
        throw ParseError("empty field component", v.line, v.column + pos);
      }
      pos = semi + 1;
    }
    if (spec.field.size() != n) {
      throw ParseError("field has " + std::to_string(spec.field.size()) + " components, dim is " +
                           std::to_string(n),
                       v.line, v.column);
    }
  }

  for (const auto& v : integrals) spec.integrals.push_back(parse_polynomial(v.text, n, v.line, v.column - 1));

  if (ic) {
    std::size_t pos = 0;
    const auto& v = *ic;
    while (pos <= v.text.size()) {
      std::size_t comma = v.text.find(',', pos);
      if (comma == std::string::npos) comma = v.text.size();
      spec.ic.push_back(parse_real(v, pos, comma - pos));
      pos = comma + 1;
    }
    if (spec.ic.size() != n) throw ParseError("ic needs " + std::to_string(n) + " values", v.line, v.column);
  } else {
    spec.ic.assign(n, 0.0);
  }
  if (h) spec.h = parse_real(*h, 0, h->text.size());

  const std::string kind = structure ? structure->text : "wedge";
  if (kind != "canonical" && kind != "wedge") {
    throw ParseError("structure must be 'canonical' or 'wedge'", structure->line, structure->column);
  }
  if (spec.integrals.size() >= n) {
    throw ProblemError(origin + ": need fewer integrals than dimensions (m < n), got m = " +
                       std::to_string(spec.integrals.size()) + ", n = " + std::to_string(n));
  }

  spec.n = n;
  try {
    SkewStructure s = kind == "canonical" ? SkewStructure{CanonicalJ{}} : SkewStructure{DefaultWedge{}};
    spec.system = std::make_shared<const ReducedSystem>(spec.field, spec.integrals, std::move(s));
  } catch (const std::invalid_argument& e) {
    throw ProblemError(origin + ": " + e.what());
  }
  spec.verification = verify_system(*spec.system);
  if (!spec.verification.pass) {
    throw ProblemError(origin + ": verification failed: " + spec.verification.summary());
  }
  return spec;
}

ProblemSpec load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProblemError("cannot open problem file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str(), path);
}

}  // namespace polyint
