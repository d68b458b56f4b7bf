#ifndef GLSHP_PROBLEM_IO_HPP
#define GLSHP_PROBLEM_IO_HPP

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "glshp/problems.hpp"

namespace glshp {

// Flat key-value problem format. Sections: [orders], [forcing.u],
// [forcing.v], [nonlinearity], [ic.u], [ic.v], [exact]. Series literals
// are signed terms `coeff * x^(p+q*a+r*b) * t^(...)` joined by +/-;
// exponent coefficients are rationals, `a` and `b` stand for the two
// fractional orders. Nonlinearity terms are tags u*u_tt, v*u_tt,
// u*v_tt, v*v_tt with optional numeric coefficients. The serializer
// below is the executable definition of the grammar.

namespace io_detail {

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;
  int line;
  int col0;  // column of text[0] in the source line

  int col() const { return col0 + static_cast<int>(pos); }
  bool done() const { return pos >= text.size(); }
  char peek() const { return done() ? '\0' : text[pos]; }
  char take() { return done() ? '\0' : text[pos++]; }
  void skip_ws() {
    while (!done() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line, col());
  }
};

inline std::int64_t parse_int(Cursor& c) {
  c.skip_ws();
  std::size_t start = c.pos;
  if (c.peek() == '-') c.take();
  if (!std::isdigit(static_cast<unsigned char>(c.peek())))
    c.fail("expected integer");
  while (std::isdigit(static_cast<unsigned char>(c.peek()))) c.take();
  return std::strtoll(c.text.substr(start, c.pos - start).c_str(), nullptr, 10);
}

inline Rational parse_rational(Cursor& c) {
  std::int64_t num = parse_int(c);
  c.skip_ws();
  if (c.peek() == '/') {
    c.take();
    std::int64_t den = parse_int(c);
    if (den == 0) c.fail("zero denominator");
    return Rational(num, den);
  }
  return Rational(num);
}

// p + q*a + r*b with rational coefficients, in any term order.
inline Exponent parse_affine(Cursor& c) {
  Exponent e;
  bool first = true;
  while (true) {
    c.skip_ws();
    double sign = 1.0;
    if (c.peek() == '+' || c.peek() == '-') {
      sign = c.take() == '-' ? -1.0 : 1.0;
    } else if (!first) {
      break;
    }
    c.skip_ws();
    Rational coeff(1);
    bool have_coeff = false;
    if (std::isdigit(static_cast<unsigned char>(c.peek()))) {
      coeff = parse_rational(c);
      have_coeff = true;
      c.skip_ws();
      if (c.peek() == '*') {
        c.take();
        c.skip_ws();
      }
    }
    if (sign < 0) coeff = -coeff;
    if (c.peek() == 'a') {
      c.take();
      e.q = e.q + coeff;
    } else if (c.peek() == 'b') {
      c.take();
      e.r = e.r + coeff;
    } else if (have_coeff) {
      e.p = e.p + coeff;
    } else {
      c.fail("expected rational, 'a' or 'b' in exponent");
    }
    first = false;
  }
  return e;
}

inline double parse_number(Cursor& c) {
  c.skip_ws();
  const char* begin = c.text.c_str() + c.pos;
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin) c.fail("expected number");
  c.pos += static_cast<std::size_t>(end - begin);
  return v;
}

// x or t optionally raised to a parenthesized affine exponent.
inline void parse_power(Cursor& c, char sym, Exponent& out) {
  c.take();  // sym
  c.skip_ws();
  if (c.peek() == '^') {
    c.take();
    c.skip_ws();
    if (c.take() != '(') c.fail(std::string("expected '(' after ") + sym + "^");
    out = parse_affine(c);
    c.skip_ws();
    if (c.take() != ')') c.fail("expected ')' closing exponent");
  } else {
    out = Exponent(Rational(1));
  }
}

inline FracSeries parse_series(Cursor& c) {
  FracSeries s;
  bool first = true;
  while (true) {
    c.skip_ws();
    if (c.done()) {
      if (first) c.fail("empty series");
      break;
    }
    double sign = 1.0;
    if (c.peek() == '+' || c.peek() == '-') {
      sign = c.take() == '-' ? -1.0 : 1.0;
    } else if (!first) {
      c.fail("expected '+' or '-' between terms");
    }
    c.skip_ws();
    double coeff = 1.0;
    bool saw_any = false;
    if (std::isdigit(static_cast<unsigned char>(c.peek())) || c.peek() == '.') {
      coeff = parse_number(c);
      saw_any = true;
    }
    Exponent xe, te;
    while (true) {
      c.skip_ws();
      std::size_t before = c.pos;
      if (c.peek() == '*') {
        c.take();
        c.skip_ws();
      } else if (saw_any) {
        break;
      }
      if (c.peek() == 'x') {
        parse_power(c, 'x', xe);
        saw_any = true;
      } else if (c.peek() == 't') {
        parse_power(c, 't', te);
        saw_any = true;
      } else {
        c.pos = before;
        break;
      }
    }
    if (!saw_any) c.fail("expected term");
    s.add_term(sign * coeff, xe, te);
    first = false;
  }
  return s;
}

inline std::vector<NonlinearTerm> parse_nonlinearity(Cursor& c) {
  std::vector<NonlinearTerm> terms;
  bool first = true;
  while (true) {
    c.skip_ws();
    if (c.done()) break;
    double sign = 1.0;
    if (c.peek() == '+' || c.peek() == '-') {
      sign = c.take() == '-' ? -1.0 : 1.0;
    } else if (!first) {
      c.fail("expected '+' or '-' between nonlinearity terms");
    }
    c.skip_ws();
    double coeff = 1.0;
    if (std::isdigit(static_cast<unsigned char>(c.peek())) || c.peek() == '.') {
      coeff = parse_number(c);
      c.skip_ws();
      if (c.take() != '*') c.fail("expected '*' after coefficient");
      c.skip_ws();
    }
    // tag of the form u*u_tt
    std::size_t start = c.pos;
    while (!c.done() && (std::isalnum(static_cast<unsigned char>(c.peek())) ||
                         c.peek() == '_' || c.peek() == '*'))
      c.take();
    std::string tag = c.text.substr(start, c.pos - start);
    NonlinearTerm term;
    term.coeff = sign * coeff;
    if (tag == "u*u_tt") {
      term.factor = Unknown::u;
      term.tt = Unknown::u;
    } else if (tag == "v*u_tt") {
      term.factor = Unknown::v;
      term.tt = Unknown::u;
    } else if (tag == "u*v_tt") {
      term.factor = Unknown::u;
      term.tt = Unknown::v;
    } else if (tag == "v*v_tt") {
      term.factor = Unknown::v;
      term.tt = Unknown::v;
    } else {
      throw ParseError("unknown nonlinearity tag '" + tag + "'", c.line,
                       c.col0 + static_cast<int>(start));
    }
    terms.push_back(term);
    first = false;
  }
  return terms;
}

inline FracSeries series_from(const std::string& value, int line, int col0) {
  Cursor c{value, 0, line, col0};
  c.skip_ws();
  if (c.peek() == '0') {
    std::size_t save = c.pos;
    c.take();
    c.skip_ws();
    if (c.done()) return FracSeries::zero();
    c.pos = save;
  }
  FracSeries s = parse_series(c);
  c.skip_ws();
  if (!c.done()) c.fail("trailing characters after series");
  return s;
}

}  // namespace io_detail

inline ProblemSpec parse_problem_string(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::string section;
  ProblemSpec p;
  bool have_alpha = false, have_beta = false;
  double alpha = 1.0, beta = 1.0;
  std::vector<std::pair<int, FracSeries>> exacts;  // (slot, series)

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line = line.substr(0, hash);
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    std::size_t e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("unterminated section header", lineno,
                         static_cast<int>(b) + 1);
      section = line.substr(1, line.size() - 2);
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected 'key = value'", lineno,
                       static_cast<int>(b) + 1);
    std::string key = line.substr(0, eq);
    key.erase(key.find_last_not_of(" \t") + 1);
    std::string value = line.substr(eq + 1);
    std::size_t vb = value.find_first_not_of(" \t");
    int vcol = static_cast<int>(b + eq + 1 + (vb == std::string::npos ? 0 : vb)) + 1;
    value = vb == std::string::npos ? "" : value.substr(vb);

    if (section == "orders") {
      io_detail::Cursor c{value, 0, lineno, vcol};
      double v = io_detail::parse_number(c);
      if (key == "alpha") {
        alpha = v;
        have_alpha = true;
      } else if (key == "beta") {
        beta = v;
        have_beta = true;
      } else {
        throw ParseError("unknown key '" + key + "' in [orders]", lineno,
                         static_cast<int>(b) + 1);
      }
    } else if (section == "forcing.u" || section == "forcing.v") {
      if (key != "series")
        throw ParseError("expected 'series' key in [" + section + "]", lineno,
                         static_cast<int>(b) + 1);
      FracSeries s = io_detail::series_from(value, lineno, vcol);
      if (section == "forcing.u")
        p.forcing_u = s;
      else
        p.forcing_v = s;
    } else if (section == "nonlinearity") {
      io_detail::Cursor c{value, 0, lineno, vcol};
      auto terms = io_detail::parse_nonlinearity(c);
      if (key == "eq.u")
        p.nonlin_u = terms;
      else if (key == "eq.v")
        p.nonlin_v = terms;
      else
        throw ParseError("unknown key '" + key + "' in [nonlinearity]", lineno,
                         static_cast<int>(b) + 1);
    } else if (section == "ic.u" || section == "ic.v") {
      int order;
      if (key == "d0")
        order = 0;
      else if (key == "d1")
        order = 1;
      else
        throw ParseError("expected 'd0' or 'd1' in [" + section + "]", lineno,
                         static_cast<int>(b) + 1);
      FracSeries s = io_detail::series_from(value, lineno, vcol);
      auto& dst = section == "ic.u" ? p.ics_u : p.ics_v;
      dst.push_back({order, s});
    } else if (section == "exact") {
      int slot;
      if (key == "u")
        slot = 0;
      else if (key == "v")
        slot = 1;
      else
        throw ParseError("expected 'u' or 'v' in [exact]", lineno,
                         static_cast<int>(b) + 1);
      exacts.emplace_back(slot, io_detail::series_from(value, lineno, vcol));
    } else if (section.empty()) {
      throw ParseError("key outside any section", lineno,
                       static_cast<int>(b) + 1);
    } else {
      throw ParseError("unknown section [" + section + "]", lineno,
                       static_cast<int>(b) + 1);
    }
  }

  if (!have_alpha) throw ParseError("missing alpha in [orders]", lineno, 1);
  p.kind = p.forcing_v.has_value() ? ProblemSpec::Kind::coupled
                                   : ProblemSpec::Kind::single;
  if (p.coupled() && !have_beta)
    throw ParseError("coupled problem requires beta in [orders]", lineno, 1);
  if (!(alpha > 0.0 && alpha <= 1.0) ||
      (p.coupled() && !(beta > 0.0 && beta <= 1.0)))
    throw ParseError("fractional orders must lie in (0,1]", lineno, 1);
  p.orders = FracOrders(alpha, beta);

  std::sort(exacts.begin(), exacts.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [slot, s] : exacts) {
    if (slot == 1 && !p.coupled())
      throw ParseError("[exact] lists v for a single-unknown problem", lineno, 1);
    p.exact_at_one.push_back(std::move(s));
  }

  auto diags = validate(p);
  if (!diags.empty()) {
    std::string msg = "problem failed validation:";
    for (const auto& d : diags) msg += "\n  - " + d;
    throw ParseError(msg, lineno, 1);
  }
  return p;
}

inline ProblemSpec parse_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file '" + path + "'", 0, 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem_string(buf.str());
}

namespace io_detail {

inline std::string nonlinearity_str(const std::vector<NonlinearTerm>& terms) {
  std::string out;
  for (const auto& t : terms) {
    double a = std::abs(t.coeff);
    if (out.empty())
      out = t.coeff < 0 ? "-" : "";
    else
      out += t.coeff < 0 ? " - " : " + ";
    if (a != 1.0) out += format_double(a) + "*";
    out += std::string(unknown_name(t.factor)) + "*" +
           unknown_name(t.tt) + "_tt";
  }
  return out;
}

}  // namespace io_detail

inline std::string serialize_problem(const ProblemSpec& p) {
  std::ostringstream out;
  out << "[orders]\n";
  out << "alpha = " << format_double(p.orders.alpha) << "\n";
  if (p.coupled()) out << "beta = " << format_double(p.orders.beta) << "\n";
  out << "\n[forcing.u]\nseries = " << p.forcing_u.str() << "\n";
  if (p.coupled())
    out << "\n[forcing.v]\nseries = " << p.forcing_v->str() << "\n";
  out << "\n[nonlinearity]\n";
  if (!p.nonlin_u.empty())
    out << "eq.u = " << io_detail::nonlinearity_str(p.nonlin_u) << "\n";
  if (p.coupled() && !p.nonlin_v.empty())
    out << "eq.v = " << io_detail::nonlinearity_str(p.nonlin_v) << "\n";
  auto emit_ics = [&out](const std::vector<InitialCondition>& ics,
                         const char* name) {
    out << "\n[ic." << name << "]\n";
    for (const auto& ic : ics)
      out << "d" << ic.order << " = " << ic.series.str() << "\n";
  };
  emit_ics(p.ics_u, "u");
  if (p.coupled()) emit_ics(p.ics_v, "v");
  if (!p.exact_at_one.empty()) {
    out << "\n[exact]\n";
    out << "u = " << p.exact_at_one[0].str() << "\n";
    if (p.exact_at_one.size() > 1)
      out << "v = " << p.exact_at_one[1].str() << "\n";
  }
  return out.str();
}

// Structural equality used by the round-trip tests.
inline bool problems_equal(const ProblemSpec& a, const ProblemSpec& b) {
  auto nl_eq = [](const std::vector<NonlinearTerm>& x,
                  const std::vector<NonlinearTerm>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i].coeff != y[i].coeff || x[i].factor != y[i].factor ||
          x[i].tt != y[i].tt)
        return false;
    return true;
  };
  auto ic_eq = [](const std::vector<InitialCondition>& x,
                  const std::vector<InitialCondition>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i].order != y[i].order || !(x[i].series == y[i].series))
        return false;
    return true;
  };
  if (a.kind != b.kind) return false;
  if (a.orders.alpha != b.orders.alpha) return false;
  if (a.coupled() && a.orders.beta != b.orders.beta) return false;
  if (!(a.forcing_u == b.forcing_u)) return false;
  if (a.forcing_v.has_value() != b.forcing_v.has_value()) return false;
  if (a.forcing_v && !(*a.forcing_v == *b.forcing_v)) return false;
  if (!nl_eq(a.nonlin_u, b.nonlin_u) || !nl_eq(a.nonlin_v, b.nonlin_v))
    return false;
  if (!ic_eq(a.ics_u, b.ics_u) || !ic_eq(a.ics_v, b.ics_v)) return false;
  if (a.exact_at_one.size() != b.exact_at_one.size()) return false;
  for (std::size_t i = 0; i < a.exact_at_one.size(); ++i)
    if (!(a.exact_at_one[i] == b.exact_at_one[i])) return false;
  return true;
}

}  // namespace glshp

#endif  // GLSHP_PROBLEM_IO_HPP
