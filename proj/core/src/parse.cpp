#include <cctype>
#include <sstream>

#include "cspimp/error.hpp"
#include "cspimp/polynomial.hpp"

namespace cspimp {

namespace {

class PolyParser {
 public:
  explicit PolyParser(const std::string& s) : s_(s) {}

  Polynomial parse() {
    std::vector<Term> terms;
    skip();
    if (pos_ == s_.size()) throw ParseError("empty polynomial", pos_);
    bool negative = false;
    if (peek() == '+' || peek() == '-') {
      negative = get() == '-';
    }
    terms.push_back(sterm(negative));
    while (true) {
      skip();
      if (pos_ == s_.size()) break;
      char c = peek();
      if (c != '+' && c != '-') throw ParseError(std::string("unexpected '") + c + "'", pos_);
      get();
      terms.push_back(sterm(c == '-'));
    }
    return Polynomial::from_terms(std::move(terms));
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  char get() {
    skip();
    return s_[pos_++];
  }

  std::string nat() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError("expected a number", start);
    return s_.substr(start, pos_ - start);
  }

  Term sterm(bool negative) {
    if (peek() == '-') {
      get();
      negative = !negative;
    }
    Rational coeff = 1;
    bool have_factor = false;
    std::vector<Monomial::Entry> entries;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      std::size_t at = pos_;
      coeff = Rational(nat());
      if (peek() == '/') {
        get();
        Rational den(nat());
        if (den == 0) throw ParseError("zero denominator", at);
        coeff /= den;
      }
      if (peek() != '*') return finish(coeff, negative, entries);
      get();
    }
    do {
      if (have_factor) get();
      entries.push_back(factor());
      have_factor = true;
    } while (peek() == '*');
    return finish(coeff, negative, entries);
  }

  Term finish(Rational coeff, bool negative, std::vector<Monomial::Entry>& entries) {
    char c = peek();
    if (c != '\0' && c != '+' && c != '-') throw ParseError(std::string("unexpected '") + c + "'", pos_);
    coeff.canonicalize();
    if (negative) coeff = -coeff;
    return Term{Monomial(std::move(entries)), coeff};
  }

  Monomial::Entry factor() {
    if (peek() != 'x') throw ParseError("expected variable", pos_);
    get();
    std::size_t at = pos_;
    unsigned long v = std::stoul(nat());
    if (v == 0) throw ParseError("variable indices start at 1", at);
    unsigned long e = 1;
    if (peek() == '^') {
      get();
      e = std::stoul(nat());
    }
    return {static_cast<Var>(v), static_cast<std::uint32_t>(e)};
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(const std::string& text) {
  try {
    return PolyParser(text).parse();
  } catch (const std::out_of_range&) {
    throw ParseError("number out of range", 0);
  }
}

std::string format_monomial(const Monomial& m) {
  if (m.is_one()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, e] : m.entries()) {
    if (!first) os << '*';
    first = false;
    os << 'x' << v;
    if (e != 1) os << '^' << e;
  }
  return os.str();
}

std::string format_polynomial(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : p.terms()) {
    Rational a = abs(t.coeff);
    if (first) {
      if (t.coeff < 0) os << '-';
    } else {
      os << (t.coeff < 0 ? " - " : " + ");
    }
    first = false;
    if (t.monomial.is_one()) {
      os << a.get_str();
    } else if (a == 1) {
      os << format_monomial(t.monomial);
    } else {
      os << a.get_str() << '*' << format_monomial(t.monomial);
    }
  }
  return os.str();
}

}  // namespace cspimp
