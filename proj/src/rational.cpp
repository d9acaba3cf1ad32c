#include "rational.hpp"

#include <cctype>
#include <ostream>
#include <sstream>

#include "errors.hpp"

namespace plog {

Rational::Rational(long num, long den) {
  if (den == 0) fail(ErrorCode::Internal, "rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) fail(ErrorCode::Internal, "rational division by zero");
  v_ /= o.v_;
  return *this;
}

Rational Rational::parse(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) fail(ErrorCode::Syntax, "empty number");

  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (num.empty() || den.empty()) fail(ErrorCode::Syntax, "malformed fraction '" + text + "'");
    try {
      mpz_class n{num, 10}, d{den, 10};
      if (d == 0) fail(ErrorCode::Syntax, "zero denominator in '" + text + "'");
      mpq_class q{n, d};
      q.canonicalize();
      return Rational(q);
    } catch (const std::invalid_argument&) {
      fail(ErrorCode::Syntax, "malformed fraction '" + text + "'");
    }
  }

  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string intpart = s.substr(0, dot), fracpart = s.substr(dot + 1);
    bool negative = !intpart.empty() && intpart[0] == '-';
    if (negative) intpart = intpart.substr(1);
    if (intpart.empty()) intpart = "0";
    for (char c : intpart + fracpart)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        fail(ErrorCode::Syntax, "malformed decimal '" + text + "'");
    mpz_class digits(intpart + fracpart, 10);
    mpz_class den = 1;
    for (size_t i = 0; i < fracpart.size(); ++i) den *= 10;
    mpq_class q(digits, den);
    q.canonicalize();
    if (negative) q = -q;
    return Rational(q);
  }

  try {
    return Rational(mpq_class(mpz_class(s, 10)));
  } catch (const std::invalid_argument&) {
    fail(ErrorCode::Syntax, "malformed number '" + text + "'");
  }
}

std::string Rational::str() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::string Rational::decimal_str() const {
  std::ostringstream os;
  os.precision(6);
  os << to_double();
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace plog
