#include "core/rational.hpp"

#include <cctype>
#include <cstdio>

#include "core/errors.hpp"

namespace uail {

Rat pow2_neg(unsigned n) {
  mpz_class den = 1;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), n);
  return Rat(mpz_class(1), den);
}

Rat rat_pow(const Rat& q, unsigned n) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), q.get_num().get_mpz_t(), n);
  mpz_pow_ui(den.get_mpz_t(), q.get_den().get_mpz_t(), n);
  Rat r(num, den);
  r.canonicalize();
  return r;
}

Rat parse_rat(const std::string& text) {
  if (text.empty()) throw SchemaError("empty rational literal");
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '/' && c != '.' &&
        c != '-' && c != '+') {
      throw SchemaError("malformed rational literal: '" + text + "'");
    }
  }
  const auto dot = text.find('.');
  if (dot != std::string::npos) {
    if (text.find('/') != std::string::npos)
      throw SchemaError("malformed rational literal: '" + text + "'");
    // Exact decimal expansion: "0.125" -> 125/1000.
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const size_t frac_len = text.size() - dot - 1;
    if (frac_len == 0 || digits.empty())
      throw SchemaError("malformed rational literal: '" + text + "'");
    mpz_class num;
    if (mpz_set_str(num.get_mpz_t(), digits.c_str(), 10) != 0)
      throw SchemaError("malformed rational literal: '" + text + "'");
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
    Rat r(num, den);
    r.canonicalize();
    return r;
  }
  Rat r;
  if (mpq_set_str(r.get_mpq_t(), text.c_str(), 10) != 0)
    throw SchemaError("malformed rational literal: '" + text + "'");
  if (r.get_den() == 0) throw SchemaError("zero denominator in '" + text + "'");
  r.canonicalize();
  return r;
}

std::string rat_str(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string double_str(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace uail
