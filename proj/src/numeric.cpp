#include "mcf/numeric.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace mcf {

double log_of(const mpz_class& z) {
  if (z <= 0) throw std::domain_error("log of a non-positive integer");
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

double log_of(const mpq_class& q) { return log_of(mpz_class(q.get_num())) - log_of(mpz_class(q.get_den())); }

double log_sum_exp(const std::vector<double>& xs) {
  if (xs.empty()) return -std::numeric_limits<double>::infinity();
  double m = *std::max_element(xs.begin(), xs.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

mpq_class parse_rational(std::string_view text) {
  std::string t(text);
  t.erase(std::remove_if(t.begin(), t.end(), [](char c) { return c == ' ' || c == '\t'; }), t.end());
  if (t.empty()) throw std::invalid_argument("empty rational");
  auto valid = [](const std::string& s) {
    if (s.empty()) return false;
    size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (start == s.size()) return false;
    return std::all_of(s.begin() + static_cast<long>(start), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  size_t slash = t.find('/');
  std::string num = t.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : t.substr(slash + 1);
  if (!valid(num) || !valid(den)) throw std::invalid_argument("malformed rational '" + t + "'");
  if (num[0] == '+') num.erase(0, 1);
  if (den[0] == '+') den.erase(0, 1);
  mpq_class q{mpz_class(num), mpz_class(den)};
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + t + "'");
  q.canonicalize();
  return q;
}

std::vector<mpq_class> parse_rational_list(std::string_view text) {
  std::vector<mpq_class> out;
  size_t start = 0;
  while (true) {
    size_t comma = text.find(',', start);
    out.push_back(parse_rational(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string to_string(const mpq_class& q) { return q.get_str(); }

std::vector<mpq_class> normalized(std::vector<mpq_class> v) {
  mpq_class s = 0;
  for (const auto& x : v) {
    if (x <= 0) throw std::invalid_argument("coordinates must be strictly positive");
    s += x;
  }
  for (auto& x : v) x /= s;
  return v;
}

}  // namespace mcf
