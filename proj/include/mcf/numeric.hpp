#pragma once

#include <gmpxx.h>

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace mcf {

// Natural log of a positive big integer or rational without overflow.
double log_of(const mpz_class& z);
double log_of(const mpq_class& q);

// log(sum exp(x_i)) in a fixed left-to-right order.
double log_sum_exp(const std::vector<double>& xs);

// "2/5" or "3" -> exact rational; throws std::invalid_argument.
mpq_class parse_rational(std::string_view text);
// "2/5,3/5" -> vector.
std::vector<mpq_class> parse_rational_list(std::string_view text);

std::string to_string(const mpq_class& q);

// Divide each entry by the sum; throws unless every entry is strictly positive.
std::vector<mpq_class> normalized(std::vector<mpq_class> v);

}  // namespace mcf
