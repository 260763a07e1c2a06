#pragma once

#include "qsusy/rational.hpp"

namespace qsusy::detail {

double powi(double base, unsigned k);
double checked_reciprocal(double x);
double real_power(double b, double e);
double checked_log(double x);
int rational_parity(const Rational& q);
double rational_power(double b, double q, int parity);

}  // namespace qsusy::detail
