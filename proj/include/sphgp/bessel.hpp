#pragma once

namespace sphgp {

// Modified Bessel function of the second kind K_order(x) for real order >= 0
// and x > 0. Uses Temme's series (x <= 2) or Steed's continued fraction
// (x > 2) for the fractional order |mu| <= 1/2, then forward recurrence up to
// the requested order. Integer and near-integer orders need no special case.
// Throws DomainError for x <= 0 or negative order.
double bessel_k(double order, double x);

}  // namespace sphgp
