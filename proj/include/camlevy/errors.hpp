#pragma once

#include <stdexcept>

namespace camlevy {

/// Parameter or configuration outside the supported domain. The CLI maps
/// this to exit code 2.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure (quadrature, minimization, integration) failed to
/// produce a trustworthy result. The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace camlevy
