#ifndef HELFRICH_ERRORS_HPP
#define HELFRICH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace helfrich {

// Evaluation at a singular point of the profile system (r = 0 or z = 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Successive stop-threshold levels failed to contract.
class ExtrapolationDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two caps do not share an equator radius within tolerance.
class RadiusMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Discoid arcsine argument left [-1, 1] inside the requested radial range.
class DomainExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace helfrich

#endif
