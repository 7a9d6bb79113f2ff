#ifndef RALLYSHAP_ERROR_H_
#define RALLYSHAP_ERROR_H_

#include <stdexcept>
#include <string>

namespace rallyshap {

// A caller broke a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Input data failed a domain invariant (bad rows, invalid rallies).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void Require(bool condition, const std::string& message) {
  if (!condition) throw ContractViolation(message);
}

}  // namespace rallyshap

#endif  // RALLYSHAP_ERROR_H_
