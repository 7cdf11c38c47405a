#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zstab {

enum class Errc {
  domain,                     // argument outside a function's domain
  precondition,               // operation precondition violated
  unsupported,                // operation not defined for this representation
  uninhabited_zero_set,       // empty zero set where a member is required
  well_behavedness_violation, // f vanishes at a point bounded away from Z
  modulus_failure,            // a stopper could not produce delta > 0
  cannot_certify,             // certified lower bound did not become positive
  budget_exhausted,           // refinement budget ran out before resolution
  tail_not_separated,         // enumeration tail never leaves the region
  parse,                      // malformed serialized input
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::domain: return "domain error";
    case Errc::precondition: return "precondition error";
    case Errc::unsupported: return "unsupported variant";
    case Errc::uninhabited_zero_set: return "uninhabited zero set";
    case Errc::well_behavedness_violation: return "well-behavedness violation";
    case Errc::modulus_failure: return "modulus failure";
    case Errc::cannot_certify: return "cannot certify positivity";
    case Errc::budget_exhausted: return "budget exhausted";
    case Errc::tail_not_separated: return "tail does not separate from X";
    case Errc::parse: return "parse error";
  }
  return "unknown error";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& detail) { throw Error(code, detail); }

inline void require(bool condition, Errc code, const std::string& detail) {
  if (!condition) fail(code, detail);
}

}  // namespace zstab
