#ifndef SPPM_ERRORS_HPP
#define SPPM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sppm {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotSPD : Error {
  explicit NotSPD(const std::string& msg = "matrix is not symmetric positive definite")
      : Error(msg) {}
};

struct NonPositiveC : Error {
  explicit NonPositiveC(const std::string& msg = "rank-one solve requires c > 0") : Error(msg) {}
};

struct NoConvergence : Error {
  explicit NoConvergence(const std::string& msg = "iteration cap reached before tolerance")
      : Error(msg) {}
};

struct BadDistribution : Error {
  explicit BadDistribution(const std::string& msg = "probabilities must be nonnegative and sum to 1")
      : Error(msg) {}
};

struct IndexOutOfRange : Error {
  explicit IndexOutOfRange(const std::string& msg = "function index out of range") : Error(msg) {}
};

struct NonPositiveGamma : Error {
  explicit NonPositiveGamma(const std::string& msg = "stepsize must be positive") : Error(msg) {}
};

struct EmptySubset : Error {
  explicit EmptySubset(const std::string& msg = "subset must be nonempty") : Error(msg) {}
};

struct SupportTooLarge : Error {
  explicit SupportTooLarge(const std::string& msg = "sampler support exceeds enumeration cap")
      : Error(msg) {}
};

struct MissingConstant : Error {
  explicit MissingConstant(const std::string& msg) : Error(msg) {}
};

// Thrown when the rate-certificate inequalities fail for the supplied
// (gamma, alpha); `failed_inequality` is 1 or 2.
struct CertificateInvalid : Error {
  int failed_inequality;
  explicit CertificateInvalid(int which,
                              const std::string& msg = "certificate inequality violated")
      : Error(msg + " (inequality " + std::to_string(which) + ")"), failed_inequality(which) {}
};

struct StateMismatch : Error {
  explicit StateMismatch(const std::string& msg = "control state does not match strategy")
      : Error(msg) {}
};

struct DegenerateConstants : Error {
  explicit DegenerateConstants(const std::string& msg) : Error(msg) {}
};

struct Mismatch : Error {
  explicit Mismatch(const std::string& msg) : Error(msg) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

struct IoError : Error {
  explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace sppm

#endif  // SPPM_ERRORS_HPP
