#pragma once

#include <stdexcept>
#include <string>

namespace gaborwf {

/// Base class for every failure raised by the library. `code()` is a stable
/// machine-readable identifier used by the CLI error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define GABORWF_DEFINE_ERROR(Name)                                    \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  };

GABORWF_DEFINE_ERROR(DomainError)
GABORWF_DEFINE_ERROR(GridMismatch)
GABORWF_DEFINE_ERROR(UnsupportedAtom)
GABORWF_DEFINE_ERROR(NotAFrame)
GABORWF_DEFINE_ERROR(BadPartition)
GABORWF_DEFINE_ERROR(DegenerateFit)
GABORWF_DEFINE_ERROR(NotSymplectic)
GABORWF_DEFINE_ERROR(NearSingularTime)

#undef GABORWF_DEFINE_ERROR

class NoConvergence : public Error {
 public:
  NoConvergence(int iterations, double residual)
      : Error("NoConvergence", "no convergence after " + std::to_string(iterations) +
                                   " iterations (residual " + std::to_string(residual) + ")"),
        iterations_(iterations),
        residual_(residual) {}

  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

class InsufficientLattice : public Error {
 public:
  explicit InsufficientLattice(int shell)
      : Error("InsufficientLattice",
              "fewer than 3 lattice points in shell " + std::to_string(shell)),
        shell_(shell) {}

  int shell() const noexcept { return shell_; }

 private:
  int shell_;
};

}  // namespace gaborwf
