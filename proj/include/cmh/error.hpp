#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cmh {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the domain an operation is defined on.
class DomainError : public Error {
public:
  using Error::Error;
};

/// A finite-difference query asked for Δ^k a_n with n + k beyond the prefix.
class IndexOutOfRange : public Error {
public:
  IndexOutOfRange(std::size_t k, std::size_t n, std::size_t last)
      : Error("difference index out of range: k=" + std::to_string(k) +
              ", n=" + std::to_string(n) + ", N=" + std::to_string(last)),
        k_(k), n_(n) {}

  std::size_t k() const noexcept { return k_; }
  std::size_t n() const noexcept { return n_; }

private:
  std::size_t k_;
  std::size_t n_;
};

class LengthMismatch : public Error {
public:
  using Error::Error;
};

/// Evaluation point lies on, or within 1e-12 of, the cut [1, +inf).
class SlitProximity : public Error {
public:
  using Error::Error;
};

/// |h'(z)| fell below the singular-derivative floor.
class SingularDerivative : public Error {
public:
  using Error::Error;
};

/// A numerical procedure stopped without meeting its tolerance.
class Inconclusive : public Error {
public:
  Inconclusive(const std::string &what, double error_estimate)
      : Error(what), error_estimate_(error_estimate) {}

  double error_estimate() const noexcept { return error_estimate_; }

private:
  double error_estimate_;
};

} // namespace cmh
