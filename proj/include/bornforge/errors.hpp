#pragma once

#include <stdexcept>
#include <string>

namespace bornforge {

/** Base class for all errors raised by the verification kernel. */
class KernelError : public std::logic_error {
 public:
  explicit KernelError(const std::string& message) : std::logic_error(message) {}
};

/** Matrix shapes incompatible for sequential composition. */
class DimensionMismatch : public KernelError {
 public:
  using KernelError::KernelError;
};

/** Domain/codomain objects do not match where the operation requires it. */
class ObjectMismatch : public KernelError {
 public:
  using KernelError::KernelError;
};

/** Matrix expected to be positive semidefinite has an eigenvalue below -tol. */
class NotPSD : public KernelError {
 public:
  using KernelError::KernelError;
};

/** Input columns are not pairwise orthonormal within tolerance. */
class NotOrthonormal : public KernelError {
 public:
  using KernelError::KernelError;
};

/** Morphism fails the theory's membership predicate for its role. */
class NotMember : public KernelError {
 public:
  using KernelError::KernelError;
};

/** Operation defined only for simplified theories. */
class NotSimplified : public KernelError {
 public:
  using KernelError::KernelError;
};

/** The theory provides no sampler for the requested member set. */
class SamplerUnavailable : public KernelError {
 public:
  using KernelError::KernelError;
};

/** Invalid construction parameters (e.g. exponent k <= 0). */
class BadParams : public KernelError {
 public:
  using KernelError::KernelError;
};

/** The theory registers no discard effect family. */
class NoDiscard : public KernelError {
 public:
  using KernelError::KernelError;
};

/** No canonical form is registered for this theory; probe mode only. */
class UnsupportedTheory : public KernelError {
 public:
  using KernelError::KernelError;
};

/** Operator norm exceeds 1 beyond tolerance; dilation requires a contraction. */
class NotContraction : public KernelError {
 public:
  using KernelError::KernelError;
};

/** Value outside the realized probability range. */
class OutOfRange : public KernelError {
 public:
  using KernelError::KernelError;
};

/** Weighted set grew past the configured item cap. */
class CapacityExceeded : public KernelError {
 public:
  using KernelError::KernelError;
};

/** A planted fault survived the verification suite; build-failing. */
class UndetectedMutant : public KernelError {
 public:
  using KernelError::KernelError;
};

/** Matrix literal does not match the declared shape. */
class ShapeError : public KernelError {
 public:
  using KernelError::KernelError;
};

/** Referenced object name was never declared. */
class UnknownObject : public KernelError {
 public:
  using KernelError::KernelError;
};

/** Theory/weighted-set text is malformed; carries the source location. */
class ParseError : public KernelError {
 public:
  ParseError(const std::string& message, int line, int column)
      : KernelError(message + " (line " + std::to_string(line) + ", column " +
                    std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace bornforge
