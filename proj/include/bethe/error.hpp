#pragma once

#include <stdexcept>
#include <string>

namespace bethe {

/// Base class for every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& what) : Error("invalid_argument", what) {}
};

struct ShapeMismatch : Error {
    explicit ShapeMismatch(const std::string& what) : Error("shape_mismatch", what) {}
};

/// Exact enumeration requested beyond the supported node count.
struct CapacityError : Error {
    explicit CapacityError(const std::string& what) : Error("capacity", what) {}
};

/// Pseudomarginals violate the local polytope constraints.
struct InconsistentMarginals : Error {
    explicit InconsistentMarginals(const std::string& what) : Error("inconsistent_marginals", what) {}
};

/// A reconstructed probability sits at (or below) the clamp floor where a
/// logarithm or reciprocal is required.
struct BoundaryMarginals : Error {
    explicit BoundaryMarginals(const std::string& what) : Error("boundary_marginals", what) {}
};

struct NumericalError : Error {
    explicit NumericalError(const std::string& what) : Error("numerical", what) {}
};

/// An operation that needs at least one converged BP run found none.
struct NoConvergedRuns : Error {
    explicit NoConvergedRuns(const std::string& what) : Error("no_converged_runs", what) {}
};

}  // namespace bethe
