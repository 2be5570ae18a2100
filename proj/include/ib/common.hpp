#pragma once
// Shared numeric tolerances and error types used across the library.

#include <stdexcept>
#include <string>

namespace ib {

struct Tolerances {
  double tol_feas = 1e-9;   // feasibility slack for linear constraints
  double tol_obj = 1e-8;    // objective accuracy of the LP solver
  double pivot_eps = 1e-11; // smallest admissible simplex pivot
  double rank_eps = 1e-10;  // relative threshold for numerical rank
  double tol_opt = 1e-6;    // accuracy of iterative (non-LP) minimizations
};

// Global tolerance block; configurable, defaults as above.
Tolerances& tols();

struct IbError : std::runtime_error {
  explicit IbError(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : IbError { using IbError::IbError; };
struct NumericalBreakdown : IbError { using IbError::IbError; };
struct Inconsistent : IbError { using IbError::IbError; };
struct EmptySubspace : IbError { using IbError::IbError; };
struct UnsupportedBody : IbError { using IbError::IbError; };
struct NotOnHyperplane : IbError { using IbError::IbError; };
struct DegenerateInput : IbError { using IbError::IbError; };
struct EmptyIntersection : IbError { using IbError::IbError; };
struct IndexOutOfGrid : IbError { using IbError::IbError; };
struct InfeasibleCredalSet : IbError { using IbError::IbError; };
struct QueryOutsideBody : IbError { using IbError::IbError; };
struct InfeasiblePreimage : IbError { using IbError::IbError; };
struct NoApplicableMethod : IbError { using IbError::IbError; };
struct ZeroGap : IbError { using IbError::IbError; };
struct HypothesisEliminated : IbError { using IbError::IbError; };
struct EmptyConfidenceSet : IbError { using IbError::IbError; };
struct SingularX : IbError { using IbError::IbError; };
struct OutcomeOutsideBody : IbError { using IbError::IbError; };
struct IncompatibleMean : IbError { using IbError::IbError; };

}  // namespace ib
