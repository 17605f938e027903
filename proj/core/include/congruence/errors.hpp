#pragma once

#include <stdexcept>
#include <string>

namespace congruence {

/// Bad argument values (non-finite coefficients, malformed input files, ...).
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A parameter outside its documented range.
struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Evaluation at a flat/umbilic point where a metric or spin-coefficient
/// denominator vanishes.
struct DegeneratePoint : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A zero of the holomorphic slope sits on (or too close to) a search
/// boundary; the caller should shrink or expand the radius.
struct BoundaryZero : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Third derivative of the Weierstrass curve vanishes: branch/umbilic point.
struct UmbilicPointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// First fundamental form degenerate: the map is not an immersion there.
struct ImmersionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A path-dependent square root could not be continued (path meets a zero).
struct BranchAmbiguity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A numeric experiment could not complete; the message carries what is known.
struct ExperimentFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace congruence
