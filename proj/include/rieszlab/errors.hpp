#pragma once

#include <stdexcept>
#include <string>

namespace rieszlab {

// A configuration with coincident or otherwise unusable points.
struct DegenerateConfiguration : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown by derivative evaluations when a sphere point sits inside the pole
// guard band of the polar parametrization; callers re-align and retry.
struct AlignmentRequired : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// No admissible rotation was found by the bounded alignment search.
struct AlignmentError : std::runtime_error {
    AlignmentError(const std::string& msg, double closest_approach_)
        : std::runtime_error(msg), closest_approach(closest_approach_) {}
    double closest_approach;  // best min(theta, pi-theta) seen over all attempts
};

// Random initialization could not reach the requested separation.
struct InitFailure : std::runtime_error {
    InitFailure(const std::string& msg, long attempts_)
        : std::runtime_error(msg), attempts(attempts_) {}
    long attempts;
};

// Line search failed repeatedly and descent cannot make progress.
struct StagnationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input outside what an algorithm supports (hemispheric point sets,
// non-simple Voronoi vertices, too few points, ...).
struct UnsupportedConfiguration : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed text input; carries the 1-based line number.
struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line_)
        : std::runtime_error(msg), line(line_) {}
    int line;
};

// Well-formed input that fails a semantic check (e.g. a point far from the
// unit sphere).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Least-squares fit could not be performed (rank deficiency, bad arguments).
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rieszlab
