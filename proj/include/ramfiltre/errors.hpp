#pragma once

#include <stdexcept>
#include <string>

namespace ramfiltre {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A query or spec lies outside the supported domain (bad hypothesis, bad
// range, formula window not satisfied).  The message names the first
// violated clause.
struct DomainError : Error {
  using Error::Error;
};

// An exact division came out inexact.  Every division in the closed forms
// is provably exact, so this signals a transcription bug (or an active
// formula mutation in the verification harness).
struct IntegralityError : Error {
  using Error::Error;
};

// Jumps that must be strictly increasing are not.
struct OrderingError : Error {
  using Error::Error;
};

// Two redundant computations of the same data disagree (e.g. the jump
// family enumeration versus the tower walk).
struct ConsistencyError : Error {
  using Error::Error;
};

// The rewrite engine found no applicable rule; the rule system is meant to
// be total, so this is a bug, not a user error.
struct UnreachableError : Error {
  using Error::Error;
};

// Internal invariant broke (runaway loop guard, impossible state).
struct InternalError : Error {
  using Error::Error;
};

}  // namespace ramfiltre
