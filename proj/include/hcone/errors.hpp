#pragma once

#include <stdexcept>
#include <string>

namespace hcone {

// Base class for all domain errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An arc was given a half-angle outside the open interval (0, pi).
struct BadHalfAngle : Error {
  using Error::Error;
};

// Two arcs of a family have overlapping interiors.
struct OverlappingArcs : Error {
  using Error::Error;
};

// A geometric tail rule is malformed (bad ratio, arcs too wide to stay
// disjoint, or the tail envelope collides with the finite prefix).
struct BadTail : Error {
  using Error::Error;
};

// Sector location was requested for the origin, which belongs to every
// sector closure and has no well-defined angular position.
struct OriginQuery : Error {
  using Error::Error;
};

// A characteristic ray was requested through a point of the singular set
// (the apex or a bisectrix ray), where no unique characteristic line exists.
struct SingularPoint : Error {
  using Error::Error;
};

// A tail-specific operation (oscillation probe, truncation study) was
// requested for a family without a geometric tail.
struct NoTail : Error {
  using Error::Error;
};

// A finite-family-only operation (singular set, calibration, meshing) was
// requested for an infinite family; truncate it first.
struct InfiniteFamily : Error {
  using Error::Error;
};

// Classification was requested for a surface that is not C^1.
struct NotC1 : Error {
  using Error::Error;
};

// An input document (arc-family JSON, curve CSV) is malformed or a file
// could not be read.
struct BadInput : Error {
  using Error::Error;
};

}  // namespace hcone
