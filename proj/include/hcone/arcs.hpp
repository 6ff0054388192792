#pragma once

// Families of disjoint open arcs on the unit circle.
//
// An arc is the open set {theta : dist(theta, center) < half_angle} with
// center in [0, 2*pi) and half_angle in (0, pi).  A family consists of
// pairwise disjoint arcs (closures may touch), optionally followed by an
// infinite geometric tail: arcs with centers c_k = a + (c_0 - a) * rho^k and
// half-angles alpha_k = alpha_0 * rho^k accumulating at the angle a.
//
// The complement of the closed arcs decomposes into open complementary arcs
// ("gaps"); for the empty family the single gap is the whole circle.  A
// finite nonempty family whose closures cover the circle is "covering".
//
// locate() classifies a nonzero planar point by the sector of the plane it
// falls in: inside the cone 0#I_i over an arc (upper or lower half relative
// to the arc's bisectrix), inside a gap sector 0#J_j, exactly on a bisectrix
// ray, exactly on an arc-endpoint boundary ray, or (infinite families only)
// inside a gap between consecutive tail arcs.  Ray coincidence is decided
// with absolute angular tolerance kAngleTol.

#include <cstddef>
#include <optional>
#include <vector>

#include "hcone/errors.hpp"
#include "hcone/geometry.hpp"

namespace hcone {

struct Arc {
  double center{0.0};      // radians, normalized to [0, 2*pi)
  double half_angle{0.0};  // radians, in (0, pi)
};

// Geometric tail: arcs k = 0, 1, 2, ... with center a + d*rho^k (where
// d = first_center - accumulate_at) and half-angle first_half_angle * rho^k.
struct TailRule {
  double accumulate_at{0.0};
  double first_center{0.0};
  double ratio{0.0};  // in (0, 1)
  double first_half_angle{0.0};
};

// Connected subset of the circle, counterclockwise from `start`, of the
// given angular length in (0, 2*pi].  Used for complementary arcs so the
// full circle (empty family) is representable.
struct CircularInterval {
  double start{0.0};
  double length{0.0};

  double mid() const { return normalize_angle(start + 0.5 * length); }
  bool full_circle() const { return length >= kTwoPi - kAngleTol; }
};

enum class HalfSide { Lower, Upper };  // below / above the arc's bisectrix

struct SectorLocation {
  enum class Kind {
    InsideI,        // open sector over arc `index`; `side` says which half
    InsideJ,        // open sector over complementary arc `index`
    OnBisectrix,    // on the bisectrix ray of arc `index`
    OnBoundaryRay,  // on an endpoint ray of arc `index`; `endpoint` 0 = lower
                    // (clockwise) endpoint, 1 = upper (counterclockwise)
    InsideTailGap,  // infinite families: in the gap just inside tail arc
                    // `index` (index -1: at the accumulation ray)
  };
  Kind kind{Kind::InsideJ};
  int index{0};
  HalfSide side{HalfSide::Upper};
  int endpoint{0};
};

class ArcFamily {
 public:
  // Normalizes centers, sorts by center, derives complementary arcs, and
  // checks disjointness.  Closures touching (shared endpoints within
  // kAngleTol) is allowed and produces no gap there.
  // Throws BadHalfAngle, OverlappingArcs, BadTail.
  static ArcFamily validate(std::vector<Arc> arcs,
                            std::optional<TailRule> tail = std::nullopt);

  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<CircularInterval>& complementary() const { return gaps_; }

  bool has_tail() const { return tail_.has_value(); }
  const TailRule& tail() const;

  std::size_t prefix_size() const { return arcs_.size(); }
  bool finite() const { return !has_tail(); }
  bool empty() const { return arcs_.empty() && !has_tail(); }

  // k-th tail arc (k >= 0).  Throws NoTail for finite families.
  Arc tail_arc(int k) const;

  // Arc by global index: prefix arcs first, then tail arcs.
  Arc arc_at(int index) const;

  // True iff the family is finite, nonempty, and the arc closures cover the
  // whole circle (no gaps).
  bool is_covering() const;

  // Classify a nonzero point.  Throws OriginQuery for v = 0 (the origin
  // belongs to every sector closure).
  SectorLocation locate(Vec2 v) const;

  // Finite family consisting of the prefix plus the first `tail_count` tail
  // arcs.  Throws NoTail for finite families.
  ArcFamily truncated(int tail_count) const;

  // Sum of all arc lengths (2*alpha each); tail summed in closed form.
  double total_arc_length() const;

 private:
  ArcFamily() = default;

  std::vector<Arc> arcs_;              // sorted by center
  std::vector<CircularInterval> gaps_; // complementary arcs, sorted by start
  std::optional<TailRule> tail_;
  double tail_d_{0.0};                 // first_center - accumulate_at, signed
};

}  // namespace hcone
