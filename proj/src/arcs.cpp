#include "hcone/arcs.hpp"

#include <algorithm>
#include <cmath>

namespace hcone {

namespace {

// Occupied circular interval during validation (arc or tail envelope).
struct Occupied {
  double start;
  double length;
};

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

}  // namespace

ArcFamily ArcFamily::validate(std::vector<Arc> arcs, std::optional<TailRule> tail) {
  ArcFamily fam;

  for (auto& a : arcs) {
    if (!(a.half_angle > 0.0) || !(a.half_angle < kPi)) {
      throw BadHalfAngle("arc half-angle must lie strictly between 0 and pi");
    }
    a.center = normalize_angle(a.center);
  }
  std::sort(arcs.begin(), arcs.end(),
            [](const Arc& a, const Arc& b) { return a.center < b.center; });

  double tail_d = 0.0;
  if (tail) {
    if (!(tail->ratio > 0.0) || !(tail->ratio < 1.0)) {
      throw BadTail("tail ratio must lie strictly between 0 and 1");
    }
    if (!(tail->first_half_angle > 0.0) || !(tail->first_half_angle < kPi / 2)) {
      throw BadTail("tail half-angles must lie strictly between 0 and pi/2");
    }
    tail->accumulate_at = normalize_angle(tail->accumulate_at);
    tail->first_center = normalize_angle(tail->first_center);
    // Signed angular offset of the first tail center from the accumulation
    // ray, reduced the short way; its sign is the side the tail lives on.
    tail_d = signed_angle_diff(tail->first_center, tail->accumulate_at);
    if (std::fabs(tail_d) <= kAngleTol) {
      throw BadTail("tail first_center must differ from accumulate_at");
    }
    // Consecutive tail arcs are disjoint iff rho*(|d| + alpha0) <= |d| - alpha0.
    const double amax =
        std::fabs(tail_d) * (1.0 - tail->ratio) / (1.0 + tail->ratio);
    if (!(tail->first_half_angle <= amax + kAngleTol)) {
      throw BadTail(
          "tail arcs overlap: first_half_angle must not exceed "
          "|first_center - accumulate_at| * (1 - ratio) / (1 + ratio)");
    }
    if (std::fabs(tail_d) + tail->first_half_angle >= kTwoPi - kAngleTol) {
      throw BadTail("tail envelope must not wrap the whole circle");
    }
  }

  // Disjointness and complementary arcs: every arc occupies
  // [c - alpha, c + alpha]; an entire tail occupies the envelope from the
  // accumulation ray to the outer edge of its first arc.
  std::vector<Occupied> occ;
  occ.reserve(arcs.size() + 1);
  for (const Arc& a : arcs) {
    occ.push_back({normalize_angle(a.center - a.half_angle), 2.0 * a.half_angle});
  }
  if (tail) {
    const double len = std::fabs(tail_d) + tail->first_half_angle;
    const double start = tail_d > 0.0
                             ? tail->accumulate_at
                             : normalize_angle(tail->first_center - tail->first_half_angle);
    occ.push_back({start, len});
  }

  std::vector<CircularInterval> gaps;
  if (occ.empty()) {
    gaps.push_back({0.0, kTwoPi});  // empty family: the whole circle is a gap
  } else {
    std::sort(occ.begin(), occ.end(),
              [](const Occupied& a, const Occupied& b) { return a.start < b.start; });
    double total = 0.0;
    for (const auto& o : occ) total += o.length;
    if (total > kTwoPi + kAngleTol) {
      throw OverlappingArcs("arcs overlap: total length exceeds the circle");
    }
    for (std::size_t i = 0; i < occ.size(); ++i) {
      const Occupied& cur = occ[i];
      const Occupied& nxt = occ[(i + 1) % occ.size()];
      const double end = cur.start + cur.length;
      double gap = (i + 1 < occ.size()) ? nxt.start - end
                                        : nxt.start + kTwoPi - end;
      if (gap < -kAngleTol) {
        throw OverlappingArcs("arcs overlap");
      }
      if (gap > kAngleTol) {
        gaps.push_back({normalize_angle(end), gap});
      }
    }
    std::sort(gaps.begin(), gaps.end(),
              [](const CircularInterval& a, const CircularInterval& b) {
                return a.start < b.start;
              });
  }

  fam.arcs_ = std::move(arcs);
  fam.gaps_ = std::move(gaps);
  fam.tail_ = tail;
  fam.tail_d_ = tail_d;
  return fam;
}

const TailRule& ArcFamily::tail() const {
  if (!tail_) throw NoTail("family has no geometric tail");
  return *tail_;
}

Arc ArcFamily::tail_arc(int k) const {
  const TailRule& tr = tail();  // throws NoTail when finite
  const double rk = std::pow(tr.ratio, k);
  return {normalize_angle(tr.accumulate_at + tail_d_ * rk), tr.first_half_angle * rk};
}

Arc ArcFamily::arc_at(int index) const {
  if (index < static_cast<int>(arcs_.size())) return arcs_[index];
  return tail_arc(index - static_cast<int>(arcs_.size()));
}

bool ArcFamily::is_covering() const {
  return finite() && !arcs_.empty() && gaps_.empty();
}

double ArcFamily::total_arc_length() const {
  double total = 0.0;
  for (const Arc& a : arcs_) total += 2.0 * a.half_angle;
  if (tail_) total += 2.0 * tail_->first_half_angle / (1.0 - tail_->ratio);
  return total;
}

namespace {

// Classify theta against a single arc; returns true when it matched.
bool classify_against_arc(double theta, const Arc& a, int index, SectorLocation& out) {
  const double db = signed_angle_diff(theta, a.center);
  if (std::fabs(db) <= kAngleTol) {
    out = {SectorLocation::Kind::OnBisectrix, index, HalfSide::Upper, 0};
    return true;
  }
  if (std::fabs(signed_angle_diff(theta, a.center - a.half_angle)) <= kAngleTol) {
    out = {SectorLocation::Kind::OnBoundaryRay, index, HalfSide::Lower, 0};
    return true;
  }
  if (std::fabs(signed_angle_diff(theta, a.center + a.half_angle)) <= kAngleTol) {
    out = {SectorLocation::Kind::OnBoundaryRay, index, HalfSide::Upper, 1};
    return true;
  }
  if (std::fabs(db) < a.half_angle) {
    out = {SectorLocation::Kind::InsideI, index,
           db > 0.0 ? HalfSide::Upper : HalfSide::Lower, 0};
    return true;
  }
  return false;
}

}  // namespace

SectorLocation ArcFamily::locate(Vec2 v) const {
  if (v.x == 0.0 && v.y == 0.0) {
    throw OriginQuery("locate: the origin belongs to every sector closure");
  }
  const double theta = normalize_angle(std::atan2(v.y, v.x));
  SectorLocation loc;

  // Finite prefix: only the cyclic neighbors of theta in center order can
  // contain it (arcs are disjoint), so two candidates suffice.
  const int n = static_cast<int>(arcs_.size());
  if (n > 0) {
    int hi = static_cast<int>(
        std::upper_bound(arcs_.begin(), arcs_.end(), theta,
                         [](double t, const Arc& a) { return t < a.center; }) -
        arcs_.begin());
    const int cand[2] = {(hi - 1 + n) % n, hi % n};
    for (int c : cand) {
      if (classify_against_arc(theta, arcs_[c], c, loc)) return loc;
    }
  }

  // Geometric tail: resolve the arc index from the distance to the
  // accumulation ray (the envelope shrinks geometrically, so the candidate
  // index is log of that distance).
  if (tail_) {
    const TailRule& tr = *tail_;
    const double da = signed_angle_diff(theta, tr.accumulate_at);
    if (std::fabs(da) <= kAngleTol) {
      return {SectorLocation::Kind::InsideTailGap, -1, HalfSide::Upper, 0};
    }
    const double ad = std::fabs(tail_d_);
    const double a0 = tr.first_half_angle;
    if (sign_of(da) == sign_of(tail_d_) && std::fabs(da) <= ad + a0 + kAngleTol) {
      const double kr = std::log(std::fabs(da) / (ad + a0)) / std::log(tr.ratio);
      const long k0 = std::lround(std::floor(kr));
      const long klo = std::max(0L, k0 - 2), khi = k0 + 2;
      for (long k = klo; k <= khi; ++k) {
        const Arc ak = tail_arc(static_cast<int>(k));
        if (classify_against_arc(theta, ak, n + static_cast<int>(k), loc)) return loc;
      }
      for (long k = klo; k <= khi; ++k) {
        const double rk = std::pow(tr.ratio, k);
        const bool below_inner_edge = std::fabs(da) < (ad - a0) * rk;
        const bool above_next_outer = std::fabs(da) > (ad + a0) * rk * tr.ratio;
        if (below_inner_edge && above_next_outer) {
          return {SectorLocation::Kind::InsideTailGap, static_cast<int>(k),
                  HalfSide::Upper, 0};
        }
      }
      // Deeper than the candidate window resolves (angular scale below
      // tolerance near the accumulation ray).
      return {SectorLocation::Kind::InsideTailGap, -1, HalfSide::Upper, 0};
    }
  }

  // Complementary arc: the gap whose start is theta's cyclic predecessor.
  if (!gaps_.empty()) {
    const int m = static_cast<int>(gaps_.size());
    int hi = static_cast<int>(
        std::upper_bound(gaps_.begin(), gaps_.end(), theta,
                         [](double t, const CircularInterval& g) { return t < g.start; }) -
        gaps_.begin());
    const int g = (hi - 1 + m) % m;
    const double pos = normalize_angle(theta - gaps_[g].start);
    if (gaps_[g].full_circle() || pos <= gaps_[g].length + kAngleTol) {
      return {SectorLocation::Kind::InsideJ, g, HalfSide::Upper, 0};
    }
  }
  throw Error("locate: point matched no sector (internal error)");
}

ArcFamily ArcFamily::truncated(int tail_count) const {
  const TailRule& tr = tail();  // throws NoTail when finite
  (void)tr;
  std::vector<Arc> arcs = arcs_;
  arcs.reserve(arcs.size() + static_cast<std::size_t>(std::max(0, tail_count)));
  for (int k = 0; k < tail_count; ++k) arcs.push_back(tail_arc(k));
  return validate(std::move(arcs));
}

}  // namespace hcone
