#pragma once

#include <cstdint>
#include <limits>

#include "conegap/exterior.hpp"
#include "conegap/grassmann.hpp"
#include "conegap/rng.hpp"

namespace conegap {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// C_{pi,a} = { x : ||(I - pi) x|| <= a ||pi x|| } with pi = F F* the
/// orthogonal projection onto the span of the frame F.
class ProjectiveCone {
 public:
  ProjectiveCone(Frame frame, double aperture);

  /// F spanned by the first p coordinates of C^n.
  static ProjectiveCone coordinate(Index n, Index p, double aperture);

  const Frame& frame() const { return frame_; }
  double aperture() const { return aperture_; }
  Index ambient_dim() const { return frame_.ambient_dim(); }
  Index dim() const { return frame_.dim(); }

  /// Same projection, different aperture.
  ProjectiveCone with_aperture(double aperture) const { return {frame_, aperture}; }

  CVector project(const CVector& x) const;
  CVector complement(const CVector& x) const;

  /// Orthonormal basis of the range of I - pi (n x (n - p)).
  CMatrix complement_basis() const;

 private:
  Frame frame_;
  double aperture_;
};

/// a ||pi x|| - ||(I - pi) x||; nonnegative exactly on the cone.
double margin(const ProjectiveCone& cone, const CVector& x);
bool contains(const ProjectiveCone& cone, const CVector& x);

/// Sufficient test for B(x, rho ||x||) inside the cone:
/// ||(I-pi)x|| + rho||x|| <= a (||pi x|| - rho||x||) with ||pi x|| > rho||x||.
bool contains_rho(const ProjectiveCone& cone, const CVector& x, double rho);

/// A rho for which every vector of C_{pi,inner} passes contains_rho:
/// (a - inner) / ((1 + a) sqrt(1 + inner^2)).
double rho_for_aperture(const ProjectiveCone& cone, double inner_aperture);

/// Smallest a' with V inside C_{pi,a'}: ||(I-pi) Q (F* Q)^{-1}||. Infinite
/// when F* Q is singular.
double subspace_aperture(const ProjectiveCone& cone, const Subspace& v);

/// Random unit vector of the cone; on the boundary when `on_boundary`,
/// otherwise with aperture ratio drawn uniformly in [0, a].
CVector sample_cone_vector(const ProjectiveCone& cone, Rng& rng, bool on_boundary);

/// Random p-dimensional subspace with subspace_aperture exactly `aperture`
/// (the graph of a random map F -> range(I - pi) with that operator norm).
Subspace sample_cone_subspace(const ProjectiveCone& cone, Rng& rng, double aperture);

/// E_C(x, y) = { z : z x - y not in C } = { A|z|^2 - 2 Re(conj(B) z) + C0 > 0 }.
struct GaugeRegion {
  enum class Kind { Empty, Disk, Halfplane, Degenerate };

  double a = 0.0;
  Complex b = 0.0;
  double c0 = 0.0;
  Kind kind = Kind::Empty;
  Complex center = 0.0;  // b / a for disks
  double radius = 0.0;

  /// Sign convention: positive exactly when z x - y lies outside the cone.
  double evaluate(Complex z) const {
    return a * std::norm(z) - 2.0 * (std::conj(b) * z).real() + c0;
  }
};

/// Requires x, y in the cone (ConeMembership otherwise).
GaugeRegion gauge_region(const ProjectiveCone& cone, const CVector& x, const CVector& y);

/// log(sup|E| / inf|E|); 0 for collinear or when the span lies in the cone,
/// +inf when the region is unbounded.
double gauge_delta(const ProjectiveCone& cone, const CVector& x, const CVector& y);

/// Sectional gauge: 0 when span(x, y) is inside the cone, else gauge_delta.
double d1(const ProjectiveCone& cone, const CVector& x, const CVector& y);

/// gauge_delta computed from cone membership alone: locate a point of
/// E_C(x, y), bisect the boundary along rays from it and maximize or
/// minimize |z| over the boundary. Assumes E_C is convex. Slow; meant as a
/// cross-check.
double gauge_delta_search(const ProjectiveCone& cone, const CVector& x, const CVector& y,
                          int directions = 360);

struct SearchBudget {
  int starts = 32;
  int iterations = 300;
  std::uint64_t seed = 0;
};

struct ConeDistanceEstimate {
  double lower = 0.0;
  double upper = kInfinity;
  std::size_t evaluations = 0;
};

/// Bracket for sup_{x in V, y in W} d1(x, y): the lower side is the best
/// value found by multistart Nelder-Mead over both unit spheres, the upper
/// side is diameter_bound(a', a) when both spaces sit in C_{pi,a'}, a' < a.
ConeDistanceEstimate cone_distance(const ProjectiveCone& cone, const Subspace& v,
                                   const Subspace& w, const SearchBudget& budget = {});

/// 2 log((outer + inner) / (outer - inner)), for 0 < inner < outer.
double diameter_bound(double a_inner, double a_outer);

struct Aperture {
  ApertureMap m;
  double k = 0.0;
};

/// m = F* (so ||m|| = 1) and K = sqrt(1 + a^2): ||x|| <= K |m(x)| on the cone.
Aperture aperture_map(const ProjectiveCone& cone);

struct ConeMappingCheck {
  bool sampled_ok = false;
  bool certified = false;
  double worst_margin = kInfinity;
  /// Smallest destination aperture the blockwise bound certifies (+inf if none).
  double certified_aperture = kInfinity;
};

/// Does T map src* = C_{pi,b}* into dst* = C_{pi,a}*? Both cones must share
/// the projection. `sampled_ok` checks unit samples of src (half of them on
/// the boundary); `certified` is the blockwise bound
/// ||(I-pi)T pi|| + b ||(I-pi)T(I-pi)|| <= a (sigma_min(F*TF) - b ||pi T (I-pi)||).
ConeMappingCheck check_maps_cone(const CMatrix& t, const ProjectiveCone& src,
                                 const ProjectiveCone& dst, int samples,
                                 std::uint64_t seed = 0);

}  // namespace conegap
