#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hypstab/charfn.hpp"

namespace hypstab {

/// Analytic function with its derivative, evaluated together.
using AnalyticFn = std::function<DeltaValue(cplx)>;

AnalyticFn as_analytic(const CharFn& f);

struct SearchRect {
    double re_min = 0.0, re_max = 1.0;
    double im_min = -1.0, im_max = 1.0;

    double width() const { return re_max - re_min; }
    double height() const { return im_max - im_min; }
    double diagonal() const;
    cplx center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
    bool contains(cplx s, double slack = 0.0) const;
};

struct RootConfig {
    double boundary_rel_tol = 1e-12;  ///< |f| on the contour below tol * scale is a collision
    int max_nudges = 5;
    double nudge_fraction = 1e-4;     ///< of the diagonal, per nudge
    int max_edge_depth = 40;
    double min_box_diagonal = 1e-8;
    double cluster_diagonal = 1e-6;   ///< boxes with winding >= 2 below this are clusters
    int newton_max_steps = 50;
    double newton_step_tol = 1e-12;
};

struct WindingResult {
    int count = 0;
    double deviation = 0.0;  ///< |phase / 2 pi - count|
    long samples = 0;
    int nudges = 0;
    SearchRect rect;  ///< rectangle actually used after nudging
};

/// Zeros of f inside r (counted with multiplicity) from the total phase change along the
/// positively oriented boundary. `scale` sets the collision threshold. Throws
/// BoundaryTooCloseError when the boundary meets a zero; see winding_count_nudged.
WindingResult winding_count(const AnalyticFn& f, const SearchRect& r, double scale,
                            const RootConfig& cfg = {});

/// As winding_count, shifting the rectangle by a deterministic sequence of offsets on
/// boundary collisions.
WindingResult winding_count_nudged(const AnalyticFn& f, const SearchRect& r, double scale,
                                   const RootConfig& cfg = {});

WindingResult winding_count(const CharFn& f, const SearchRect& r, const RootConfig& cfg = {});

struct LocatedRoot {
    cplx s;
    int multiplicity = 1;
    double residual = 0.0;
};

struct RootSet {
    std::vector<LocatedRoot> roots;     ///< sorted by (Im, Re)
    std::vector<SearchRect> unresolved;  ///< boxes where refinement failed
    int total_count = 0;                 ///< winding count of the whole rectangle
    SearchRect rect;
    long evaluations = 0;
};

/// Recursive quadrisection down to boxes with one zero, then Newton from the box center.
RootSet find_all_roots(const AnalyticFn& f, const SearchRect& r, double scale,
                       const RootConfig& cfg = {});
RootSet find_all_roots(const CharFn& f, const SearchRect& r, const RootConfig& cfg = {});

/// Rectangle {0 <= Re s <= re_max, |Im s| <= omega_max} holding every root with Re s >= 0.
SearchRect right_half_plane_rect(const CharFn& f, double omega_max);

/// CSV with header re,im,multiplicity,residual.
void write_roots_csv(std::ostream& os, const RootSet& roots);

}  // namespace hypstab
