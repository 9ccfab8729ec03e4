#include "hypstab/roots.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

#include "hypstab/errors.hpp"

namespace hypstab {

AnalyticFn as_analytic(const CharFn& f) {
    return [f](cplx s) { return f.delta_and_prime(s); };
}

double SearchRect::diagonal() const { return std::hypot(width(), height()); }

bool SearchRect::contains(cplx s, double slack) const {
    return s.real() >= re_min - slack && s.real() <= re_max + slack && s.imag() >= im_min - slack &&
           s.imag() <= im_max + slack;
}

namespace {

constexpr double kPi = std::numbers::pi;

class ContourWalker {
public:
    ContourWalker(const AnalyticFn& f, double threshold, const RootConfig& cfg)
        : f_(f), threshold_(threshold), cfg_(cfg) {}

    long samples() const { return samples_; }

    DeltaValue eval(cplx z) {
        ++samples_;
        DeltaValue v = f_(z);
        if (!(std::abs(v.value) > threshold_)) {
            std::ostringstream msg;
            msg << "contour passes within tolerance of a zero at s = " << z;
            throw BoundaryTooCloseError(msg.str());
        }
        return v;
    }

    double edge(cplx z0, cplx z1) {
        constexpr int kInitial = 16;
        double total = 0.0;
        cplx za = z0;
        DeltaValue fa = eval(za);
        for (int i = 1; i <= kInitial; ++i) {
            const cplx zb = (i == kInitial) ? z1 : z0 + (z1 - z0) * (static_cast<double>(i) / kInitial);
            const DeltaValue fb = eval(zb);
            total += segment(za, fa, zb, fb, 0);
            za = zb;
            fa = fb;
        }
        return total;
    }

private:
    double segment(cplx za, const DeltaValue& fa, cplx zb, const DeltaValue& fb, int depth) {
        const double dphi = std::arg(fb.value / fa.value);
        const double len = std::abs(zb - za);
        const double slope = std::max(std::abs(fa.derivative), std::abs(fb.derivative));
        const double smallest = std::min(std::abs(fa.value), std::abs(fb.value));
        const bool refine = std::abs(dphi) > 0.5 * kPi || len * slope > 0.5 * smallest;
        if (!refine) return dphi;
        if (depth >= cfg_.max_edge_depth) {
            throw BoundaryTooCloseError("phase unwrapping stayed ambiguous after maximal refinement");
        }
        const cplx zm = 0.5 * (za + zb);
        const DeltaValue fm = eval(zm);
        return segment(za, fa, zm, fm, depth + 1) + segment(zm, fm, zb, fb, depth + 1);
    }

    const AnalyticFn& f_;
    double threshold_;
    const RootConfig& cfg_;
    long samples_ = 0;
};

SearchRect shifted(const SearchRect& r, double d) {
    return {r.re_min + d, r.re_max + d, r.im_min + 0.618 * d, r.im_max + 0.618 * d};
}

}  // namespace

WindingResult winding_count(const AnalyticFn& f, const SearchRect& r, double scale,
                            const RootConfig& cfg) {
    if (!(r.width() > 0.0) || !(r.height() > 0.0)) {
        throw ParameterError("rect", "search rectangle must have positive width and height");
    }
    ContourWalker walker(f, cfg.boundary_rel_tol * scale, cfg);
    const cplx c00(r.re_min, r.im_min), c10(r.re_max, r.im_min), c11(r.re_max, r.im_max),
        c01(r.re_min, r.im_max);
    const double phase = walker.edge(c00, c10) + walker.edge(c10, c11) + walker.edge(c11, c01) +
                         walker.edge(c01, c00);
    const double turns = phase / (2.0 * kPi);
    WindingResult out;
    out.count = static_cast<int>(std::lround(turns));
    out.deviation = std::abs(turns - out.count);
    out.samples = walker.samples();
    out.rect = r;
    if (out.deviation >= 0.25) {
        std::ostringstream msg;
        msg << "winding number not close to an integer (" << turns << ")";
        throw BoundaryTooCloseError(msg.str());
    }
    if (out.count < 0) throw BoundaryTooCloseError("negative winding number for an analytic function");
    return out;
}

WindingResult winding_count_nudged(const AnalyticFn& f, const SearchRect& r, double scale,
                                   const RootConfig& cfg) {
    const double step = cfg.nudge_fraction * r.diagonal();
    for (int k = 0;; ++k) {
        try {
            WindingResult w = winding_count(f, shifted(r, step * k), scale, cfg);
            w.nudges = k;
            return w;
        } catch (const BoundaryTooCloseError&) {
            if (k >= cfg.max_nudges) throw;
        }
    }
}

WindingResult winding_count(const CharFn& f, const SearchRect& r, const RootConfig& cfg) {
    return winding_count_nudged(as_analytic(f), r, f.scale(), cfg);
}

namespace {

class RootFinder {
public:
    RootFinder(const AnalyticFn& f, double scale, const RootConfig& cfg)
        : f_(f), scale_(scale), cfg_(cfg) {}

    void process(const SearchRect& box, int count) {
        if (count <= 0) return;
        if (count == 1) {
            cplx s;
            if (newton(box, 1, s)) return add(s, 1);
        } else {
            // A multiple root: modified Newton converges only when the cluster is one point.
            cplx s;
            if (newton(box, count, s) && confirm_cluster(box, s, count)) return add(s, count);
            if (box.diagonal() < cfg_.cluster_diagonal) {
                unresolved_.push_back(box);
                return;
            }
        }
        if (box.diagonal() < cfg_.min_box_diagonal) {
            unresolved_.push_back(box);
            return;
        }
        static constexpr std::array<double, 6> kSplits{0.5, 0.5173, 0.4791, 0.5419, 0.4567, 0.5831};
        for (double t : kSplits) {
            const double xm = box.re_min + t * box.width();
            const double ym = box.im_min + (1.0 - t) * box.height();
            const std::array<SearchRect, 4> kids{
                SearchRect{box.re_min, xm, box.im_min, ym}, SearchRect{xm, box.re_max, box.im_min, ym},
                SearchRect{box.re_min, xm, ym, box.im_max}, SearchRect{xm, box.re_max, ym, box.im_max}};
            std::array<int, 4> counts{};
            bool ok = true;
            int sum = 0;
            for (int i = 0; i < 4 && ok; ++i) {
                try {
                    const WindingResult w = winding_count(f_, kids[i], scale_, cfg_);
                    evaluations_ += w.samples;
                    counts[i] = w.count;
                    sum += w.count;
                } catch (const BoundaryTooCloseError&) {
                    ok = false;
                }
            }
            if (!ok || sum != count) continue;
            for (int i = 0; i < 4; ++i) process(kids[i], counts[i]);
            return;
        }
        unresolved_.push_back(box);
    }

    std::vector<LocatedRoot> roots() const { return roots_; }
    std::vector<SearchRect> unresolved() const { return unresolved_; }
    long evaluations() const { return evaluations_; }

private:
    bool newton(const SearchRect& box, int m, cplx& out) {
        cplx s = box.center();
        for (int it = 0; it < cfg_.newton_max_steps; ++it) {
            const DeltaValue v = f_(s);
            ++evaluations_;
            if (v.value == cplx(0.0)) break;
            if (v.derivative == cplx(0.0)) return false;
            const cplx step = static_cast<double>(m) * v.value / v.derivative;
            s -= step;
            if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) return false;
            if (std::abs(s - box.center()) > 2.0 * box.diagonal()) return false;
            if (std::abs(step) < cfg_.newton_step_tol * std::max(1.0, std::abs(s))) break;
            if (it + 1 == cfg_.newton_max_steps) return false;
        }
        if (!box.contains(s, 1e-9 * box.diagonal())) return false;
        out = s;
        return true;
    }

    bool confirm_cluster(const SearchRect& box, cplx s, int m) {
        const double r = std::max(1e-3 * box.diagonal(), 1e-7 * std::max(1.0, std::abs(s)));
        const SearchRect small{s.real() - r, s.real() + r, s.imag() - r, s.imag() + r};
        try {
            const WindingResult w = winding_count(f_, small, scale_, cfg_);
            evaluations_ += w.samples;
            return w.count == m;
        } catch (const BoundaryTooCloseError&) {
            return false;
        }
    }

    void add(cplx s, int m) {
        for (const auto& r : roots_) {
            if (std::abs(r.s - s) < 1e-9 * std::max(1.0, std::abs(s))) return;
        }
        roots_.push_back({s, m, std::abs(f_(s).value)});
    }

    const AnalyticFn& f_;
    double scale_;
    const RootConfig& cfg_;
    std::vector<LocatedRoot> roots_;
    std::vector<SearchRect> unresolved_;
    long evaluations_ = 0;
};

}  // namespace

RootSet find_all_roots(const AnalyticFn& f, const SearchRect& r, double scale, const RootConfig& cfg) {
    const WindingResult total = winding_count_nudged(f, r, scale, cfg);
    RootFinder finder(f, scale, cfg);
    finder.process(total.rect, total.count);
    RootSet out;
    out.roots = finder.roots();
    std::sort(out.roots.begin(), out.roots.end(), [](const LocatedRoot& a, const LocatedRoot& b) {
        if (a.s.imag() != b.s.imag()) return a.s.imag() < b.s.imag();
        return a.s.real() < b.s.real();
    });
    out.unresolved = finder.unresolved();
    out.total_count = total.count;
    out.rect = total.rect;
    out.evaluations = total.samples + finder.evaluations();
    return out;
}

RootSet find_all_roots(const CharFn& f, const SearchRect& r, const RootConfig& cfg) {
    return find_all_roots(as_analytic(f), r, f.scale(), cfg);
}

SearchRect right_half_plane_rect(const CharFn& f, double omega_max) {
    const double width = std::max(5.0 * std::max(1.0, 1.0 / f.tau()), 0.6 * omega_max);
    return {0.0, width, -omega_max, omega_max};
}

void write_roots_csv(std::ostream& os, const RootSet& roots) {
    os << "re,im,multiplicity,residual\n";
    char buf[160];
    for (const auto& r : roots.roots) {
        std::snprintf(buf, sizeof buf, "%.12e,%.12e,%d,%.3e\n", r.s.real(), r.s.imag(),
                      r.multiplicity, r.residual);
        os << buf;
    }
}

}  // namespace hypstab
