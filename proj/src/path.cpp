#include "mdebif/path.hpp"

#include <algorithm>
#include <cmath>

#include "mdebif/errors.hpp"

namespace mdebif {

namespace {

// Newton divided differences over duplicated nodes (t0,t0,t1,t1,...); `vals`
// and `slopes` are indexed per distinct node.  Only first-order repetitions
// occur, so the confluent entry is simply the slope.
Mat hermite_coefficients(const std::vector<double>& nodes, const std::vector<Vec>& vals,
                         const std::vector<Vec>& slopes) {
    const std::size_t m = nodes.size();
    const int dim = static_cast<int>(vals[0].size());
    std::vector<Vec> dd(m);
    for (std::size_t i = 0; i < m; ++i) dd[i] = vals[i / 2];

    Mat coef(dim, m);
    coef.col(0) = dd[0];
    for (std::size_t order = 1; order < m; ++order) {
        for (std::size_t i = 0; i + order < m; ++i) {
            const double dt = nodes[i + order] - nodes[i];
            dd[i] = (dt == 0.0) ? slopes[i / 2] : Vec((dd[i + 1] - dd[i]) / dt);
        }
        coef.col(static_cast<int>(order)) = dd[0];
    }
    return coef;
}

} // namespace

RegulatedPath RegulatedPath::constant(const Vec& value, double t0, double t1) {
    PathBuilder b(static_cast<int>(value.size()), t0, value);
    Vec zero = Vec::Zero(value.size());
    b.add_span_cubic(t0, value, zero, t1, value, zero);
    return b.finish(t1, value);
}

Vec RegulatedPath::eval_segment(const Segment& seg, double t) const {
    // Binary search for the span containing t.
    std::size_t lo = 0, hi = seg.spans.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (t <= seg.spans[mid].t1)
            hi = mid;
        else
            lo = mid + 1;
    }
    const Span& sp = seg.spans[lo];
    const std::size_t m = sp.nodes.size();
    Vec p = sp.coef.col(static_cast<int>(m - 1));
    for (std::size_t k = m - 1; k-- > 0;)
        p = p * (t - sp.nodes[k]) + sp.coef.col(static_cast<int>(k));
    return p;
}

Vec RegulatedPath::operator()(double t) const {
    if (t < t_begin_ || t > t_end_)
        throw ValidationError("path evaluated outside its domain [" + std::to_string(t_begin_) +
                              ", " + std::to_string(t_end_) + "] at t=" + std::to_string(t));
    if (t == t_begin_) return start_;
    if (t == t_end_) return end_;
    for (const JumpRecord& j : jumps_)
        if (t == j.time) return j.left;

    // Segment whose half-open interval (t0, t1] contains t.
    std::size_t lo = 0, hi = segments_.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (t <= segments_[mid].t1)
            hi = mid;
        else
            lo = mid + 1;
    }
    return eval_segment(segments_[lo], t);
}

Vec RegulatedPath::right_limit(double t) const {
    for (const JumpRecord& j : jumps_)
        if (t == j.time) return j.right;
    return (*this)(t);
}

PathBuilder::PathBuilder(int dim, double t_start, const Vec& y_start) : t_cursor_(t_start) {
    path_.dim_ = dim;
    path_.t_begin_ = t_start;
    path_.start_ = y_start;
    path_.segments_.push_back({t_start, t_start, {}});
}

void PathBuilder::add_span_quintic(double t0, const Vec& y0, const Vec& f0, double tm,
                                   const Vec& ym, const Vec& fm, double t1, const Vec& y1,
                                   const Vec& f1) {
    RegulatedPath::Span sp;
    sp.t0 = t0;
    sp.t1 = t1;
    sp.nodes = {t0, t0, tm, tm, t1, t1};
    sp.coef = hermite_coefficients(sp.nodes, {y0, ym, y1}, {f0, fm, f1});
    path_.segments_.back().spans.push_back(std::move(sp));
    path_.segments_.back().t1 = t1;
    t_cursor_ = t1;
}

void PathBuilder::add_span_cubic(double t0, const Vec& y0, const Vec& f0, double t1,
                                 const Vec& y1, const Vec& f1) {
    RegulatedPath::Span sp;
    sp.t0 = t0;
    sp.t1 = t1;
    sp.nodes = {t0, t0, t1, t1};
    sp.coef = hermite_coefficients(sp.nodes, {y0, y1}, {f0, f1});
    path_.segments_.back().spans.push_back(std::move(sp));
    path_.segments_.back().t1 = t1;
    t_cursor_ = t1;
}

void PathBuilder::add_jump(double tau, const Vec& left, const Vec& right) {
    path_.segments_.back().t1 = tau;
    path_.jumps_.push_back({tau, left, right});
    path_.segments_.push_back({tau, tau, {}});
    t_cursor_ = tau;
}

Vec PathBuilder::eval_last_span(double t) const {
    for (auto seg = path_.segments_.rbegin(); seg != path_.segments_.rend(); ++seg) {
        if (!seg->spans.empty()) {
            const RegulatedPath::Span& sp = seg->spans.back();
            const std::size_t m = sp.nodes.size();
            Vec p = sp.coef.col(static_cast<int>(m - 1));
            for (std::size_t k = m - 1; k-- > 0;)
                p = p * (t - sp.nodes[k]) + sp.coef.col(static_cast<int>(k));
            return p;
        }
    }
    throw Error("no span to evaluate");
}

RegulatedPath PathBuilder::finish(double t_end, const Vec& y_end) {
    path_.t_end_ = t_end;
    path_.end_ = y_end;
    path_.segments_.back().t1 = t_end;
    for (const auto& seg : path_.segments_)
        if (seg.spans.empty()) throw Error("path segment without spans");
    return std::move(path_);
}

} // namespace mdebif
