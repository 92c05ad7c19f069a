#ifndef MDEBIF_PATH_HPP
#define MDEBIF_PATH_HPP

#include <vector>

#include "mdebif/types.hpp"

namespace mdebif {

/// Piecewise-polynomial regulated path: dense Hermite interpolants on the
/// smooth flow between jump times plus recorded one-sided limits at the
/// jumps.  The path value AT a jump time is the left value (left-continuous
/// convention); right limits are exposed separately.
class RegulatedPath {
public:
    struct JumpRecord {
        double time;
        Vec left;
        Vec right;
    };

    /// One Hermite interpolation span in Newton form over repeated nodes.
    struct Span {
        double t0, t1;
        std::vector<double> nodes; // with repetition, size == degree+1
        Mat coef;                  // dim x (degree+1) divided differences
    };

    /// Maximal interval of smooth flow; consecutive segments meet at jumps.
    struct Segment {
        double t0, t1;
        std::vector<Span> spans;
    };

    /// Left-continuous evaluation; exact (bit-equal) stored values at the
    /// start point, at every recorded jump time and at the end point.
    Vec operator()(double t) const;

    /// x(t+): differs from operator() only at recorded jump times.
    Vec right_limit(double t) const;

    int dimension() const { return dim_; }
    double t_begin() const { return t_begin_; }
    double t_end() const { return t_end_; }
    const std::vector<JumpRecord>& jumps() const { return jumps_; }
    const std::vector<Segment>& segments() const { return segments_; }

    /// Constant path, useful as a reference trajectory and in tests.
    static RegulatedPath constant(const Vec& value, double t0, double t1);

    /// Empty path; evaluation is invalid until assigned from a builder.
    RegulatedPath() = default;

private:
    friend class PathBuilder;

    Vec eval_segment(const Segment& seg, double t) const;

    int dim_ = 0;
    double t_begin_ = 0.0, t_end_ = 0.0;
    Vec start_, end_;
    std::vector<Segment> segments_;
    std::vector<JumpRecord> jumps_;
};

/// Incremental construction used by the solvers: spans are appended in time
/// order, jumps close the current segment.
class PathBuilder {
public:
    PathBuilder(int dim, double t_start, const Vec& y_start);

    /// Quintic Hermite span through (y, y') at both ends and at the midpoint.
    void add_span_quintic(double t0, const Vec& y0, const Vec& f0, double tm, const Vec& ym,
                          const Vec& fm, double t1, const Vec& y1, const Vec& f1);

    /// Cubic Hermite span through (y, y') at both ends.
    void add_span_cubic(double t0, const Vec& y0, const Vec& f0, double t1, const Vec& y1,
                        const Vec& f1);

    /// Record a jump at the current end time and restart from `right`.
    void add_jump(double tau, const Vec& left, const Vec& right);

    double current_time() const { return t_cursor_; }

    /// Evaluate the most recently added span (used by the domain monitor to
    /// refine exit times inside an accepted step).
    Vec eval_last_span(double t) const;

    RegulatedPath finish(double t_end, const Vec& y_end);

private:
    RegulatedPath path_;
    double t_cursor_;
};

} // namespace mdebif

#endif
