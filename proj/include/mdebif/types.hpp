#ifndef MDEBIF_TYPES_HPP
#define MDEBIF_TYPES_HPP

#include <Eigen/Dense>

namespace mdebif {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Sum-of-absolute-values vector norm used throughout (residuals, tolerances).
inline double norm1(const Vec& v) { return v.lpNorm<1>(); }

/// Max-row-sum matrix norm used for the scale-aware degeneracy thresholds.
inline double mat_norm(const Mat& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

} // namespace mdebif

#endif
