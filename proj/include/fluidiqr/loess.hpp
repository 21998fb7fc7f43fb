#pragma once

#include <vector>

namespace fluidiqr {

struct LoessParams {
    int window = 7;  // neighborhood size in points, odd and >= 1
    int degree = 1;  // local polynomial degree, 0, 1 or 2
};

/** Locally weighted polynomial smoothing over equally spaced points.
 *
 *  For each index i the `window` nearest indices by |j - i| form the
 *  neighborhood (distance ties prefer the lower index; when window > n all
 *  points participate). Each neighbor gets tricube weight
 *  (1 - (d / d_max)^3)^3 with d_max the largest neighbor distance (all
 *  weights 1 when d_max is 0), multiplied by `robustness[j]` when given.
 *  The weighted least-squares polynomial of the configured degree is
 *  evaluated at i. A singular fit falls back to the degree-0 weighted mean.
 *
 *  Throws EmptyInput for an empty series, LengthMismatch when robustness
 *  weights are present but differently sized, std::invalid_argument for bad
 *  parameters.
 */
std::vector<double> loess_smooth(const std::vector<double>& y, const LoessParams& params,
                                 const std::vector<double>* robustness = nullptr);

/** Same local fit evaluated at an arbitrary (possibly out-of-range) position.
 *  Used to extend cycle-subseries one step past each end. */
double loess_eval_at(const std::vector<double>& y, const LoessParams& params, double x,
                     const std::vector<double>* robustness = nullptr);

}  // namespace fluidiqr
