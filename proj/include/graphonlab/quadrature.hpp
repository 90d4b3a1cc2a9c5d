#pragma once

#include "graphonlab/common.hpp"
#include "graphonlab/gaussian.hpp"

namespace graphonlab {

// Grid quadrature of the defining integrals of relative entropy, relative
// Fisher information and total variation for 1-d and 2-d Gaussian pairs.
// Deliberately a separate route from the closed forms: tensor Simpson rule
// over +-10 marginal deviations, with densities and score functions evaluated
// pointwise.

double gaussian_entropy_quadrature(const GaussianLaw& p, const GaussianLaw& q,
                                   int points_per_dim = 2001);

double gaussian_fisher_quadrature(const GaussianLaw& p, const GaussianLaw& q,
                                  int points_per_dim = 2001);

double gaussian_tv_quadrature(const GaussianLaw& p, const GaussianLaw& q,
                              int points_per_dim = 2001);

}  // namespace graphonlab
