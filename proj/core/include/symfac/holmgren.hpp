#pragma once

#include "symfac/system.hpp"
#include "symfac/types.hpp"

namespace symfac {

// Paraboloid bending of the initial hyperplane: new first coordinate
// x1 + kappa * |x'|^2, base point at the origin, conormal e1.
struct HolmgrenParams {
  double kappa = 1.0;
};

// Pushes the coefficient tensor through the change of variables as
// expression trees: C~^{pq}_{ab} = sum_{j,l} C^{jl}_{ab}(x(x~)) d_j x~_p d_l x~_q,
// with the inverse substitution x1 = x~1 - kappa |x~'|^2 applied inside the
// entries. The Jacobian determinant is 1 (unit triangular map). The domain
// box is kept; entries are polynomial in the new chart and evaluate anywhere.
SystemSpec holmgren_pushforward(const SystemSpec& spec, const HolmgrenParams& params);

}  // namespace symfac
