#pragma once

// Quadratic-cost optimal transport between finite distributions on the line.

#include "qrms/distribution.hpp"
#include "qrms/tolerances.hpp"

namespace qrms {

/// W2 through the monotone coupling: the two quantile functions are step
/// functions and W2^2 integrates their squared difference exactly over the
/// merged cumulative breakpoints. Cumulative sums within tol.cumulative_snap
/// of each other count as one breakpoint, so round-off slivers of mass carry
/// no cost.
double w2(const DiscreteDist& p, const DiscreteDist& q, const Tolerances& tol = {});

/// W2 by solving the transport linear program with a dense simplex method.
/// Independent of the quantile formula; throws TooLarge above 8 atoms.
double w2_oracle(const DiscreteDist& p, const DiscreteDist& q);

}  // namespace qrms
