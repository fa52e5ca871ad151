#ifndef GEVREYLAB_GEVREYLAB_HPP
#define GEVREYLAB_GEVREYLAB_HPP

// Umbrella header: formal normal forms of 1-resonant singular vector fields,
// small-divisor arithmetic, Borel-plane recurrences, and Borel-Laplace
// summation with Gevrey-order estimation.

#include "gevreylab/borel_laplace.hpp"
#include "gevreylab/borel_plane.hpp"
#include "gevreylab/gevrey.hpp"
#include "gevreylab/io.hpp"
#include "gevreylab/multi_series.hpp"
#include "gevreylab/normalization.hpp"
#include "gevreylab/resonance.hpp"
#include "gevreylab/small_divisors.hpp"

#endif
