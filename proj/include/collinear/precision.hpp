#pragma once

#include <boost/multiprecision/float128.hpp>

namespace collinear {

// IEEE binary128. Used for runs whose initial roundoff is amplified by the
// instability of collinear relative equilibria.
using quad = boost::multiprecision::float128;

}  // namespace collinear
