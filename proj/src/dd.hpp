#pragma once

// Double description for polyhedral cones {x in R^d : A x <= 0}.

#include <vector>

#include "okb/rational.hpp"

namespace okb::detail {

struct ConeGenerators {
    std::vector<IVec> lineality;  // basis of the lineality space
    std::vector<IVec> rays;       // extreme rays modulo lineality, primitive
};

ConeGenerators cone_generators(const std::vector<IVec>& rows, std::size_t d);

}  // namespace okb::detail
