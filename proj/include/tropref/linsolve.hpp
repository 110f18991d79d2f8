#pragma once

#include "tropref/numeric.hpp"

#include <vector>

namespace tropref {

// Exact solution of A x = b over the rationals.
struct LinearSolution {
    bool consistent = false;
    std::vector<Rat> particular;            // one solution (when consistent)
    std::vector<std::vector<Rat>> kernel;   // basis of the nullspace of A
};

LinearSolution solve_linear(std::vector<std::vector<Rat>> rows, std::vector<Rat> rhs);

}  // namespace tropref
