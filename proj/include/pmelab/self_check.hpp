#pragma once

#include <cstdint>
#include <vector>

#include "pmelab/construction.hpp"

namespace pmelab {

/// Fast invariant suite over all modules: norm identities, Λ^r isometry,
/// Parseval, residual closed forms, pointwise bounds, heat contraction,
/// interpolation and commutator sweeps, and a short PME run. Takes well under
/// a minute.
std::vector<BoundReport> run_self_checks(std::uint64_t seed = 20240901);

}  // namespace pmelab
