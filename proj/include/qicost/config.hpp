#pragma once

#include <cstddef>

namespace qicost {

/// Linear size limit for dense square matrices (density operators,
/// Kronecker products, eigensolver input). Pure state vectors may grow up
/// to the square of this value. Defaults to 4096; the QICOST_DIM_CAP
/// environment variable overrides the default at startup.
std::size_t dim_cap();
void set_dim_cap(std::size_t cap);

/// Atom-count limit for exhaustive classical enumeration (default 10^6).
std::size_t atom_cap();
void set_atom_cap(std::size_t cap);

}  // namespace qicost
