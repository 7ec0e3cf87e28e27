#pragma once

// Synthetic demonstration catalog: six modules over the four element
// categories, 43 playable resources, five registered languages and a few
// translated variants. All text is placeholder.

#include "saphir/catalog.hpp"

namespace saphir {

class Repository;

Catalog sample_catalog();

/// Writes the sample catalog into `repo` through its public operations.
/// Languages and assets already present are kept; modules are replaced.
void seed_sample(Repository& repo);

}  // namespace saphir
