// Copyright 2026 The Quadra Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// Umbrella header pulling in the whole library.

#ifndef QUADRA_QUADRA_HPP_
#define QUADRA_QUADRA_HPP_

#include "quadra/multigraph.hpp"   // IWYU pragma: export
#include "quadra/oracle.hpp"       // IWYU pragma: export
#include "quadra/pbf.hpp"          // IWYU pragma: export
#include "quadra/qaoa.hpp"         // IWYU pragma: export
#include "quadra/reduce.hpp"       // IWYU pragma: export
#include "quadra/rng.hpp"          // IWYU pragma: export
#include "quadra/sched.hpp"        // IWYU pragma: export
#include "quadra/sweep.hpp"        // IWYU pragma: export

#endif  // QUADRA_QUADRA_HPP_
