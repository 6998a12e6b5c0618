// Copyright 2026 The SpanGraph Authors.
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

#pragma once

// Umbrella header for the spangraph library.

#include "spangraph/bench.hpp"
#include "spangraph/checkpoint.hpp"
#include "spangraph/config.hpp"
#include "spangraph/diagnostics.hpp"
#include "spangraph/errors.hpp"
#include "spangraph/gnn.hpp"
#include "spangraph/graph.hpp"
#include "spangraph/graph_io.hpp"
#include "spangraph/matrix.hpp"
#include "spangraph/propagation.hpp"
#include "spangraph/random.hpp"
#include "spangraph/sampler.hpp"
#include "spangraph/scheduler.hpp"
#include "spangraph/subgraph.hpp"
#include "spangraph/synthetic.hpp"
#include "spangraph/training.hpp"
