/*
 * Copyright 2026 The ocrf Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Convenience header pulling in the whole library.

#pragma once

#include "ocrf/cell.hpp"
#include "ocrf/criteria.hpp"
#include "ocrf/csv.hpp"
#include "ocrf/dataset.hpp"
#include "ocrf/error.hpp"
#include "ocrf/forest_trainer.hpp"
#include "ocrf/iforest.hpp"
#include "ocrf/metrics.hpp"
#include "ocrf/model.hpp"
#include "ocrf/parallel.hpp"
#include "ocrf/protocol.hpp"
#include "ocrf/random.hpp"
#include "ocrf/report.hpp"
#include "ocrf/scoring.hpp"
#include "ocrf/serialization.hpp"
#include "ocrf/tree_builder.hpp"
