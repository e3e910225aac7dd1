// Copyright 2026 The tssa Authors
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

#include "tssa/config.hpp"
#include "tssa/csv.hpp"
#include "tssa/diagnostics.hpp"
#include "tssa/environment.hpp"
#include "tssa/errors.hpp"
#include "tssa/harness.hpp"
#include "tssa/policies.hpp"
#include "tssa/random.hpp"
#include "tssa/reward_models.hpp"
#include "tssa/sampler.hpp"
