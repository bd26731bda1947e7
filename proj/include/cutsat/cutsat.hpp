// Copyright 2026 The cutsat Authors
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

#include "cutsat/bench.hpp"
#include "cutsat/bounds.hpp"
#include "cutsat/encoding.hpp"
#include "cutsat/model.hpp"
#include "cutsat/render.hpp"
#include "cutsat/sat/cnf.hpp"
#include "cutsat/sat/external.hpp"
#include "cutsat/sat/maxsat.hpp"
#include "cutsat/sat/solver.hpp"
#include "cutsat/search.hpp"
#include "cutsat/verify.hpp"
