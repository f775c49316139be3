// Copyright 2026 The infocalc Authors
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

#include "infocalc/algorithms.hpp"
#include "infocalc/bounding.hpp"
#include "infocalc/calculus.hpp"
#include "infocalc/curve.hpp"
#include "infocalc/error.hpp"
#include "infocalc/info_model.hpp"
#include "infocalc/mc_oracle.hpp"
#include "infocalc/minplus.hpp"
#include "infocalc/rational.hpp"
#include "infocalc/scenario.hpp"
