// Copyright 2026 The ddsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "ddsim/analytic.hpp"
#include "ddsim/errors.hpp"
#include "ddsim/evolution.hpp"
#include "ddsim/experiment.hpp"
#include "ddsim/optimizer.hpp"
#include "ddsim/sequences.hpp"
#include "ddsim/su2.hpp"
#include "ddsim/verify.hpp"
