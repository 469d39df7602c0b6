// Copyright 2026 The swgen Authors
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

#include "swgen/codebooks.hpp"
#include "swgen/common.hpp"
#include "swgen/config.hpp"
#include "swgen/io.hpp"
#include "swgen/painting.hpp"
#include "swgen/partitions.hpp"
#include "swgen/rng.hpp"
#include "swgen/runner.hpp"
#include "swgen/sources.hpp"
#include "swgen/swcodec.hpp"
#include "swgen/towers.hpp"
#include "swgen/typicality.hpp"
#include "swgen/verify.hpp"
