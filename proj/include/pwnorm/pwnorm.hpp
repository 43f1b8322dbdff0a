// Copyright 2026 The pwnorm Authors
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

#include "pwnorm/classify.hpp"
#include "pwnorm/config.hpp"
#include "pwnorm/envelope.hpp"
#include "pwnorm/error.hpp"
#include "pwnorm/experiments.hpp"
#include "pwnorm/family.hpp"
#include "pwnorm/index.hpp"
#include "pwnorm/norm.hpp"
#include "pwnorm/partition.hpp"
#include "pwnorm/restrict.hpp"
#include "pwnorm/spaces.hpp"
#include "pwnorm/sparse_vector.hpp"
#include "pwnorm/weight.hpp"
