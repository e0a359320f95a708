// Copyright 2026 The hpdecode Authors
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

#include "hpdecode/anneal.hpp"
#include "hpdecode/circuit.hpp"
#include "hpdecode/fidelity.hpp"
#include "hpdecode/fit.hpp"
#include "hpdecode/gate.hpp"
#include "hpdecode/harness.hpp"
#include "hpdecode/linalg.hpp"
#include "hpdecode/oracle.hpp"
#include "hpdecode/oracle_suite.hpp"
#include "hpdecode/partition.hpp"
#include "hpdecode/pauli.hpp"
#include "hpdecode/rng.hpp"
#include "hpdecode/scrambling.hpp"
#include "hpdecode/tableau.hpp"
#include "hpdecode/trace_kernel.hpp"
