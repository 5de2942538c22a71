// Copyright 2026 The CSMG Authors
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


#ifndef CSMG_HPP
#define CSMG_HPP

#include "csmg/click_record.hpp"
#include "csmg/entanglement.hpp"
#include "csmg/error_model.hpp"
#include "csmg/errors.hpp"
#include "csmg/estimates_csv.hpp"
#include "csmg/frame.hpp"
#include "csmg/pauli.hpp"
#include "csmg/planner.hpp"
#include "csmg/record_io.hpp"
#include "csmg/report.hpp"
#include "csmg/rng.hpp"
#include "csmg/run_config.hpp"
#include "csmg/scan.hpp"
#include "csmg/stream_sim.hpp"
#include "csmg/templates.hpp"

#endif  // CSMG_HPP
