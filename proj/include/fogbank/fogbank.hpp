/*
 * Copyright 2026 The Fogbank Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FOGBANK_FOGBANK_HPP
#define FOGBANK_FOGBANK_HPP

#include <fogbank/branch_and_bound.hpp>
#include <fogbank/config.hpp>
#include <fogbank/errors.hpp>
#include <fogbank/milp.hpp>
#include <fogbank/model.hpp>
#include <fogbank/oracle.hpp>
#include <fogbank/power.hpp>
#include <fogbank/reporting.hpp>
#include <fogbank/scenario_runner.hpp>
#include <fogbank/simplex.hpp>
#include <fogbank/solve.hpp>
#include <fogbank/topology.hpp>

#endif // FOGBANK_FOGBANK_HPP
