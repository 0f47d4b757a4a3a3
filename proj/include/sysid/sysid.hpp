/*
 Copyright 2026 The sysid Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef SYSID_SYSID_HPP
#define SYSID_SYSID_HPP

#include "sysid/bounds.hpp"
#include "sysid/core.hpp"
#include "sysid/estimate.hpp"
#include "sysid/experiment.hpp"
#include "sysid/hankel.hpp"
#include "sysid/io.hpp"
#include "sysid/lti.hpp"
#include "sysid/lyapunov.hpp"
#include "sysid/markov.hpp"
#include "sysid/metrics.hpp"
#include "sysid/plot.hpp"

#endif  // SYSID_SYSID_HPP
