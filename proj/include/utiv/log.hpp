/********************************************************************************
* Copyright 2026 The UTiV Toolkit Authors. All Rights Reserved.
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*    http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
********************************************************************************/


#pragma once

#include <spdlog/spdlog.h>

namespace utiv::log {

/// Routes diagnostics to standard error at the level named by UTIV_LOG
/// (trace, debug, info, warn, error, off; default warn).
void init_from_env();

using spdlog::debug;
using spdlog::error;
using spdlog::info;
using spdlog::warn;

}   // namespace utiv::log
