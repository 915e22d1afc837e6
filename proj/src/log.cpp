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


#include "utiv/log.hpp"

#include <cstdlib>
#include <memory>
#include <string>

#include <spdlog/sinks/stdout_sinks.h>

namespace utiv::log {

void init_from_env()
{
    auto logger = std::make_shared<spdlog::logger>("utiv", std::make_shared<spdlog::sinks::stderr_sink_mt>());
    logger->set_pattern("[%l] %v");

    auto level = spdlog::level::warn;
    if (const char* env = std::getenv("UTIV_LOG"); env && *env) {
        level = spdlog::level::from_str(env);
    }
    logger->set_level(level);
    spdlog::set_default_logger(std::move(logger));
}

}   // namespace utiv::log
