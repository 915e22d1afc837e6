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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace utiv {

/// Base of every error the toolkit raises on bad data or configuration.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error
{
public:
    using Error::Error;
};

/// Raised when a file or tree on disk is inconsistent (orphans, duplicates, I/O).
class DataError : public Error
{
public:
    using Error::Error;
};

/// A ratio whose denominator is zero and for which no convention applies.
class UndefinedScoreError : public Error
{
public:
    using Error::Error;
};

/// Detections or queries reference a frame the dataset does not contain.
class UnknownFrameError : public Error
{
public:
    using Error::Error;
};

class DecodeError : public Error
{
public:
    using Error::Error;
};

}   // namespace utiv
