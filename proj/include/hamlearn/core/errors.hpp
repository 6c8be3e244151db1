// Copyright 2026 The hamlearn Authors
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

#include <stdexcept>
#include <string>

namespace hamlearn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

#define HAMLEARN_DEFINE_ERROR(Name)            \
    class Name : public Error {                \
       public:                                 \
        using Error::Error;                    \
    };

HAMLEARN_DEFINE_ERROR(OutOfRange)
HAMLEARN_DEFINE_ERROR(DimensionMismatch)
HAMLEARN_DEFINE_ERROR(InvalidHamiltonian)
HAMLEARN_DEFINE_ERROR(NegativeTimeForbidden)
HAMLEARN_DEFINE_ERROR(AccessModeViolation)
HAMLEARN_DEFINE_ERROR(NormalizationViolation)
HAMLEARN_DEFINE_ERROR(NormTooLarge)
HAMLEARN_DEFINE_ERROR(MixedParameters)
HAMLEARN_DEFINE_ERROR(TargetNormTooLarge)
HAMLEARN_DEFINE_ERROR(DegenerateNormalizer)
HAMLEARN_DEFINE_ERROR(CopyBudgetExhausted)
HAMLEARN_DEFINE_ERROR(ConfigError)

#undef HAMLEARN_DEFINE_ERROR

}  // namespace hamlearn
