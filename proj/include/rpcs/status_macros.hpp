// Copyright 2026 The RPCS Authors
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

#ifndef RPCS_STATUS_MACROS_HPP_
#define RPCS_STATUS_MACROS_HPP_

#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define RPCS_CONCAT_INNER_(a, b) a##b
#define RPCS_CONCAT_(a, b) RPCS_CONCAT_INNER_(a, b)

// Returns early from the enclosing function if `expr` is not OK.
#define RPCS_RETURN_IF_ERROR(expr)                 \
  do {                                             \
    if (::absl::Status rpcs_status_ = (expr);      \
        !rpcs_status_.ok()) {                      \
      return rpcs_status_;                         \
    }                                              \
  } while (false)

#define RPCS_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, expr) \
  auto tmp = (expr);                                \
  if (!tmp.ok()) {                                  \
    return std::move(tmp).status();                 \
  }                                                 \
  lhs = *std::move(tmp)

// Evaluates `expr` (a StatusOr), returning its status on error and
// otherwise assigning the value to `lhs`.
#define RPCS_ASSIGN_OR_RETURN(lhs, expr) \
  RPCS_ASSIGN_OR_RETURN_IMPL_(RPCS_CONCAT_(rpcs_statusor_, __LINE__), lhs, expr)

#endif  // RPCS_STATUS_MACROS_HPP_
