// Copyright 2026 The qhegrid Authors
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

#include <stdexcept>

namespace qhe {

// Raised when a request is valid but exceeds a desk-scale feasibility
// guard (dense enumeration size, audit dimension, ...). The CLI maps this
// to its own exit code, distinct from validation errors.
struct GuardExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qhe
