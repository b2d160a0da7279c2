/*
 * Copyright 2026 The xaibench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef XAIBENCH_ERROR_H_
#define XAIBENCH_ERROR_H_

#include <stdexcept>
#include <string>

namespace xaibench {

// Invalid input: bad arguments, malformed files, violated preconditions.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Something that exists in the contract could not be produced (I/O failure,
// training on degenerate data, missing artifact).
class Failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace xaibench

#endif  // XAIBENCH_ERROR_H_
