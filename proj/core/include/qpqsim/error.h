// Copyright 2026 The qpqsim Authors.
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

#ifndef QPQSIM_ERROR_H_
#define QPQSIM_ERROR_H_

#include <stdexcept>
#include <string>

namespace qpqsim {

// Raised for any argument outside an operation's documented domain.
class InvalidParameter : public std::invalid_argument {
 public:
  explicit InvalidParameter(const std::string& what)
      : std::invalid_argument(what) {}
};

}  // namespace qpqsim

#endif  // QPQSIM_ERROR_H_
