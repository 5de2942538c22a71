// Copyright 2026 The CSMG Authors
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

#ifndef CSMG_ERRORS_HPP
#define CSMG_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace csmg {

// Invalid arguments and configurations are reported with std::invalid_argument.

/// Malformed or unreadable input data. `offset` is the byte offset of the
/// problem within the input when known.
class DataError : public std::runtime_error {
   public:
    explicit DataError(const std::string &what, std::int64_t offset = -1)
        : std::runtime_error(offset >= 0 ? what + " (at byte offset " + std::to_string(offset) + ")" : what),
          offset_(offset) {
    }
    std::int64_t offset() const {
        return offset_;
    }

   private:
    std::int64_t offset_;
};

/// A measurement template failed its stabilizer verification.
class VerificationError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace csmg

#endif  // CSMG_ERRORS_HPP
