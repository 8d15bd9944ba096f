/*
   Copyright 2026 The kxcn authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace kxcn {

/// A value or file violates a documented precondition (malformed input,
/// mixed moduli, dimension mismatch, ...).
class invalid_input : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Two independent computation routes disagreed. This always indicates a
/// bug in this library, never a property of the input; callers must abort
/// instead of picking one result.
class internal_inconsistency : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

/// The requested query needs a capability (closed-form inverse rule,
/// kernel predicate, ...) that the operator does not provide.
class unsupported_operator : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace kxcn
