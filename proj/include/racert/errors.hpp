/*
 * Copyright 2026 The racert Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RACERT_ERRORS_HPP
#define RACERT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace racert {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller broke a precondition (wrong dimension, malformed instance, ...).
class ContractViolation : public Error {
public:
    using Error::Error;
};

// A scalar parameter lies outside the range a construction requires.
class ParameterDomainError : public Error {
public:
    using Error::Error;
};

// A condition needs the robust invariant region but the problem has none.
class MissingInvariantError : public Error {
public:
    using Error::Error;
};

// Cell or evaluation caps exceeded.
class ResourceLimitError : public Error {
public:
    using Error::Error;
};

class NoTrainableParameters : public Error {
public:
    using Error::Error;
};

class UnsupportedDimension : public Error {
public:
    using Error::Error;
};

// Input document could not be parsed or cross-validated. `field` names the
// offending JSON path (or expression token) so the CLI can report it.
class ParseError : public Error {
public:
    ParseError(std::string field, const std::string& what)
        : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

} // namespace racert

#endif
