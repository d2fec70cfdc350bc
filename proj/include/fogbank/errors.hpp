/*
 * Copyright 2026 The Fogbank Authors
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

#ifndef FOGBANK_ERRORS_HPP
#define FOGBANK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fogbank {

/// Malformed configuration document or a value that breaks a model invariant.
class config_error : public std::runtime_error
{
public:
    config_error(std::string field, const std::string& what)
        : std::runtime_error(what), field_(std::move(field))
    {
    }

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Unknown server, device or Fogbank identifier.
class lookup_error : public std::out_of_range
{
public:
    using std::out_of_range::out_of_range;
};

/// An allocation that breaks one or more placement constraints.
class validation_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// The simplex stalled or lost accuracy; never returned as a silent answer.
class numerical_failure : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Input outside an operation's documented domain (size guards, empty sets).
class precondition_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace fogbank

#endif // FOGBANK_ERRORS_HPP
