/*
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
#ifndef SLQ_ERROR_HPP
#define SLQ_ERROR_HPP

#include <stdexcept>
#include <string>

namespace slq
{

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Arguments outside the mathematical domain of an operation
/// (mismatched intervals, non-positive weights, angles out of range).
class DomainError : public Error
{
public:
    using Error::Error;
};

/// Adaptive step size collapsed; carries the abscissa where it happened.
class IntegrationError : public Error
{
public:
    IntegrationError(const std::string &what, double location) : Error(what), location_(location) {}
    double location() const noexcept { return location_; }

private:
    double location_;
};

/// A spectral bracket could not be established inside the permitted window.
class SearchRangeError : public Error
{
public:
    using Error::Error;
};

/// Internal cross-checks disagree (kernel dimension vs multiplicity,
/// band counts vs the interlacing chain).
class ConsistencyError : public Error
{
public:
    using Error::Error;
};

/// An operation was called on data violating its precondition,
/// e.g. a derivative requested at a multiple eigenvalue.
class PreconditionError : public Error
{
public:
    using Error::Error;
};

/// Invalid problem configuration; the message names the offending field.
class ConfigError : public Error
{
public:
    using Error::Error;
};

} // namespace slq

#endif
