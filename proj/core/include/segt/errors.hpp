// Copyright 2026 The segt authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace segt {

/// Base class for all errors thrown by this library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File, stream, or input-data ingestion failure.
class io_error : public error {
public:
    using error::error;
};

/// Invalid configuration value or configuration/grid mismatch.
class config_error : public error {
public:
    using error::error;
};

/// Tensor/row-count mismatch between two structures that must agree.
class shape_error : public error {
public:
    using error::error;
};

/// Argument outside the mathematical domain of an operation.
class domain_error : public error {
public:
    using error::error;
};

/// Non-finite value where finite math is required.
class numeric_error : public error {
public:
    using error::error;
};

} // namespace segt
