#pragma once

#include <stdexcept>
#include <string>

namespace bnw {

// Bad input data: missing files, malformed content, schema mismatches.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// API misuse or bad command-line arguments.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

std::string read_file(const std::string& path);

// Writes to a temp file in the target directory, then renames into place,
// so readers never observe a half-written file.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace bnw
