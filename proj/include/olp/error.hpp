#pragma once

#include <stdexcept>
#include <string>

namespace olp {

// Error kinds map one-to-one onto CLI exit codes.
enum class ErrorKind {
    Config = 2,      // bad configuration or validation failure
    Io = 3,          // file system / network transport
    Data = 4,        // malformed or out-of-contract input data
    Credentials = 5, // missing API credentials
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const { return kind_; }
    int exit_code() const { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

inline Error config_error(const std::string& msg) { return Error(ErrorKind::Config, msg); }
inline Error io_error(const std::string& msg) { return Error(ErrorKind::Io, msg); }
inline Error data_error(const std::string& msg) { return Error(ErrorKind::Data, msg); }
inline Error credentials_error(const std::string& msg) { return Error(ErrorKind::Credentials, msg); }

} // namespace olp
