#pragma once

#include <string_view>
#include <variant>

namespace wbsn {

// Expected protocol failures. These are outcomes, not exceptions: every one
// maps to a documented rejection path in some node.
enum class ProtoError {
    WrongLength,          // frame byte count does not match its kind
    UnknownIntermediate,  // relay id not registered at the hub
    StaleTimestamp,       // freshness window exceeded
    NoMatchingSensor,     // table scan found no (k, a) pair
    WrongIntermediate,    // relay id in the reply is not ours
    AuthFailed,           // confirmation tag mismatch at the sensor
    MessageLost,          // frame never arrived (dropped or mangled in transit)
};

std::string_view to_string(ProtoError e);

template <typename T>
class Result {
public:
    Result(T value) : v_(std::move(value)) {}
    Result(ProtoError error) : v_(error) {}

    bool ok() const { return std::holds_alternative<T>(v_); }
    explicit operator bool() const { return ok(); }

    const T& value() const& { return std::get<T>(v_); }
    T&& value() && { return std::get<T>(std::move(v_)); }
    ProtoError error() const { return std::get<ProtoError>(v_); }

private:
    std::variant<T, ProtoError> v_;
};

}  // namespace wbsn
