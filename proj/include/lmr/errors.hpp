#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lmr {

// Thrown when a requested size exceeds a configured memory budget. Carries the
// realized size so callers (and the CLI) can report it.
class ResourceError : public std::runtime_error {
public:
    ResourceError(const std::string& what, std::uint64_t realized, std::uint64_t cap)
        : std::runtime_error(what), realized_(realized), cap_(cap) {}

    std::uint64_t realized() const noexcept { return realized_; }
    std::uint64_t cap() const noexcept { return cap_; }

private:
    std::uint64_t realized_;
    std::uint64_t cap_;
};

}  // namespace lmr
