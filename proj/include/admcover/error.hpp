#ifndef ADMCOVER_ERROR_HPP
#define ADMCOVER_ERROR_HPP

#include <stdexcept>
#include <string>

namespace admcover {

// Errors carry a stable machine-readable code ("disconnects", "empty_result",
// "images_differ", ...) next to the human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

} // namespace admcover

#endif
