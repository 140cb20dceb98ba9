#include "tomokit/errors.hpp"

#include <iostream>
#include <mutex>

namespace tomokit {

namespace {
std::mutex sink_mutex;
WarningSink& sink() {
    static WarningSink s = [](const std::string& m) { std::cerr << "warning: " << m << '\n'; };
    return s;
}
}  // namespace

void set_warning_sink(WarningSink s) {
    std::lock_guard<std::mutex> lock(sink_mutex);
    sink() = std::move(s);
}

void warn(const std::string& message) {
    std::lock_guard<std::mutex> lock(sink_mutex);
    if (sink()) sink()(message);
}

}  // namespace tomokit
