#pragma once

#include <string_view>

namespace xlsim {

/// Prints "warning: <msg>" on stderr unless warnings are silenced.
void warn(std::string_view msg);

void set_warnings_enabled(bool enabled);

}  // namespace xlsim
