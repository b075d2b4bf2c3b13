#pragma once

#include <string>
#include <string_view>

namespace ecoloom::detail {

/// Contents of data/eol/<name>, compiled in; empty if absent.
std::string_view embedded_trait_file(const std::string& name);

}  // namespace ecoloom::detail
