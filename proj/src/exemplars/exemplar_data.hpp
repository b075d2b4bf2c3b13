#pragma once

#include <string>
#include <string_view>

namespace ecoloom::detail {

/// Contents of data/exemplars/<name>, compiled in; empty if absent.
std::string_view embedded_exemplar_file(const std::string& name);

}  // namespace ecoloom::detail
