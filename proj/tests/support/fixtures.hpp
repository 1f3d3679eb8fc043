#pragma once

#include <string>

namespace regcheck::testsupport {

inline std::string fixture_path(const std::string& name) {
    return std::string(REGCHECK_FIXTURE_DIR) + "/" + name;
}

inline std::string pack_path(const std::string& name) {
    return std::string(REGCHECK_PACK_DIR) + "/" + name;
}

}  // namespace regcheck::testsupport
