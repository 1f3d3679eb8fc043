#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace regcheck::zip {

// Reads STORE and DEFLATE entries from a ZIP archive held in memory.
// Zip64 is not supported.
std::map<std::string, std::string> read_archive(std::string_view bytes);

// Deterministic ZIP writer: STORE method, fixed timestamps, entries in
// the order given. Byte-identical output for identical input.
class Writer {
public:
    void add(std::string name, std::string_view content);
    std::string finish() const;

private:
    struct Entry {
        std::string name;
        std::string content;
        std::uint32_t crc = 0;
    };
    std::vector<Entry> entries_;
};

}  // namespace regcheck::zip
