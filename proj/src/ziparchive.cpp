#include "regcheck/ziparchive.hpp"

#include <zlib.h>

#include <cstring>
#include <stdexcept>

namespace regcheck::zip {

namespace {

constexpr std::uint32_t kLocalSig = 0x04034b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kEndSig = 0x06054b50;

// fixed DOS timestamp: 2020-01-01 00:00:00
constexpr std::uint16_t kDosDate = ((2020 - 1980) << 9) | (1 << 5) | 1;
constexpr std::uint16_t kDosTime = 0;

std::uint16_t rd16(std::string_view b, std::size_t at) {
    if (at + 2 > b.size()) throw std::runtime_error("truncated zip archive");
    return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) |
                                      (static_cast<unsigned char>(b[at + 1]) << 8));
}

std::uint32_t rd32(std::string_view b, std::size_t at) {
    if (at + 4 > b.size()) throw std::runtime_error("truncated zip archive");
    return static_cast<std::uint32_t>(static_cast<unsigned char>(b[at])) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 1])) << 8) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 2])) << 16) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 3])) << 24);
}

void wr16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void wr32(std::string& out, std::uint32_t v) {
    wr16(out, static_cast<std::uint16_t>(v & 0xffff));
    wr16(out, static_cast<std::uint16_t>((v >> 16) & 0xffff));
}

std::string inflate_raw(std::string_view data, std::size_t expected) {
    std::string out(expected, '\0');
    z_stream strm{};
    if (inflateInit2(&strm, -MAX_WBITS) != Z_OK) throw std::runtime_error("inflate init failed");
    strm.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    strm.avail_in = static_cast<uInt>(data.size());
    strm.next_out = reinterpret_cast<Bytef*>(out.data());
    strm.avail_out = static_cast<uInt>(out.size());
    int rc = inflate(&strm, Z_FINISH);
    inflateEnd(&strm);
    if (rc != Z_STREAM_END) throw std::runtime_error("corrupt deflate stream in zip entry");
    out.resize(out.size() - strm.avail_out);
    return out;
}

}  // namespace

std::map<std::string, std::string> read_archive(std::string_view bytes) {
    if (bytes.size() < 22) throw std::runtime_error("not a zip archive");
    // find end-of-central-directory record
    std::size_t eocd = std::string_view::npos;
    std::size_t scan_from = bytes.size() >= 22 + 0xffff ? bytes.size() - 22 - 0xffff : 0;
    for (std::size_t i = bytes.size() - 22 + 1; i-- > scan_from;) {
        if (rd32(bytes, i) == kEndSig) {
            eocd = i;
            break;
        }
    }
    if (eocd == std::string_view::npos) throw std::runtime_error("zip end record not found");

    std::uint16_t count = rd16(bytes, eocd + 10);
    std::uint32_t central_offset = rd32(bytes, eocd + 16);

    std::map<std::string, std::string> out;
    std::size_t at = central_offset;
    for (std::uint16_t i = 0; i < count; ++i) {
        if (rd32(bytes, at) != kCentralSig) throw std::runtime_error("bad zip central directory");
        std::uint16_t method = rd16(bytes, at + 10);
        std::uint32_t comp_size = rd32(bytes, at + 20);
        std::uint32_t uncomp_size = rd32(bytes, at + 24);
        std::uint16_t name_len = rd16(bytes, at + 28);
        std::uint16_t extra_len = rd16(bytes, at + 30);
        std::uint16_t comment_len = rd16(bytes, at + 32);
        std::uint32_t local_offset = rd32(bytes, at + 42);
        if (at + 46 + name_len > bytes.size()) throw std::runtime_error("truncated zip archive");
        std::string name(bytes.substr(at + 46, name_len));
        at += 46 + name_len + extra_len + comment_len;

        if (rd32(bytes, local_offset) != kLocalSig)
            throw std::runtime_error("bad zip local header for " + name);
        std::uint16_t lname = rd16(bytes, local_offset + 26);
        std::uint16_t lextra = rd16(bytes, local_offset + 28);
        std::size_t data_at = local_offset + 30 + lname + lextra;
        if (data_at + comp_size > bytes.size()) throw std::runtime_error("truncated zip entry " + name);
        std::string_view data = bytes.substr(data_at, comp_size);

        if (name.empty() || name.back() == '/') continue;  // directory entry
        if (method == 0)
            out[name] = std::string(data);
        else if (method == 8)
            out[name] = inflate_raw(data, uncomp_size);
        else
            throw std::runtime_error("unsupported zip compression method for " + name);
    }
    return out;
}

void Writer::add(std::string name, std::string_view content) {
    Entry e;
    e.name = std::move(name);
    e.content = std::string(content);
    e.crc = static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(e.content.data()),
              static_cast<uInt>(e.content.size())));
    entries_.push_back(std::move(e));
}

std::string Writer::finish() const {
    std::string out;
    std::vector<std::uint32_t> offsets;
    for (const auto& e : entries_) {
        offsets.push_back(static_cast<std::uint32_t>(out.size()));
        wr32(out, kLocalSig);
        wr16(out, 20);        // version needed
        wr16(out, 0);         // flags
        wr16(out, 0);         // method: store
        wr16(out, kDosTime);
        wr16(out, kDosDate);
        wr32(out, e.crc);
        wr32(out, static_cast<std::uint32_t>(e.content.size()));
        wr32(out, static_cast<std::uint32_t>(e.content.size()));
        wr16(out, static_cast<std::uint16_t>(e.name.size()));
        wr16(out, 0);  // extra
        out += e.name;
        out += e.content;
    }
    std::uint32_t central_start = static_cast<std::uint32_t>(out.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        wr32(out, kCentralSig);
        wr16(out, 20);  // version made by
        wr16(out, 20);  // version needed
        wr16(out, 0);
        wr16(out, 0);
        wr16(out, kDosTime);
        wr16(out, kDosDate);
        wr32(out, e.crc);
        wr32(out, static_cast<std::uint32_t>(e.content.size()));
        wr32(out, static_cast<std::uint32_t>(e.content.size()));
        wr16(out, static_cast<std::uint16_t>(e.name.size()));
        wr16(out, 0);  // extra
        wr16(out, 0);  // comment
        wr16(out, 0);  // disk
        wr16(out, 0);  // internal attrs
        wr32(out, 0);  // external attrs
        wr32(out, offsets[i]);
        out += e.name;
    }
    std::uint32_t central_size = static_cast<std::uint32_t>(out.size()) - central_start;
    wr32(out, kEndSig);
    wr16(out, 0);
    wr16(out, 0);
    wr16(out, static_cast<std::uint16_t>(entries_.size()));
    wr16(out, static_cast<std::uint16_t>(entries_.size()));
    wr32(out, central_size);
    wr32(out, central_start);
    wr16(out, 0);  // comment length
    return out;
}

}  // namespace regcheck::zip
