#ifndef SHADOWSCAN_ZIP_READER_HPP
#define SHADOWSCAN_ZIP_READER_HPP

#include <zlib.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "shadowscan/error.hpp"

namespace shadowscan::zip {

struct Entry {
  std::string name;
  std::uint16_t method = 0;
  std::uint32_t crc32 = 0;
  std::uint64_t compressed_size = 0;
  std::uint64_t uncompressed_size = 0;
  std::uint64_t local_header_offset = 0;
};

namespace detail {

constexpr std::uint32_t kLocalHeaderSig = 0x04034b50;
constexpr std::uint32_t kCentralHeaderSig = 0x02014b50;
constexpr std::uint32_t kEndOfCentralDirSig = 0x06054b50;
constexpr std::uint32_t kZip64EndSig = 0x06064b50;
constexpr std::uint32_t kZip64LocatorSig = 0x07064b50;
constexpr std::size_t kEocdSize = 22;
constexpr std::size_t kMaxComment = 0xFFFF;

inline std::uint16_t le16(const unsigned char* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }
inline std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
inline std::uint64_t le64(const unsigned char* p) {
  return static_cast<std::uint64_t>(le32(p)) | (static_cast<std::uint64_t>(le32(p + 4)) << 32);
}

}  // namespace detail

/// Random-access reader over a zip file. Construction reads only the
/// end-of-central-directory record and the central directory.
class Archive {
public:
  explicit Archive(const std::filesystem::path& file) : path_(file), in_(file, std::ios::binary) {
    using namespace detail;
    if (!in_) throw Error(Errc::IoFailure, "cannot open " + file.string());
    in_.seekg(0, std::ios::end);
    size_ = static_cast<std::uint64_t>(in_.tellg());
    if (size_ < kEocdSize) throw Error(Errc::NotAZip, file.string() + " is too small to be a zip archive");

    const std::uint64_t tail_len = std::min<std::uint64_t>(size_, kEocdSize + kMaxComment);
    auto tail = read_at(size_ - tail_len, tail_len);
    std::optional<std::size_t> eocd;
    for (std::size_t i = tail.size() - kEocdSize + 1; i-- > 0;) {
      if (le32(&tail[i]) == kEndOfCentralDirSig) {
        eocd = i;
        break;
      }
    }
    if (!eocd) throw Error(Errc::NotAZip, file.string() + " has no end-of-central-directory record");

    const unsigned char* e = &tail[*eocd];
    std::uint64_t count = le16(e + 10);
    std::uint64_t cd_size = le32(e + 12);
    std::uint64_t cd_offset = le32(e + 16);

    if (count == 0xFFFF || cd_size == 0xFFFFFFFF || cd_offset == 0xFFFFFFFF) {
      const std::uint64_t eocd_pos = size_ - tail_len + *eocd;
      if (eocd_pos < 20) corrupt("zip64 locator missing");
      auto loc = read_at(eocd_pos - 20, 20);
      if (le32(loc.data()) != kZip64LocatorSig) corrupt("zip64 locator missing");
      auto z64 = read_at(le64(loc.data() + 8), 56);
      if (le32(z64.data()) != kZip64EndSig) corrupt("bad zip64 end record");
      count = le64(z64.data() + 32);
      cd_size = le64(z64.data() + 40);
      cd_offset = le64(z64.data() + 48);
    }
    if (cd_offset > size_ || cd_size > size_ - cd_offset) corrupt("central directory out of bounds");

    auto cd = read_at(cd_offset, cd_size);
    std::size_t pos = 0;
    entries_.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, cd_size / 46)));
    for (std::uint64_t i = 0; i < count; ++i) {
      if (pos + 46 > cd.size() || le32(&cd[pos]) != kCentralHeaderSig) corrupt("bad central directory header");
      const unsigned char* h = &cd[pos];
      Entry ent;
      ent.method = le16(h + 10);
      ent.crc32 = le32(h + 16);
      ent.compressed_size = le32(h + 20);
      ent.uncompressed_size = le32(h + 24);
      const std::size_t name_len = le16(h + 28), extra_len = le16(h + 30), comment_len = le16(h + 32);
      ent.local_header_offset = le32(h + 42);
      if (pos + 46 + name_len + extra_len + comment_len > cd.size()) corrupt("central directory entry overruns");
      ent.name.assign(reinterpret_cast<const char*>(h + 46), name_len);
      apply_zip64_extra(ent, h + 46 + name_len, extra_len);
      entries_.push_back(std::move(ent));
      pos += 46 + name_len + extra_len + comment_len;
    }
  }

  const std::vector<Entry>& entries() const noexcept { return entries_; }

  const Entry* find(std::string_view name) const {
    for (const auto& e : entries_)
      if (e.name == name) return &e;
    return nullptr;
  }

  /// Decompressed bytes of `e`; supports stored and deflated entries.
  std::string read(const Entry& e) {
    using namespace detail;
    auto lh = read_at(e.local_header_offset, 30);
    if (le32(lh.data()) != kLocalHeaderSig) corrupt("bad local header for " + e.name);
    const std::uint64_t data_at = e.local_header_offset + 30 + le16(lh.data() + 26) + le16(lh.data() + 28);
    auto raw = read_at(data_at, e.compressed_size);

    std::string out;
    if (e.method == 0) {
      out.assign(raw.begin(), raw.end());
    } else if (e.method == 8) {
      out.resize(static_cast<std::size_t>(e.uncompressed_size));
      z_stream zs{};
      if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) corrupt("zlib init failed");
      zs.next_in = raw.data();
      zs.avail_in = static_cast<uInt>(raw.size());
      zs.next_out = reinterpret_cast<Bytef*>(out.data());
      zs.avail_out = static_cast<uInt>(out.size());
      const int rc = inflate(&zs, Z_FINISH);
      inflateEnd(&zs);
      if (rc != Z_STREAM_END || zs.total_out != e.uncompressed_size) corrupt("cannot inflate " + e.name);
    } else {
      corrupt("unsupported compression method " + std::to_string(e.method) + " for " + e.name);
    }
    const auto crc = ::crc32(0L, reinterpret_cast<const Bytef*>(out.data()), static_cast<uInt>(out.size()));
    if (crc != e.crc32) corrupt("crc mismatch for " + e.name);
    return out;
  }

private:
  [[noreturn]] void corrupt(const std::string& what) const {
    throw Error(Errc::CorruptArchive, path_.string() + ": " + what);
  }

  std::vector<unsigned char> read_at(std::uint64_t offset, std::uint64_t len) {
    if (offset > size_ || len > size_ - offset) corrupt("read past end of file");
    std::vector<unsigned char> buf(static_cast<std::size_t>(len));
    in_.clear();
    in_.seekg(static_cast<std::streamoff>(offset));
    in_.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(len));
    if (!in_) throw Error(Errc::IoFailure, "cannot read " + path_.string());
    return buf;
  }

  static void apply_zip64_extra(Entry& e, const unsigned char* p, std::size_t len) {
    using namespace detail;
    std::size_t i = 0;
    while (i + 4 <= len) {
      const std::uint16_t id = le16(p + i), sz = le16(p + i + 2);
      if (i + 4 + sz > len) return;
      if (id == 0x0001) {
        const unsigned char* f = p + i + 4;
        std::size_t off = 0;
        auto take = [&](std::uint64_t& field) {
          if (field == 0xFFFFFFFF && off + 8 <= sz) {
            field = le64(f + off);
            off += 8;
          }
        };
        take(e.uncompressed_size);
        take(e.compressed_size);
        take(e.local_header_offset);
        return;
      }
      i += 4 + sz;
    }
  }

  std::filesystem::path path_;
  std::ifstream in_;
  std::uint64_t size_ = 0;
  std::vector<Entry> entries_;
};

}  // namespace shadowscan::zip

#endif
