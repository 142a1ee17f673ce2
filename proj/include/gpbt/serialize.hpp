#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gpbt/errors.hpp"

namespace gpbt {

using Blob = std::vector<std::uint8_t>;

// Little-endian field writer for checkpoint blobs.
class BlobWriter {
public:
    void put_u16(std::uint16_t v) { put_bytes(v, 2); }
    void put_u32(std::uint32_t v) { put_bytes(v, 4); }
    void put_u64(std::uint64_t v) { put_bytes(v, 8); }
    void put_i64(std::int64_t v) { put_u64(static_cast<std::uint64_t>(v)); }
    void put_f64(double v) { put_u64(std::bit_cast<std::uint64_t>(v)); }

    Blob take() { return std::move(bytes_); }

private:
    void put_bytes(std::uint64_t v, int n) {
        for (int i = 0; i < n; ++i) {
            bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        }
    }
    Blob bytes_;
};

// Matching reader; throws SerializationError on truncation or trailing data.
class BlobReader {
public:
    explicit BlobReader(const Blob& bytes) : bytes_(bytes) {}

    std::uint16_t get_u16() { return static_cast<std::uint16_t>(get_bytes(2)); }
    std::uint32_t get_u32() { return static_cast<std::uint32_t>(get_bytes(4)); }
    std::uint64_t get_u64() { return get_bytes(8); }
    std::int64_t get_i64() { return static_cast<std::int64_t>(get_u64()); }
    double get_f64() { return std::bit_cast<double>(get_u64()); }

    void expect_end() const {
        if (pos_ != bytes_.size()) {
            throw SerializationError("checkpoint blob has trailing bytes");
        }
    }

private:
    std::uint64_t get_bytes(int n) {
        if (pos_ + static_cast<std::size_t>(n) > bytes_.size()) {
            throw SerializationError("checkpoint blob truncated at offset " +
                                     std::to_string(pos_));
        }
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) {
            v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
        }
        pos_ += static_cast<std::size_t>(n);
        return v;
    }

    const Blob& bytes_;
    std::size_t pos_ = 0;
};

}  // namespace gpbt
