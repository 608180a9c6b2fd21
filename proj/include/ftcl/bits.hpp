#pragma once

#include <cassert>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <vector>

namespace ftcl {

/// Fixed-width bit string backed by 64-bit words, LSB-first.
/// Used as the XOR accumulator for packed edge identifiers.
class Bits {
 public:
  Bits() = default;
  explicit Bits(int width) : width_(width), w_((width + 63) / 64, 0) {}

  int width() const { return width_; }

  bool zero() const {
    for (uint64_t x : w_)
      if (x != 0) return false;
    return true;
  }

  void clear() { std::fill(w_.begin(), w_.end(), 0); }

  Bits& operator^=(const Bits& o) {
    assert(width_ == o.width_);
    for (size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    return *this;
  }

  friend Bits operator^(Bits a, const Bits& b) {
    a ^= b;
    return a;
  }

  bool operator==(const Bits& o) const { return width_ == o.width_ && w_ == o.w_; }
  bool operator!=(const Bits& o) const { return !(*this == o); }

  /// Read `len` bits (len <= 64) starting at bit offset `pos`.
  uint64_t get(int pos, int len) const {
    assert(len >= 0 && len <= 64 && pos + len <= width_);
    if (len == 0) return 0;
    int word = pos / 64, off = pos % 64;
    uint64_t v = w_[word] >> off;
    if (off + len > 64) v |= w_[word + 1] << (64 - off);
    if (len < 64) v &= (uint64_t{1} << len) - 1;
    return v;
  }

  /// Write `len` bits (len <= 64) of `val` at bit offset `pos`.
  void set(int pos, int len, uint64_t val) {
    assert(len >= 0 && len <= 64 && pos + len <= width_);
    if (len == 0) return;
    if (len < 64) val &= (uint64_t{1} << len) - 1;
    int word = pos / 64, off = pos % 64;
    uint64_t lo_mask = (len < 64 ? (uint64_t{1} << len) - 1 : ~uint64_t{0}) << off;
    w_[word] = (w_[word] & ~lo_mask) | (val << off);
    if (off + len > 64) {
      int hi = off + len - 64;
      uint64_t hi_mask = (uint64_t{1} << hi) - 1;
      w_[word + 1] = (w_[word + 1] & ~hi_mask) | (val >> (64 - off));
    }
  }

  const std::vector<uint64_t>& words() const { return w_; }

 private:
  int width_ = 0;
  std::vector<uint64_t> w_;
};

/// Append-only packed bit stream. Fields are written LSB-first so the
/// resulting byte layout is little-endian and position-independent.
class BitWriter {
 public:
  void put(uint64_t val, int len) {
    assert(len >= 0 && len <= 64);
    if (len < 64 && len > 0) assert((val >> len) == 0 || true), val &= (uint64_t{1} << len) - 1;
    size_t need = (nbits_ + len + 63) / 64;
    if (w_.size() < need) w_.resize(need, 0);
    int word = static_cast<int>(nbits_ / 64), off = static_cast<int>(nbits_ % 64);
    if (len > 0) {
      w_[word] |= val << off;
      if (off + len > 64) w_[word + 1] |= val >> (64 - off);
    }
    nbits_ += len;
  }

  void put_bits(const Bits& b) {
    int full = b.width() / 64 * 64;
    for (int i = 0; i < full; i += 64) put(b.get(i, 64), 64);
    if (b.width() > full) put(b.get(full, b.width() - full), b.width() - full);
  }

  size_t bit_size() const { return nbits_; }

  std::vector<uint8_t> bytes() const {
    std::vector<uint8_t> out((nbits_ + 7) / 8);
    if (!out.empty()) std::memcpy(out.data(), w_.data(), out.size());
    return out;
  }

 private:
  std::vector<uint64_t> w_;
  size_t nbits_ = 0;
};

/// Sequential reader over a packed bit stream produced by BitWriter.
class BitReader {
 public:
  BitReader(const uint8_t* data, size_t nbytes) : data_(data), nbits_(nbytes * 8) {}

  uint64_t get(int len) {
    assert(len >= 0 && len <= 64);
    if (pos_ + len > nbits_) throw std::runtime_error("label bitstream truncated");
    uint64_t v = 0;
    for (int got = 0; got < len;) {
      size_t byte = (pos_ + got) / 8;
      int off = static_cast<int>((pos_ + got) % 8);
      int take = std::min(8 - off, len - got);
      uint64_t chunk = (uint64_t{data_[byte]} >> off) & ((uint64_t{1} << take) - 1);
      v |= chunk << got;
      got += take;
    }
    pos_ += len;
    return v;
  }

  Bits get_bits(int width) {
    Bits b(width);
    int at = 0;
    while (at < width) {
      int take = std::min(64, width - at);
      b.set(at, take, get(take));
      at += take;
    }
    return b;
  }

  size_t bit_pos() const { return pos_; }
  size_t bit_size() const { return nbits_; }

 private:
  const uint8_t* data_;
  size_t nbits_;
  size_t pos_ = 0;
};

}  // namespace ftcl
