#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlre {

/// Fixed-width bit vector used for gate configuration values (LUT init
/// masks, BRAM contents) and truth tables. Bit 0 is the least significant
/// bit of the first hex nibble written last, i.e. to_hex() prints the most
/// significant nibble first.
class BitVec {
public:
    BitVec() = default;

    explicit BitVec(size_t width, uint64_t value = 0) : width_(width), words_((width + 63) / 64, 0) {
        if (!words_.empty())
            words_[0] = value;
        trim();
    }

    static BitVec from_hex(const std::string& hex, size_t width) {
        std::string digits = hex;
        if (digits.rfind("0x", 0) == 0 || digits.rfind("0X", 0) == 0)
            digits = digits.substr(2);
        if (digits.empty())
            throw std::invalid_argument("empty hex string");
        BitVec bv(width);
        size_t bit = 0;
        for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
            char c = *it;
            uint64_t nibble;
            if (c >= '0' && c <= '9')
                nibble = uint64_t(c - '0');
            else if (c >= 'a' && c <= 'f')
                nibble = uint64_t(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F')
                nibble = uint64_t(c - 'A' + 10);
            else
                throw std::invalid_argument("bad hex digit in '" + hex + "'");
            for (int k = 0; k < 4; k++, bit++) {
                if ((nibble >> k) & 1) {
                    if (bit >= width)
                        throw std::invalid_argument("hex value '" + hex + "' wider than " + std::to_string(width) + " bits");
                    bv.set(bit, true);
                }
            }
        }
        return bv;
    }

    /// Hex width check that treats leading zero digits as padding: "0x0f" is
    /// acceptable for a 4-bit value, "0x1f" is not.
    static size_t hex_digit_count(const std::string& hex) {
        std::string digits = hex;
        if (digits.rfind("0x", 0) == 0 || digits.rfind("0X", 0) == 0)
            digits = digits.substr(2);
        return digits.size();
    }

    size_t width() const { return width_; }

    bool get(size_t i) const {
        if (i >= width_)
            throw std::out_of_range("BitVec::get");
        return (words_[i / 64] >> (i % 64)) & 1;
    }

    void set(size_t i, bool v) {
        if (i >= width_)
            throw std::out_of_range("BitVec::set");
        if (v)
            words_[i / 64] |= uint64_t(1) << (i % 64);
        else
            words_[i / 64] &= ~(uint64_t(1) << (i % 64));
    }

    bool is_zero() const {
        for (uint64_t w : words_)
            if (w)
                return false;
        return true;
    }

    bool all_ones() const {
        for (size_t i = 0; i < width_; i++)
            if (!get(i))
                return false;
        return true;
    }

    uint64_t to_u64() const {
        if (width_ > 64)
            throw std::logic_error("BitVec wider than 64 bits");
        return words_.empty() ? 0 : words_[0];
    }

    std::string to_hex() const {
        size_t nibbles = (width_ + 3) / 4;
        if (nibbles == 0)
            nibbles = 1;
        std::string out(nibbles, '0');
        for (size_t n = 0; n < nibbles; n++) {
            unsigned v = 0;
            for (int k = 0; k < 4; k++) {
                size_t bit = n * 4 + k;
                if (bit < width_ && get(bit))
                    v |= 1u << k;
            }
            out[nibbles - 1 - n] = "0123456789abcdef"[v];
        }
        return "0x" + out;
    }

    bool operator==(const BitVec& o) const { return width_ == o.width_ && words_ == o.words_; }
    bool operator!=(const BitVec& o) const { return !(*this == o); }

private:
    void trim() {
        size_t extra = words_.size() * 64 - width_;
        if (!words_.empty() && extra > 0 && extra < 64)
            words_.back() &= ~uint64_t(0) >> extra;
    }

    size_t width_ = 0;
    std::vector<uint64_t> words_;
};

} // namespace nlre
