#include "jetgeom/geometry/dtensor.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace jetgeom {
namespace {

constexpr std::array<std::string_view, 6> kGreek = {"alpha", "beta", "gamma", "eta", "mu", "nu"};
constexpr std::string_view kLatin = "ijklmr";

/// Reads one index label at s[pos]; returns (label, is_temporal).
std::pair<std::string, bool> read_label(std::string_view s, std::size_t& pos) {
    for (auto g : kGreek) {
        if (s.substr(pos, g.size()) == g) {
            pos += g.size();
            return {std::string(g), true};
        }
    }
    if (pos < s.size() && kLatin.find(s[pos]) != std::string_view::npos) return {std::string(1, s[pos++]), false};
    throw std::invalid_argument("bad index label in tensor key at " + std::to_string(pos) + ": " + std::string(s));
}

void read_block(std::string_view s, Variance v, std::vector<IndexSlot>& out, std::vector<int>& paired) {
    std::size_t pos = 0;
    while (pos < s.size()) {
        bool paren = s[pos] == '(';
        if (paren) ++pos;
        auto [label, temporal] = read_label(s, pos);
        if (paren) {
            if (pos >= s.size() || s[pos] != ')') throw std::invalid_argument("unbalanced '(' in tensor key");
            ++pos;
            paired.push_back(static_cast<int>(out.size()));
        }
        out.push_back({temporal ? IndexClass::Temporal : IndexClass::Spatial, v, -1, std::move(label)});
    }
}

}  // namespace

std::vector<IndexSlot> parse_signature(std::string_view key) {
    auto up = key.find('^');
    auto down = key.find('_');
    std::string_view upper, lower;
    if (up != std::string_view::npos) upper = key.substr(up + 1, down == std::string_view::npos ? down : down - up - 1);
    if (down != std::string_view::npos) lower = key.substr(down + 1);
    if (up != std::string_view::npos && down != std::string_view::npos && down < up)
        throw std::invalid_argument("tensor key must list upper indices first: " + std::string(key));

    std::vector<IndexSlot> slots;
    std::vector<int> pu, pl;
    read_block(upper, Variance::Upper, slots, pu);
    read_block(lower, Variance::Lower, slots, pl);
    if (pu.size() != pl.size()) throw std::invalid_argument("unpaired vertical index in tensor key: " + std::string(key));
    for (std::size_t k = 0; k < pu.size(); ++k) {
        auto& a = slots[static_cast<std::size_t>(pu[k])];
        auto& b = slots[static_cast<std::size_t>(pl[k])];
        if (a.index_class == b.index_class)
            throw std::invalid_argument("vertical pair must join a temporal and a spatial index: " + std::string(key));
        a.pair = pl[k];
        b.pair = pu[k];
    }
    return slots;
}

DTensor::DTensor(std::string key, int p, int n) : key_(std::move(key)), slots_(parse_signature(key_)) {
    std::size_t total = 1;
    for (const auto& s : slots_) {
        shape_.push_back(s.index_class == IndexClass::Temporal ? p : n);
        total *= static_cast<std::size_t>(shape_.back());
    }
    data_.resize(total);
}

std::size_t DTensor::offset(std::span<const int> index) const {
    if (index.size() != shape_.size()) throw std::out_of_range(key_ + ": wrong number of indices");
    std::size_t k = 0;
    for (std::size_t s = 0; s < shape_.size(); ++s) {
        if (index[s] < 0 || index[s] >= shape_[s]) throw std::out_of_range(key_ + ": index out of range");
        k = k * static_cast<std::size_t>(shape_[s]) + static_cast<std::size_t>(index[s]);
    }
    return k;
}

std::vector<int> DTensor::index_of(std::size_t k) const {
    std::vector<int> idx(shape_.size());
    for (std::size_t s = shape_.size(); s-- > 0;) {
        idx[s] = static_cast<int>(k % static_cast<std::size_t>(shape_[s]));
        k /= static_cast<std::size_t>(shape_[s]);
    }
    return idx;
}

bool DTensor::is_symbolically_zero() const {
    for (const auto& c : data_)
        if (!c.is_zero()) return false;
    return true;
}

DTensor difference(const DTensor& a, const DTensor& b, std::string key) {
    if (!std::equal(a.shape().begin(), a.shape().end(), b.shape().begin(), b.shape().end()))
        throw std::invalid_argument("difference of tensors with different shapes: " + a.key() + ", " + b.key());
    DTensor out = a;
    out.key_ = std::move(key);
    for (std::size_t k = 0; k < a.size(); ++k) out.flat(k) = a.flat(k) - b.flat(k);
    return out;
}

std::string index_label(std::span<const int> index) {
    std::string s;
    for (std::size_t k = 0; k < index.size(); ++k) {
        if (k) s += ',';
        s += std::to_string(index[k] + 1);
    }
    return s;
}

TensorZeroResult is_zero(const DTensor& t, int dimension, const sym::ZeroTestOptions& opts) {
    TensorZeroResult r;
    r.zero = true;
    r.tier = sym::ZeroTier::Symbolic;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (t.flat(k).is_zero()) continue;
        auto c = sym::is_zero(t.flat(k), dimension, opts);
        r.max_abs = std::max(r.max_abs, c.max_abs);
        if (c.zero) {
            r.tier = sym::ZeroTier::Numeric;
            continue;
        }
        if (r.zero) {
            r.zero = false;
            r.witness = c.witness;
            r.component = index_label(t.index_of(k));
        }
    }
    if (!r.zero) r.tier = sym::ZeroTier::Failed;
    return r;
}

}  // namespace jetgeom
