#pragma once

#include "jetgeom/symkernel/symkernel.hpp"

#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace jetgeom {

using sym::RatFunc;
using sym::Rational;

enum class IndexClass { Temporal, Spatial };
enum class Variance { Upper, Lower };

struct IndexSlot {
    IndexClass index_class;
    Variance variance;
    int pair = -1;  // slot index of the partner in a vertical pair ^(a)_(i), or -1
    std::string label;

    friend bool operator==(const IndexSlot&, const IndexSlot&) = default;
};

/// Parses an ASCII tensor key such as "P^(m)(beta)_(mu)alpha(j)" into its slots.
///
/// Upper slots come first, then lower slots, each in written order. Greek labels
/// (alpha beta gamma eta mu nu) are temporal, Latin letters are spatial. A label in
/// parentheses is a vertical-pair member; the k-th parenthesized upper slot pairs with
/// the k-th parenthesized lower slot.
std::vector<IndexSlot> parse_signature(std::string_view key);

/// Dense d-tensor of canonical components. The shape is p for temporal and n for
/// spatial slots; components are stored row-major in slot order.
class DTensor {
public:
    DTensor() = default;
    DTensor(std::string key, int p, int n);

    const std::string& key() const { return key_; }
    std::span<const IndexSlot> slots() const { return slots_; }
    std::span<const int> shape() const { return shape_; }
    int rank() const { return static_cast<int>(slots_.size()); }
    std::size_t size() const { return data_.size(); }

    RatFunc& operator()(std::initializer_list<int> index) { return data_[offset(index)]; }
    const RatFunc& operator()(std::initializer_list<int> index) const { return data_[offset(index)]; }
    RatFunc& at(std::span<const int> index) { return data_[offset(index)]; }
    const RatFunc& at(std::span<const int> index) const { return data_[offset(index)]; }

    RatFunc& flat(std::size_t k) { return data_[k]; }
    const RatFunc& flat(std::size_t k) const { return data_[k]; }
    std::vector<int> index_of(std::size_t k) const;

    /// Calls f(index, component) for every component in storage order.
    template <class F>
    void for_each(F&& f) const {
        for (std::size_t k = 0; k < data_.size(); ++k) f(index_of(k), data_[k]);
    }

    /// Fills every component from f(index).
    template <class F>
    void fill(F&& f) {
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] = f(index_of(k));
    }

    bool is_symbolically_zero() const;

    friend bool operator==(const DTensor& a, const DTensor& b) {
        return a.key_ == b.key_ && a.shape_ == b.shape_ && a.data_ == b.data_;
    }

private:
    friend DTensor difference(const DTensor& a, const DTensor& b, std::string key);

    std::size_t offset(std::span<const int> index) const;
    std::size_t offset(std::initializer_list<int> index) const {
        return offset(std::span<const int>(index.begin(), index.size()));
    }

    std::string key_;
    std::vector<IndexSlot> slots_;
    std::vector<int> shape_;
    std::vector<RatFunc> data_;
};

/// Component-wise a - b; shapes must agree.
DTensor difference(const DTensor& a, const DTensor& b, std::string key);

/// "1,2,1": the 1-based index tuple used in reports.
std::string index_label(std::span<const int> index);

struct TensorZeroResult : sym::ZeroTestResult {
    std::string component;  // index label of the first failing component
};

/// Zero test over all components; the tier is the weakest over components.
TensorZeroResult is_zero(const DTensor& t, int dimension, const sym::ZeroTestOptions& opts = {});

}  // namespace jetgeom
