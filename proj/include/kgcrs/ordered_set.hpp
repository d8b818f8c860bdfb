#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace kgcrs {

/// Insertion-ordered set without duplicates. Sizes here are conversation-scale
/// (a handful of items), so membership is a linear scan.
template <typename T>
class OrderedSet {
 public:
  using const_iterator = typename std::vector<T>::const_iterator;

  OrderedSet() = default;
  OrderedSet(std::initializer_list<T> items) {
    for (const T& t : items) insert(t);
  }

  bool contains(const T& t) const { return std::find(items_.begin(), items_.end(), t) != items_.end(); }

  bool insert(const T& t) {
    if (contains(t)) return false;
    items_.push_back(t);
    return true;
  }

  bool erase(const T& t) {
    auto it = std::find(items_.begin(), items_.end(), t);
    if (it == items_.end()) return false;
    items_.erase(it);
    return true;
  }

  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  const T& back() const { return items_.back(); }
  const_iterator begin() const { return items_.begin(); }
  const_iterator end() const { return items_.end(); }
  const std::vector<T>& items() const { return items_; }

  friend bool operator==(const OrderedSet&, const OrderedSet&) = default;

 private:
  std::vector<T> items_;
};

}  // namespace kgcrs
