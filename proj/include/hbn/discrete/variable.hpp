#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hbn::discrete {

// A categorical variable: a name plus an ordered list of level labels.
// Level indices follow declaration order (index 0 is "no"/"warm"/"none").
struct VariableSpec {
  std::string name;
  std::vector<std::string> levels;

  std::size_t cardinality() const { return levels.size(); }

  int level_index(std::string_view label) const {
    for (std::size_t i = 0; i < levels.size(); ++i)
      if (levels[i] == label) return static_cast<int>(i);
    return -1;
  }
};

// Partial map variable name -> level index. Ordered so that iteration (and
// everything serialized from it) is deterministic.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::initializer_list<std::pair<const std::string, int>> init)
      : entries_(init) {}

  void set(const std::string& name, int level) { entries_[name] = level; }
  void erase(const std::string& name) { entries_.erase(name); }

  bool contains(const std::string& name) const { return entries_.count(name) > 0; }

  std::optional<int> get(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  const std::map<std::string, int>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, int> entries_;
};

}  // namespace hbn::discrete
