#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace superjet {

enum class GenKind { base, formal, odd };

struct GenRef {
  GenKind kind;
  std::size_t index;
};

/// The ordered generator sets of a graded-commutative polynomial algebra:
///   base   - even, untruncated polynomial variables (chart coordinates),
///   formal - even, truncated at total degree `truncation` (dx, xi generators),
///   odd    - Grassmann generators; each carries a Z-degree tag that is metadata only
///            (signs follow parity).
/// Names are pairwise distinct. At most 64 odd generators.
class GeneratorTable {
 public:
  GeneratorTable(std::vector<std::string> base, std::vector<std::string> formal,
                 std::vector<std::string> odd, int truncation, std::vector<int> odd_degrees = {});

  const std::vector<std::string>& base() const noexcept { return base_; }
  const std::vector<std::string>& formal() const noexcept { return formal_; }
  const std::vector<std::string>& odd() const noexcept { return odd_; }
  const std::vector<int>& odd_degrees() const noexcept { return odd_degrees_; }
  int truncation() const noexcept { return truncation_; }

  std::size_t base_count() const noexcept { return base_.size(); }
  std::size_t formal_count() const noexcept { return formal_.size(); }
  std::size_t odd_count() const noexcept { return odd_.size(); }

  std::optional<GenRef> find(std::string_view name) const;
  /// Like find, but throws UnknownGeneratorError.
  GenRef lookup(std::string_view name) const;
  const std::string& name(GenRef ref) const;

  friend bool operator==(const GeneratorTable& a, const GeneratorTable& b);

 private:
  std::vector<std::string> base_;
  std::vector<std::string> formal_;
  std::vector<std::string> odd_;
  std::vector<int> odd_degrees_;
  int truncation_;
};

using TablePtr = std::shared_ptr<const GeneratorTable>;

TablePtr make_table(std::vector<std::string> base, std::vector<std::string> formal = {},
                    std::vector<std::string> odd = {}, int truncation = 0,
                    std::vector<int> odd_degrees = {});

/// True when both pointers denote the same table (by identity or by content).
bool same_table(const TablePtr& a, const TablePtr& b);

}  // namespace superjet
