#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smellcast/graph.hpp"

namespace smellcast {

// Textual content channels extracted per package.
enum class Channel : std::uint8_t { Fields, Methods, Comments, MethodUsage, VariableDefs };

inline constexpr std::size_t kChannelCount = 5;
inline constexpr std::array<Channel, kChannelCount> kAllChannels = {
    Channel::Fields, Channel::Methods, Channel::Comments, Channel::MethodUsage,
    Channel::VariableDefs};

std::string_view channel_name(Channel ch);
std::optional<Channel> channel_from_name(std::string_view name);

// Token -> positive count. Tokens are non-empty and lowercase.
class TokenBag {
 public:
  using Map = std::map<std::string, std::uint64_t, std::less<>>;

  TokenBag() = default;
  TokenBag(std::initializer_list<std::pair<const std::string, std::uint64_t>> items);

  // Throws ArgumentError for an empty/non-lowercase token or a zero count.
  void add(std::string_view token, std::uint64_t count = 1);
  void merge(const TokenBag& other);

  bool empty() const noexcept { return counts_.empty(); }
  std::size_t size() const noexcept { return counts_.size(); }
  std::uint64_t total() const noexcept;
  std::uint64_t count(std::string_view token) const;
  const Map& counts() const noexcept { return counts_; }

  friend bool operator==(const TokenBag&, const TokenBag&) = default;

 private:
  Map counts_;
};

// Per-package token bags for one version. Missing (node, channel) entries
// behave as empty bags.
class ContentCorpus {
 public:
  using Bags = std::array<TokenBag, kChannelCount>;

  ContentCorpus() = default;
  explicit ContentCorpus(std::string version_id) : version_(std::move(version_id)) {}

  const std::string& version_id() const noexcept { return version_; }
  std::size_t node_count() const noexcept { return bags_.size(); }
  bool empty() const noexcept { return bags_.empty(); }

  void add(const NodeId& node, Channel ch, const TokenBag& bag);
  const TokenBag& bag(std::string_view node, Channel ch) const;
  bool contains(std::string_view node) const;
  const std::map<NodeId, Bags, std::less<>>& entries() const noexcept { return bags_; }

  // Corpus nodes not present in `g`; the pipeline reports them as warnings.
  std::vector<NodeId> nodes_missing_from(const DependencyGraph& g) const;

  friend bool operator==(const ContentCorpus&, const ContentCorpus&) = default;

 private:
  std::string version_;
  std::map<NodeId, Bags, std::less<>> bags_;
};

// Record format:
//   #version <id>            (optional first line)
//   bag <node> <channel>
//     <token> <count>
//   <blank line ends the record>
ContentCorpus load_corpus(const std::filesystem::path& path);
ContentCorpus parse_corpus(std::istream& in, const std::string& source_name);
void write_corpus(std::ostream& out, const ContentCorpus& corpus);

// With `hierarchy` set, the bag of `node` is summed with the bags of every
// corpus node named "<node>.<anything>" (nested sub-packages).
TokenBag package_bag(const ContentCorpus& corpus, std::string_view node, Channel ch,
                     bool hierarchy);

// dot(a, b) / (|a| |b|) over raw counts; 0 when either bag is empty.
double cosine_similarity(const TokenBag& a, const TokenBag& b);

// Identifier normalization for extractor authors: splits camelCase, digits
// and non-alphanumerics, lowercases, then drops tokens shorter than two
// characters and purely numeric tokens.
std::vector<std::string> tokenize_identifier(std::string_view identifier);

}  // namespace smellcast
