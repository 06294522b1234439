#include "smellcast/content.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "smellcast/errors.hpp"
#include "smellcast/text.hpp"

namespace smellcast {

namespace {

constexpr std::array<std::string_view, kChannelCount> kChannelNames = {
    "fields", "methods", "comments", "method_usage", "variable_defs"};

std::string valid_channel_list() {
  std::string out;
  for (auto n : kChannelNames) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

bool is_lower_token(std::string_view token) {
  for (char c : token) {
    if (std::isupper(static_cast<unsigned char>(c))) return false;
    if (std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return !token.empty();
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

const TokenBag& empty_bag() {
  static const TokenBag bag;
  return bag;
}

}  // namespace

std::string_view channel_name(Channel ch) { return kChannelNames[static_cast<std::size_t>(ch)]; }

std::optional<Channel> channel_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kChannelCount; ++i) {
    if (kChannelNames[i] == name) return static_cast<Channel>(i);
  }
  return std::nullopt;
}

TokenBag::TokenBag(std::initializer_list<std::pair<const std::string, std::uint64_t>> items) {
  for (const auto& [token, count] : items) add(token, count);
}

void TokenBag::add(std::string_view token, std::uint64_t count) {
  if (!is_lower_token(token)) {
    throw ArgumentError("token '" + std::string(token) + "' must be non-empty lowercase");
  }
  if (count == 0) throw ArgumentError("token '" + std::string(token) + "' has zero count");
  auto it = counts_.find(token);
  if (it == counts_.end()) {
    counts_.emplace(std::string(token), count);
  } else {
    it->second += count;
  }
}

void TokenBag::merge(const TokenBag& other) {
  for (const auto& [token, count] : other.counts_) counts_[token] += count;
}

std::uint64_t TokenBag::total() const noexcept {
  std::uint64_t sum = 0;
  for (const auto& [_, c] : counts_) sum += c;
  return sum;
}

std::uint64_t TokenBag::count(std::string_view token) const {
  auto it = counts_.find(token);
  return it == counts_.end() ? 0 : it->second;
}

void ContentCorpus::add(const NodeId& node, Channel ch, const TokenBag& bag) {
  bags_[node][static_cast<std::size_t>(ch)].merge(bag);
}

const TokenBag& ContentCorpus::bag(std::string_view node, Channel ch) const {
  auto it = bags_.find(node);
  if (it == bags_.end()) return empty_bag();
  return it->second[static_cast<std::size_t>(ch)];
}

bool ContentCorpus::contains(std::string_view node) const { return bags_.find(node) != bags_.end(); }

std::vector<NodeId> ContentCorpus::nodes_missing_from(const DependencyGraph& g) const {
  std::vector<NodeId> out;
  for (const auto& [node, _] : bags_) {
    if (!g.contains(node)) out.push_back(node);
  }
  return out;
}

ContentCorpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return parse_corpus(in, path.string());
}

ContentCorpus parse_corpus(std::istream& in, const std::string& source_name) {
  ContentCorpus corpus;
  std::string line;
  std::size_t line_no = 0;
  bool in_record = false;
  NodeId node;
  Channel channel = Channel::Fields;
  TokenBag bag;

  auto flush = [&] {
    if (in_record) corpus.add(node, channel, bag);
    in_record = false;
    bag = TokenBag{};
  };

  while (std::getline(in, line)) {
    ++line_no;
    auto trimmed = text::trim(line);
    if (line_no == 1 && text::starts_with(trimmed, "#version")) {
      auto parts = text::split_ws(trimmed);
      if (parts.size() != 2 || parts[0] != "#version") {
        throw ParseError(source_name, line_no, "expected '#version <id>'");
      }
      corpus = ContentCorpus(std::string(parts[1]));
      continue;
    }
    if (trimmed.empty()) {
      flush();
      continue;
    }
    if (trimmed.front() == '#') continue;

    const bool indented = line.front() == ' ' || line.front() == '\t';
    auto parts = text::split_ws(trimmed);
    if (!indented) {
      if (parts[0] != "bag" || parts.size() != 3) {
        throw ParseError(source_name, line_no, "expected 'bag <node> <channel>'");
      }
      flush();
      auto ch = channel_from_name(parts[2]);
      if (!ch) {
        throw ParseError(source_name, line_no,
                         "unknown channel '" + std::string(parts[2]) +
                             "' (valid channels: " + valid_channel_list() + ")");
      }
      node = NodeId(parts[1]);
      channel = *ch;
      in_record = true;
      continue;
    }
    if (!in_record) throw ParseError(source_name, line_no, "token line outside a bag record");
    if (parts.size() != 2) throw ParseError(source_name, line_no, "expected '<token> <count>'");
    auto count = text::parse_int(parts[1]);
    if (!count) throw ParseError(source_name, line_no, "count is not an integer");
    if (*count <= 0) {
      throw ParseError(source_name, line_no, "count must be positive, got " + std::string(parts[1]));
    }
    bag.add(to_lower(parts[0]), static_cast<std::uint64_t>(*count));
  }
  flush();
  return corpus;
}

void write_corpus(std::ostream& out, const ContentCorpus& corpus) {
  if (!corpus.version_id().empty()) out << "#version " << corpus.version_id() << '\n';
  for (const auto& [node, bags] : corpus.entries()) {
    for (auto ch : kAllChannels) {
      const auto& b = bags[static_cast<std::size_t>(ch)];
      if (b.empty()) continue;
      out << "bag " << node << ' ' << channel_name(ch) << '\n';
      for (const auto& [token, count] : b.counts()) out << "  " << token << ' ' << count << '\n';
      out << '\n';
    }
  }
}

TokenBag package_bag(const ContentCorpus& corpus, std::string_view node, Channel ch,
                     bool hierarchy) {
  TokenBag out = corpus.bag(node, ch);
  if (!hierarchy) return out;
  const std::string prefix = std::string(node) + ".";
  const auto& entries = corpus.entries();
  for (auto it = entries.lower_bound(prefix); it != entries.end(); ++it) {
    if (!text::starts_with(it->first, prefix)) break;
    out.merge(it->second[static_cast<std::size_t>(ch)]);
  }
  return out;
}

double cosine_similarity(const TokenBag& a, const TokenBag& b) {
  if (a.empty() || b.empty()) return 0.0;
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (const auto& [_, c] : a.counts()) na += static_cast<double>(c) * static_cast<double>(c);
  for (const auto& [_, c] : b.counts()) nb += static_cast<double>(c) * static_cast<double>(c);
  auto ia = a.counts().begin();
  auto ib = b.counts().begin();
  while (ia != a.counts().end() && ib != b.counts().end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += static_cast<double>(ia->second) * static_cast<double>(ib->second);
      ++ia;
      ++ib;
    }
  }
  const double score = dot / std::sqrt(na * nb);
  return std::min(1.0, std::max(0.0, score));
}

std::vector<std::string> tokenize_identifier(std::string_view identifier) {
  std::vector<std::string> raw;
  std::string current;
  auto push = [&] {
    if (!current.empty()) raw.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < identifier.size(); ++i) {
    const auto c = static_cast<unsigned char>(identifier[i]);
    if (!std::isalnum(c)) {
      push();
      continue;
    }
    if (!current.empty()) {
      const auto prev = static_cast<unsigned char>(current.back());
      const bool lower_to_upper = std::islower(prev) && std::isupper(c);
      // "HTTPServer" splits before the last capital of an acronym run.
      const bool acronym_end = std::isupper(prev) && std::isupper(c) && i + 1 < identifier.size() &&
                               std::islower(static_cast<unsigned char>(identifier[i + 1]));
      const bool digit_switch = (std::isdigit(prev) != 0) != (std::isdigit(c) != 0);
      if (lower_to_upper || acronym_end || digit_switch) push();
    }
    current += static_cast<char>(c);
  }
  push();

  std::vector<std::string> out;
  for (auto& tok : raw) {
    if (tok.size() < 2) continue;
    bool numeric = true;
    for (char c : tok) numeric = numeric && std::isdigit(static_cast<unsigned char>(c));
    if (numeric) continue;
    out.push_back(to_lower(tok));
  }
  return out;
}

}  // namespace smellcast
