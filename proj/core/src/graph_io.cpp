#include "smellcast/graph_io.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <iterator>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "smellcast/errors.hpp"
#include "smellcast/text.hpp"

namespace smellcast {

namespace {

std::string_view strip_comment(std::string_view line) {
  auto pos = line.find('#');
  return pos == std::string_view::npos ? line : line.substr(0, pos);
}

void check_declared(const std::set<NodeId>& declared, const std::string& node,
                    const std::string& source, std::size_t line) {
  if (!declared.count(node)) {
    std::ostringstream msg;
    msg << source << ":" << line << ": edge references undeclared node '" << node << "'";
    throw StructuralError(msg.str());
  }
}

// Tokenizer for the DOT subset.
struct DotToken {
  enum Kind { Id, Arrow, UndirectedArrow, LBrace, RBrace, LBracket, RBracket, Semi, Comma, Equals, End };
  Kind kind;
  std::string value;
  std::size_t line;
};

class DotLexer {
 public:
  DotLexer(std::string text, std::string source) : text_(std::move(text)), source_(std::move(source)) {}

  DotToken next() {
    skip_space_and_comments();
    if (pos_ >= text_.size()) return {DotToken::End, "", line_};
    const char c = text_[pos_];
    const auto line = line_;
    switch (c) {
      case '{': ++pos_; return {DotToken::LBrace, "{", line};
      case '}': ++pos_; return {DotToken::RBrace, "}", line};
      case '[': ++pos_; return {DotToken::LBracket, "[", line};
      case ']': ++pos_; return {DotToken::RBracket, "]", line};
      case ';': ++pos_; return {DotToken::Semi, ";", line};
      case ',': ++pos_; return {DotToken::Comma, ",", line};
      case '=': ++pos_; return {DotToken::Equals, "=", line};
      case '"': return quoted();
      default: break;
    }
    if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
      pos_ += 2;
      return {DotToken::Arrow, "->", line};
    }
    if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
      pos_ += 2;
      return {DotToken::UndirectedArrow, "--", line};
    }
    if (is_id_char(c)) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && is_id_char(text_[pos_])) {
        if (text_[pos_] == '-' && pos_ + 1 < text_.size() &&
            (text_[pos_ + 1] == '>' || text_[pos_ + 1] == '-'))
          break;
        ++pos_;
      }
      return {DotToken::Id, text_.substr(start, pos_ - start), line};
    }
    throw ParseError(source_, line_, std::string("unexpected character '") + c + "'");
  }

 private:
  static bool is_id_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '$' ||
           c == ':' || c == '-' || static_cast<unsigned char>(c) >= 0x80;
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#' || (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/')) {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
        pos_ += 2;
        while (pos_ + 1 < text_.size() && !(text_[pos_] == '*' && text_[pos_ + 1] == '/')) {
          if (text_[pos_] == '\n') ++line_;
          ++pos_;
        }
        if (pos_ + 1 >= text_.size()) throw ParseError(source_, line_, "unterminated comment");
        pos_ += 2;
      } else {
        break;
      }
    }
  }

  DotToken quoted() {
    const auto line = line_;
    ++pos_;
    std::string value;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
        ++pos_;
      }
      if (text_[pos_] == '\n') ++line_;
      value += text_[pos_++];
    }
    if (pos_ >= text_.size()) throw ParseError(source_, line, "unterminated string");
    ++pos_;
    return {DotToken::Id, value, line};
  }

  std::string text_;
  std::string source_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

}  // namespace

GraphFormat graph_format_for(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".dot" || ext == ".gv") return GraphFormat::Dot;
  return GraphFormat::EdgeList;
}

GraphFormat parse_graph_format(std::string_view name) {
  if (name == "edge-list" || name == "edgelist") return GraphFormat::EdgeList;
  if (name == "dot" || name == "dot-subset") return GraphFormat::Dot;
  throw ArgumentError("unknown graph format '" + std::string(name) +
                      "' (expected edge-list or dot)");
}

DependencyGraph load_graph(const std::filesystem::path& path, GraphFormat format,
                           const GraphLoadOptions& options, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  if (format == GraphFormat::Dot) return parse_dot(in, path.string(), options, warnings);
  return parse_edge_list(in, path.string(), options, warnings);
}

DependencyGraph parse_edge_list(std::istream& in, const std::string& source_name,
                                const GraphLoadOptions& options,
                                std::vector<std::string>* warnings) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::string> version;
  std::vector<NodeId> nodes;
  std::vector<Edge> edges;
  std::set<NodeId> declared;

  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      auto header = text::trim(line);
      if (!text::starts_with(header, "#version")) {
        throw ParseError(source_name, line_no, "expected '#version <id>' header");
      }
      auto parts = text::split_ws(header);
      if (parts.size() != 2 || parts[0] != "#version") {
        throw ParseError(source_name, line_no, "expected '#version <id>' header");
      }
      version = std::string(parts[1]);
      continue;
    }
    auto body = text::trim(strip_comment(line));
    if (body.empty()) continue;
    auto parts = text::split_ws(body);
    if (parts[0] == "node") {
      if (parts.size() != 2) throw ParseError(source_name, line_no, "expected 'node <name>'");
      nodes.emplace_back(parts[1]);
      declared.emplace(parts[1]);
    } else if (parts[0] == "edge") {
      if (parts.size() != 3) {
        throw ParseError(source_name, line_no, "expected 'edge <source> <target>'");
      }
      Edge e{std::string(parts[1]), std::string(parts[2])};
      if (options.require_declared_nodes) {
        check_declared(declared, e.source, source_name, line_no);
        check_declared(declared, e.target, source_name, line_no);
      }
      edges.push_back(std::move(e));
    } else {
      throw ParseError(source_name, line_no,
                       "unknown record '" + std::string(parts[0]) + "' (expected node or edge)");
    }
  }
  if (!version) throw ParseError(source_name, 1, "missing '#version <id>' header");
  return DependencyGraph(*version, std::move(nodes), std::move(edges), warnings);
}

DependencyGraph parse_dot(std::istream& in, const std::string& source_name,
                          const GraphLoadOptions& options, std::vector<std::string>* warnings) {
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  DotLexer lex(std::move(content), source_name);

  auto expect = [&](DotToken::Kind kind, const char* what) {
    auto t = lex.next();
    if (t.kind != kind) throw ParseError(source_name, t.line, std::string("expected ") + what);
    return t;
  };

  auto tok = lex.next();
  if (tok.kind == DotToken::Id && tok.value == "strict") tok = lex.next();
  if (tok.kind != DotToken::Id || tok.value != "digraph") {
    throw ParseError(source_name, tok.line, "expected 'digraph'");
  }
  std::string version = std::filesystem::path(source_name).stem().string();
  tok = lex.next();
  if (tok.kind == DotToken::Id) {
    version = tok.value;
    tok = lex.next();
  }
  if (tok.kind != DotToken::LBrace) throw ParseError(source_name, tok.line, "expected '{'");

  std::vector<NodeId> nodes;
  std::vector<Edge> edges;
  std::set<NodeId> declared;

  auto skip_attributes = [&](DotToken& t) {
    // t is '['; consume through the matching ']'
    for (;;) {
      t = lex.next();
      if (t.kind == DotToken::RBracket) break;
      if (t.kind == DotToken::End) throw ParseError(source_name, t.line, "unterminated attribute list");
    }
    t = lex.next();
  };

  tok = lex.next();
  for (;;) {
    if (tok.kind == DotToken::RBrace) break;
    if (tok.kind == DotToken::End) throw ParseError(source_name, tok.line, "missing '}'");
    if (tok.kind == DotToken::Semi || tok.kind == DotToken::Comma) {
      tok = lex.next();
      continue;
    }
    if (tok.kind != DotToken::Id) {
      throw ParseError(source_name, tok.line, "unexpected '" + tok.value + "'");
    }
    if (tok.value == "subgraph") {
      throw ParseError(source_name, tok.line, "subgraphs are not supported");
    }
    if (tok.value == "graph" || tok.value == "node" || tok.value == "edge") {
      auto next = lex.next();
      if (next.kind != DotToken::LBracket) {
        throw ParseError(source_name, next.line, "expected '[' after '" + tok.value + "'");
      }
      skip_attributes(next);
      tok = next;
      continue;
    }

    std::vector<DotToken> chain{tok};
    auto next = lex.next();
    if (next.kind == DotToken::Equals) {
      expect(DotToken::Id, "attribute value");
      tok = lex.next();
      continue;
    }
    while (next.kind == DotToken::Arrow) {
      chain.push_back(expect(DotToken::Id, "node name after '->'"));
      next = lex.next();
    }
    if (next.kind == DotToken::UndirectedArrow) {
      throw ParseError(source_name, next.line, "undirected edges are not allowed in a digraph");
    }
    if (next.kind == DotToken::LBracket) skip_attributes(next);

    if (chain.size() == 1) {
      nodes.push_back(chain[0].value);
      declared.insert(chain[0].value);
    } else {
      for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        if (options.require_declared_nodes) {
          check_declared(declared, chain[i].value, source_name, chain[i].line);
          check_declared(declared, chain[i + 1].value, source_name, chain[i + 1].line);
        }
        edges.push_back({chain[i].value, chain[i + 1].value});
      }
    }
    tok = next;
  }
  auto trailing = lex.next();
  if (trailing.kind != DotToken::End) {
    throw ParseError(source_name, trailing.line, "unexpected content after closing '}'");
  }
  return DependencyGraph(version, std::move(nodes), std::move(edges), warnings);
}

void write_edge_list(std::ostream& out, const DependencyGraph& g) {
  out << "#version " << g.version_id() << '\n';
  for (const auto& n : g.nodes()) out << "node " << n << '\n';
  for (const auto& e : g.edges()) out << "edge " << e.source << ' ' << e.target << '\n';
}

std::string to_edge_list(const DependencyGraph& g) {
  std::ostringstream os;
  write_edge_list(os, g);
  return os.str();
}

void save_graph(const std::filesystem::path& path, const DependencyGraph& g) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_edge_list(out, g);
}

}  // namespace smellcast
