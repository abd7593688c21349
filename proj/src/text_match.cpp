#include "schenql/text_match.hpp"

#include <algorithm>
#include <set>

namespace schenql {

namespace {

char lower_char(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool is_word_char(char c) {
  auto u = static_cast<unsigned char>(c);
  if (u >= 0x80) return true;
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

// Words with ASCII punctuation trimmed from both ends ("Practice," -> "practice").
std::vector<std::string> split_lower(std::string_view s, bool split_hyphen) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    std::size_t b = 0;
    std::size_t e = cur.size();
    while (b < e && !is_word_char(cur[b])) ++b;
    while (e > b && !is_word_char(cur[e - 1])) --e;
    if (b < e) out.push_back(cur.substr(b, e - b));
    cur.clear();
  };
  for (char c : s) {
    if (is_space(c) || (split_hyphen && c == '-')) {
      flush();
    } else {
      cur.push_back(lower_char(c));
    }
  }
  flush();
  return out;
}

class TermParser {
 public:
  explicit TermParser(std::string_view text) : text_(text) {}

  TermExpr parse() {
    auto expr = parse_or();
    skip_space();
    if (pos_ < text_.size()) {
      throw TermSyntaxError(std::string("unexpected '") + text_[pos_] + "' in search terms", pos_);
    }
    return expr;
  }

 private:
  TermExpr parse_or() {
    std::vector<TermExpr> children;
    children.push_back(parse_and());
    while (peek() == '|') {
      ++pos_;
      children.push_back(parse_and());
    }
    if (children.size() == 1) return std::move(children.front());
    return TermExpr{TermExpr::Or{std::move(children)}};
  }

  TermExpr parse_and() {
    std::vector<TermExpr> children;
    auto add = [&children](TermExpr e, bool spliceable) {
      if (spliceable) {
        if (auto* a = std::get_if<TermExpr::And>(&e.node)) {
          for (auto& c : a->children) children.push_back(std::move(c));
          return;
        }
      }
      children.push_back(std::move(e));
    };
    auto [first, first_words] = parse_atom();
    add(std::move(first), first_words);
    while (peek() == ':') {
      ++pos_;
      auto [next, words] = parse_atom();
      add(std::move(next), words);
    }
    if (children.size() == 1) return std::move(children.front());
    return TermExpr{TermExpr::And{std::move(children)}};
  }

  // Second member is true when the atom is a bare run of words.
  std::pair<TermExpr, bool> parse_atom() {
    char c = peek();
    if (c == '(') {
      std::size_t open = pos_++;
      auto inner = parse_or();
      if (peek() != ')') throw TermSyntaxError("unbalanced '(' in search terms", open);
      ++pos_;
      return {std::move(inner), false};
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ':' && text_[pos_] != '|' && text_[pos_] != '(' &&
           text_[pos_] != ')') {
      ++pos_;
    }
    auto words = word_tokens(text_.substr(start, pos_ - start));
    if (words.empty()) throw TermSyntaxError("empty operand in search terms", start);
    if (words.size() == 1) return {TermExpr{TermExpr::Word{std::move(words.front())}}, true};
    std::vector<TermExpr> children;
    for (auto& w : words) children.push_back(TermExpr{TermExpr::Word{std::move(w)}});
    return {TermExpr{TermExpr::And{std::move(children)}}, true};
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void skip_space() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

bool eval_terms(const std::set<std::string>& words, const TermExpr& expr) {
  return std::visit(
      [&words](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, TermExpr::Word>) {
          return words.count(n.token) > 0;
        } else if constexpr (std::is_same_v<T, TermExpr::And>) {
          return std::all_of(n.children.begin(), n.children.end(),
                             [&words](const TermExpr& c) { return eval_terms(words, c); });
        } else {
          return std::any_of(n.children.begin(), n.children.end(),
                             [&words](const TermExpr& c) { return eval_terms(words, c); });
        }
      },
      expr.node);
}

void collect_words(const TermExpr& expr, std::vector<std::string>& out) {
  std::visit(
      [&out](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, TermExpr::Word>) {
          if (std::find(out.begin(), out.end(), n.token) == out.end()) out.push_back(n.token);
        } else {
          for (const auto& c : n.children) collect_words(c, out);
        }
      },
      expr.node);
}

}  // namespace

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = lower_char(c);
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (lower_char(a[i]) != lower_char(b[i])) return false;
  }
  return true;
}

std::size_t utf8_length(std::string_view s) {
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    auto lead = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    if (lead >= 0xF0 && lead < 0xF8) {
      len = 4;
    } else if (lead >= 0xE0) {
      len = lead < 0xF0 ? 3 : 1;
    } else if (lead >= 0xC0) {
      len = 2;
    }
    bool ok = i + len <= s.size();
    for (std::size_t k = 1; ok && k < len; ++k) ok = (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
    i += ok ? len : 1;
    ++count;
  }
  return count;
}

std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (is_word_char(c)) {
      cur.push_back(lower_char(c));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string_view strip_name_suffix(std::string_view name) {
  if (name.size() < 6) return name;
  auto tail = name.substr(name.size() - 4);
  if (!std::all_of(tail.begin(), tail.end(), [](char c) { return c >= '0' && c <= '9'; })) return name;
  if (name[name.size() - 5] != ' ') return name;
  return name.substr(0, name.size() - 5);
}

bool match_name(std::string_view candidate, std::string_view pattern, NameMatchMode mode) {
  switch (mode) {
    case NameMatchMode::strict: return candidate == pattern;
    case NameMatchMode::standard: return iequals(strip_name_suffix(candidate), pattern);
    case NameMatchMode::fuzzy: {
      auto wanted = split_lower(pattern, false);
      if (wanted.empty()) return false;
      auto have = split_lower(candidate, true);
      return std::all_of(wanted.begin(), wanted.end(), [&have](const std::string& w) {
        return std::find(have.begin(), have.end(), w) != have.end();
      });
    }
  }
  return false;
}

TermExpr parse_terms(std::string_view literal) { return TermParser(literal).parse(); }

bool match_terms(std::string_view text, const TermExpr& expr) {
  auto tokens = word_tokens(text);
  std::set<std::string> words(tokens.begin(), tokens.end());
  return eval_terms(words, expr);
}

std::vector<std::string> term_words(const TermExpr& expr) {
  std::vector<std::string> out;
  collect_words(expr, out);
  return out;
}

std::string render_terms(const TermExpr& expr) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, TermExpr::Word>) {
          return n.token;
        } else {
          constexpr bool is_and = std::is_same_v<T, TermExpr::And>;
          std::string out;
          for (std::size_t i = 0; i < n.children.size(); ++i) {
            if (i > 0) out += is_and ? ":" : "|";
            const auto& child = n.children[i];
            bool group = is_and ? !std::holds_alternative<TermExpr::Word>(child.node)
                                : std::holds_alternative<TermExpr::Or>(child.node);
            out += group ? "(" + render_terms(child) + ")" : render_terms(child);
          }
          return out;
        }
      },
      expr.node);
}

std::string searchable_text(const Publication& p) {
  if (!p.abstract_text) return p.title;
  return p.title + "\n" + *p.abstract_text;
}

}  // namespace schenql
