#include "spectra/spectral_type.hpp"

#include <algorithm>
#include <stdexcept>

namespace spectra {

long long PtNode::total() const {
  if (is_leaf()) {
    long long s = 0;
    for (long long m : chain) s += m;
    return s;
  }
  long long s = 0;
  for (const auto& c : children) s += c.total();
  return s;
}

namespace {

int leaf_depth(const PtNode& n, int at) {
  if (n.is_leaf()) return at;
  return leaf_depth(n.children.front(), at + 1);
}

void check_uniform_depth(const PtNode& n, int at, int want) {
  if (n.is_leaf()) {
    if (at != want) throw std::invalid_argument("non-uniform leaf depth within a point");
    return;
  }
  if (n.children.empty()) throw std::invalid_argument("empty group");
  for (const auto& c : n.children) check_uniform_depth(c, at + 1, want);
}

void collect_blocks(const PtNode& n, std::vector<const PtNode*>& out) {
  if (n.is_leaf()) {
    out.push_back(&n);
    return;
  }
  for (const auto& c : n.children) collect_blocks(c, out);
}

// Path of child indices from the root to each leaf, for LCA depth queries.
void collect_paths(const PtNode& n, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (n.is_leaf()) {
    out.push_back(cur);
    return;
  }
  for (size_t c = 0; c < n.children.size(); ++c) {
    cur.push_back(static_cast<int>(c));
    collect_paths(n.children[c], cur, out);
    cur.pop_back();
  }
}

// Sort key for canonical ordering: descending comparison of
// (block-size multiset, structure encoding). Encoded so that plain
// lexicographic > on vectors realizes the order.
std::vector<long long> node_key(const PtNode& n) {
  std::vector<long long> key;
  std::vector<const PtNode*> blocks;
  collect_blocks(n, blocks);
  std::vector<long long> sizes;
  for (auto* b : blocks) {
    long long s = 0;
    for (long long m : b->chain) s += m;
    sizes.push_back(s);
  }
  std::sort(sizes.rbegin(), sizes.rend());
  key.insert(key.end(), sizes.begin(), sizes.end());
  key.push_back(-1);  // separator
  // Structure encoding, children assumed already canonically sorted.
  struct Enc {
    static void run(const PtNode& n, std::vector<long long>& key) {
      if (n.is_leaf()) {
        key.push_back(-2);
        key.insert(key.end(), n.chain.begin(), n.chain.end());
        key.push_back(-3);
        return;
      }
      key.push_back(-4);
      for (const auto& c : n.children) run(c, key);
      key.push_back(-5);
    }
  };
  Enc::run(n, key);
  return key;
}

void canon_node(PtNode& n) {
  for (auto& c : n.children) canon_node(c);
  std::stable_sort(n.children.begin(), n.children.end(), [](const PtNode& a, const PtNode& b) {
    return node_key(a) > node_key(b);
  });
}

std::vector<long long> point_key(const PointType& p) {
  std::vector<long long> key{p.pole_order()};
  auto nk = node_key(p.root);
  key.insert(key.end(), nk.begin(), nk.end());
  return key;
}

}  // namespace

int PointType::depth() const { return leaf_depth(root, 0); }

int PointType::num_blocks() const { return static_cast<int>(blocks().size()); }

std::vector<const PtNode*> PointType::blocks() const {
  std::vector<const PtNode*> out;
  collect_blocks(root, out);
  return out;
}

std::vector<long long> PointType::block_sizes() const {
  std::vector<long long> out;
  for (auto* b : blocks()) out.push_back(b->total());
  return out;
}

int PointType::max_chain_len() const {
  int e = 0;
  for (auto* b : blocks()) e = std::max<int>(e, static_cast<int>(b->chain.size()));
  return e;
}

int PointType::d(int j, int j2) const {
  std::vector<std::vector<int>> paths;
  std::vector<int> cur;
  collect_paths(root, cur, paths);
  if (j < 0 || j2 < 0 || j >= static_cast<int>(paths.size()) || j2 >= static_cast<int>(paths.size()) || j == j2)
    throw std::out_of_range("block index for d(j,j')");
  const auto &a = paths[j], &b = paths[j2];
  size_t lca = 0;
  while (lca < a.size() && lca < b.size() && a[lca] == b[lca]) ++lca;
  return pole_order() - 2 - static_cast<int>(lca);
}

void validate(const SpectralType& st) {
  if (st.points.empty()) throw std::invalid_argument("spectral type has no points");
  long long rank = -1;
  for (const auto& p : st.points) {
    check_uniform_depth(p.root, 0, leaf_depth(p.root, 0));
    for (auto* b : p.blocks()) {
      if (b->chain.empty()) throw std::invalid_argument("block with empty chain");
      for (long long m : b->chain)
        if (m < 1) throw std::invalid_argument("zero multiplicity");
    }
    if (rank < 0)
      rank = p.rank();
    else if (p.rank() != rank)
      throw std::invalid_argument("rank mismatch across points");
    if (p.depth() >= 1) {
      // d_i(j,j') >= 0 holds by construction: LCA depth <= leaf depth - 1 = k-2.
    }
  }
}

namespace {

struct Parser {
  const std::string& s;
  size_t pos = 0;

  explicit Parser(const std::string& text) : s(text) {}

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\n' || s[pos] == '\r')) ++pos;
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  char take() {
    skip_ws();
    if (pos >= s.size()) throw std::invalid_argument("unexpected end of input");
    return s[pos++];
  }

  std::vector<long long> run() {
    std::vector<long long> items;
    for (;;) {
      char c = peek();
      if (c >= '0' && c <= '9') {
        ++pos;
        items.push_back(c - '0');
      } else if (c == '[') {
        ++pos;
        long long v = 0;
        bool any = false;
        while (peek() >= '0' && peek() <= '9') {
          v = v * 10 + (take() - '0');
          any = true;
        }
        if (!any || peek() != ']') throw std::invalid_argument("malformed bracketed multiplicity");
        ++pos;
        items.push_back(v);
      } else {
        break;
      }
    }
    if (items.empty()) throw std::invalid_argument("expected multiplicity run");
    for (long long m : items)
      if (m < 1) throw std::invalid_argument("zero multiplicity");
    return items;
  }

  PtNode group() {
    if (take() != '(') throw std::invalid_argument("expected '('");
    PtNode n = body();
    if (peek() != ')') throw std::invalid_argument("unbalanced parenthesis");
    ++pos;
    return n;
  }

  // group+ | run
  PtNode body() {
    if (peek() == '(') {
      PtNode n;
      while (peek() == '(') n.children.push_back(group());
      return n;
    }
    PtNode n;
    n.chain = run();
    return n;
  }

  PointType point() {
    if (peek() == ')') throw std::invalid_argument("unbalanced parenthesis");
    return PointType{body()};
  }

  SpectralType parse() {
    SpectralType st;
    st.points.push_back(point());
    while (peek() == ',') {
      ++pos;
      st.points.push_back(point());
    }
    skip_ws();
    if (pos != s.size()) {
      if (s[pos] == ')') throw std::invalid_argument("unbalanced parenthesis");
      throw std::invalid_argument(std::string("unexpected character '") + s[pos] + "'");
    }
    return st;
  }
};

std::string item_str(long long m) {
  if (m < 10) return std::string(1, static_cast<char>('0' + m));
  return "[" + std::to_string(m) + "]";
}

void print_node(const PtNode& n, std::string& out) {
  if (n.is_leaf()) {
    for (long long m : n.chain) out += item_str(m);
    return;
  }
  for (const auto& c : n.children) {
    out += '(';
    print_node(c, out);
    out += ')';
  }
}

}  // namespace

SpectralType parse_spectral_type(const std::string& text) {
  Parser p(text);
  SpectralType st = p.parse();
  validate(st);
  return st;
}

SpectralType canonicalize(const SpectralType& st) {
  SpectralType c = st;
  for (auto& p : c.points) canon_node(p.root);
  std::stable_sort(c.points.begin(), c.points.end(), [](const PointType& a, const PointType& b) {
    return point_key(a) > point_key(b);
  });
  return c;
}

std::vector<long long> node_sort_key(const PtNode& n) { return node_key(n); }
std::vector<long long> point_sort_key(const PointType& p) { return point_key(p); }

std::string print_point_raw(const PointType& p) {
  std::string out;
  print_node(p.root, out);
  return out;
}

std::string print_spectral_type(const SpectralType& st) {
  SpectralType c = canonicalize(st);
  std::string out;
  for (size_t i = 0; i < c.points.size(); ++i) {
    if (i) out += ',';
    print_node(c.points[i].root, out);
  }
  return out;
}

}  // namespace spectra
