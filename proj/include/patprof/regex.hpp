#pragma once

#include <memory>
#include <string>
#include <vector>

#include "patprof/charset.hpp"
#include "patprof/errors.hpp"
#include "patprof/unicode.hpp"

namespace patprof {

// Anchored regular expressions over Unicode scalar values with
// leftmost-longest prefix matching.
//
// Supported syntax: literals, '.', character classes [..] (ranges, negation,
// \d \w \s), alternation '|', grouping '(..)', '?', '*', '+', and bounded
// repetition {n}, {n,}, {n,m}. No backreferences or lookaround.
//
// longest_prefix(s) returns the largest n such that the whole expression
// matches s[0, n). A match of length 0 is reported as 0, which callers treat
// as failure (atoms never match empty prefixes).
class Regex {
 public:
  Regex() = default;

  explicit Regex(std::string source) : source_(std::move(source)) {
    auto u32 = utf8_to_u32(source_);
    if (!u32) throw ConfigError("regex is not valid UTF-8: " + source_);
    Parser p(*u32, source_);
    Node ast = p.parse();
    Compiler c(states_, source_);
    Frag f = c.compile(ast);
    start_ = f.start;
    accept_ = c.new_state();
    for (int dangling : f.out) c.patch(dangling, accept_);
  }

  const std::string& source() const { return source_; }

  std::size_t longest_prefix(StrView s) const {
    if (states_.empty()) return 0;
    std::vector<int> current, next;
    std::vector<unsigned> mark(states_.size(), 0);
    unsigned stamp = 0;

    std::size_t best = 0;
    ++stamp;
    add_state(start_, current, mark, stamp);
    if (contains_accept(current) && best < 1) best = 0;  // empty match = failure anyway

    for (std::size_t i = 0; i < s.size() && !current.empty(); ++i) {
      ++stamp;
      next.clear();
      for (int id : current) {
        const State& st = states_[static_cast<std::size_t>(id)];
        if (st.kind == State::Char && st.cs.contains(s[i])) {
          add_state(st.next, next, mark, stamp);
        }
      }
      current.swap(next);
      if (contains_accept(current)) best = i + 1;
    }
    return best;
  }

 private:
  struct State {
    enum Kind { Char, Split, Accept } kind = Accept;
    CharSet cs;     // Char
    int next = -1;  // Char
    int out1 = -1, out2 = -1;  // Split
  };

  struct Node {
    enum Kind { Chr, Cls, Cat, Alt, Rep } kind = Chr;
    CharSet cs;
    std::vector<Node> kids;
    int rmin = 0, rmax = -1;  // Rep; rmax -1 = unbounded
  };

  struct Frag {
    int start = -1;
    std::vector<int> out;  // dangling state ids to patch
  };

  class Parser {
   public:
    Parser(StrView src, const std::string& display) : s_(src), display_(display) {}

    Node parse() {
      Node n = parse_alt();
      if (pos_ != s_.size()) fail("unexpected character");
      return n;
    }

   private:
    [[noreturn]] void fail(const std::string& why) const {
      throw ConfigError("bad regex '" + display_ + "': " + why);
    }
    bool eof() const { return pos_ >= s_.size(); }
    char32_t peek() const { return s_[pos_]; }

    Node parse_alt() {
      Node n = parse_concat();
      while (!eof() && peek() == U'|') {
        ++pos_;
        Node alt;
        alt.kind = Node::Alt;
        alt.kids.push_back(std::move(n));
        alt.kids.push_back(parse_concat());
        n = std::move(alt);
      }
      return n;
    }

    Node parse_concat() {
      Node n;
      n.kind = Node::Cat;
      while (!eof() && peek() != U'|' && peek() != U')') {
        n.kids.push_back(parse_repeat());
      }
      if (n.kids.size() == 1) return std::move(n.kids[0]);
      return n;  // empty Cat matches ε
    }

    Node parse_repeat() {
      Node n = parse_primary();
      while (!eof()) {
        char32_t c = peek();
        int rmin, rmax;
        if (c == U'?') {
          rmin = 0; rmax = 1; ++pos_;
        } else if (c == U'*') {
          rmin = 0; rmax = -1; ++pos_;
        } else if (c == U'+') {
          rmin = 1; rmax = -1; ++pos_;
        } else if (c == U'{') {
          ++pos_;
          rmin = parse_int();
          rmax = rmin;
          if (!eof() && peek() == U',') {
            ++pos_;
            rmax = (!eof() && peek() == U'}') ? -1 : parse_int();
          }
          if (eof() || peek() != U'}') fail("unterminated {}");
          ++pos_;
          if (rmax != -1 && rmax < rmin) fail("bad repetition bounds");
          if (rmin > 1000 || rmax > 1000) fail("repetition bound too large");
        } else {
          break;
        }
        Node rep;
        rep.kind = Node::Rep;
        rep.rmin = rmin;
        rep.rmax = rmax;
        rep.kids.push_back(std::move(n));
        n = std::move(rep);
      }
      return n;
    }

    int parse_int() {
      if (eof() || peek() < U'0' || peek() > U'9') fail("expected number");
      long v = 0;
      while (!eof() && peek() >= U'0' && peek() <= U'9') {
        v = v * 10 + static_cast<long>(peek() - U'0');
        if (v > 100000) fail("repetition bound too large");
        ++pos_;
      }
      return static_cast<int>(v);
    }

    Node parse_primary() {
      if (eof()) fail("unexpected end");
      char32_t c = s_[pos_++];
      Node n;
      if (c == U'(') {
        n = parse_alt();
        if (eof() || peek() != U')') fail("unterminated group");
        ++pos_;
        return n;
      }
      if (c == U'[') return parse_class();
      if (c == U'.') {
        n.kind = Node::Cls;
        n.cs = CharSet::all();
        return n;
      }
      if (c == U'*' || c == U'+' || c == U'?' || c == U')') fail("misplaced operator");
      if (c == U'\\') {
        if (eof()) fail("dangling backslash");
        char32_t e = s_[pos_++];
        n.kind = Node::Cls;
        switch (e) {
          case U'd': n.cs.add(U'0', U'9'); break;
          case U'D': n.cs.add(U'0', U'9'); n.cs.normalize(); n.cs = n.cs.negated(); break;
          case U'w':
            n.cs.add(U'a', U'z'); n.cs.add(U'A', U'Z'); n.cs.add(U'0', U'9'); n.cs.add(U'_');
            break;
          case U's': n.cs.add(U' '); n.cs.add(U'\t', U'\r'); break;
          case U'S': n.cs.add(U' '); n.cs.add(U'\t', U'\r'); n.cs.normalize(); n.cs = n.cs.negated(); break;
          case U't': n.cs.add(U'\t'); break;
          case U'n': n.cs.add(U'\n'); break;
          case U'r': n.cs.add(U'\r'); break;
          default: n.cs.add(e); break;
        }
        n.cs.normalize();
        return n;
      }
      n.kind = Node::Cls;
      n.cs.add(c);
      n.cs.normalize();
      return n;
    }

    Node parse_class() {
      Node n;
      n.kind = Node::Cls;
      bool negate = false;
      if (!eof() && peek() == U'^') {
        negate = true;
        ++pos_;
      }
      Str body;
      bool first = true;
      while (true) {
        if (eof()) fail("unterminated character class");
        char32_t c = peek();
        if (c == U']' && !first) break;
        first = false;
        if (c == U'\\') {
          body.push_back(c);
          ++pos_;
          if (eof()) fail("dangling backslash in class");
          body.push_back(s_[pos_++]);
        } else {
          body.push_back(c);
          ++pos_;
        }
      }
      ++pos_;  // consume ']'
      bool err = false;
      n.cs = parse_charset_spec(body, &err);
      if (err) fail("bad character class");
      if (negate) n.cs = n.cs.negated();
      return n;
    }

    StrView s_;
    const std::string& display_;
    std::size_t pos_ = 0;
  };

  class Compiler {
   public:
    Compiler(std::vector<State>& states, const std::string& display)
        : states_(states), display_(display) {}

    int new_state() {
      if (states_.size() >= kMaxStates)
        throw ConfigError("regex too large: " + display_);
      states_.emplace_back();
      return static_cast<int>(states_.size() - 1);
    }

    void patch(int id, int target) {
      State& s = states_[static_cast<std::size_t>(id)];
      if (s.kind == State::Char) {
        s.next = target;
      } else if (s.kind == State::Split) {
        if (s.out1 == -1) s.out1 = target;
        else s.out2 = target;
      }
    }

    Frag compile(const Node& n) {
      switch (n.kind) {
        case Node::Chr:
        case Node::Cls: {
          int id = new_state();
          states_[static_cast<std::size_t>(id)].kind = State::Char;
          states_[static_cast<std::size_t>(id)].cs = n.cs;
          return {id, {id}};
        }
        case Node::Cat: {
          if (n.kids.empty()) {
            // ε: a split with both branches dangling collapses to pass-through
            int id = new_state();
            states_[static_cast<std::size_t>(id)].kind = State::Split;
            states_[static_cast<std::size_t>(id)].out2 = -2;  // unused branch
            return {id, {id}};
          }
          Frag f = compile(n.kids[0]);
          for (std::size_t i = 1; i < n.kids.size(); ++i) {
            Frag g = compile(n.kids[i]);
            for (int d : f.out) patch(d, g.start);
            f.out = std::move(g.out);
          }
          return f;
        }
        case Node::Alt: {
          Frag a = compile(n.kids[0]);
          Frag b = compile(n.kids[1]);
          int id = new_state();
          State& s = states_[static_cast<std::size_t>(id)];
          s.kind = State::Split;
          s.out1 = a.start;
          s.out2 = b.start;
          Frag f{id, a.out};
          f.out.insert(f.out.end(), b.out.begin(), b.out.end());
          return f;
        }
        case Node::Rep: {
          const Node& kid = n.kids[0];
          Frag f;
          f.start = -1;
          // rmin mandatory copies
          for (int i = 0; i < n.rmin; ++i) {
            Frag g = compile(kid);
            if (f.start == -1) {
              f = g;
            } else {
              for (int d : f.out) patch(d, g.start);
              f.out = std::move(g.out);
            }
          }
          if (n.rmax == -1) {
            // star over one more copy
            int split = new_state();
            states_[static_cast<std::size_t>(split)].kind = State::Split;
            Frag g = compile(kid);
            states_[static_cast<std::size_t>(split)].out1 = g.start;
            for (int d : g.out) patch(d, split);
            if (f.start == -1) {
              return {split, {split}};
            }
            for (int d : f.out) patch(d, split);
            return {f.start, {split}};
          }
          // (rmax - rmin) optional copies
          std::vector<int> exits;
          for (int i = n.rmin; i < n.rmax; ++i) {
            int split = new_state();
            states_[static_cast<std::size_t>(split)].kind = State::Split;
            Frag g = compile(kid);
            states_[static_cast<std::size_t>(split)].out1 = g.start;
            exits.push_back(split);  // out2 dangles = skip
            if (f.start == -1) {
              f.start = split;
            } else {
              for (int d : f.out) patch(d, split);
            }
            f.out = std::move(g.out);
          }
          if (f.start == -1) {  // {0}
            int id = new_state();
            states_[static_cast<std::size_t>(id)].kind = State::Split;
            states_[static_cast<std::size_t>(id)].out2 = -2;
            return {id, {id}};
          }
          f.out.insert(f.out.end(), exits.begin(), exits.end());
          return f;
        }
      }
      throw ConfigError("regex compiler bug");
    }

   private:
    static constexpr std::size_t kMaxStates = 20000;
    std::vector<State>& states_;
    const std::string& display_;
  };

  void add_state(int id, std::vector<int>& set, std::vector<unsigned>& mark,
                 unsigned stamp) const {
    if (id < 0) return;
    if (mark[static_cast<std::size_t>(id)] == stamp) return;
    mark[static_cast<std::size_t>(id)] = stamp;
    const State& s = states_[static_cast<std::size_t>(id)];
    if (s.kind == State::Split) {
      if (s.out1 != -2) add_state(s.out1, set, mark, stamp);
      if (s.out2 != -2) add_state(s.out2, set, mark, stamp);
      return;
    }
    set.push_back(id);
  }

  bool contains_accept(const std::vector<int>& set) const {
    for (int id : set)
      if (states_[static_cast<std::size_t>(id)].kind == State::Accept) return true;
    return false;
  }

  std::string source_;
  std::vector<State> states_;
  int start_ = -1;
  int accept_ = -1;
};

}  // namespace patprof
