#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "patprof/charset.hpp"
#include "patprof/errors.hpp"
#include "patprof/regex.hpp"
#include "patprof/unicode.hpp"

namespace patprof {

enum class AtomKind { Const, Class, Regex, Funct };

// Prefix-length function for Funct atoms; returns 0 on failure.
using PrefixFn = std::function<std::size_t(StrView)>;

inline std::string superscript(std::size_t z) {
  static const char* digits[] = {"⁰", "¹", "²", "³", "⁴",
                                 "⁵", "⁶", "⁷", "⁸", "⁹"};
  std::string dec = std::to_string(z);
  std::string out;
  for (char c : dec) out += digits[c - '0'];
  return out;
}

// An atom is a named prefix matcher: match(s) returns the length of the
// longest prefix it accepts, 0 meaning failure. Atoms never match empty
// prefixes. Immutable after construction; cheap to copy.
class Atom {
 public:
  Atom() = default;

  static Atom constant(Str literal, double cost) {
    if (literal.empty()) throw ConfigError("constant atom requires a nonempty literal");
    check_cost(cost, "constant");
    auto impl = std::make_shared<Impl>();
    impl->kind = AtomKind::Const;
    impl->literal = std::move(literal);
    impl->cost = cost;
    impl->key = "C:" + u32_to_utf8(impl->literal);
    return Atom(std::move(impl));
  }

  // Unbounded (width 0) character-class atom.
  static Atom char_class(std::string name, CharSet set, double cost) {
    check_cost(cost, name);
    if (set.empty()) throw ConfigError("class atom '" + name + "' has an empty charset");
    auto impl = std::make_shared<Impl>();
    impl->kind = AtomKind::Class;
    impl->name = std::move(name);
    impl->charset = std::move(set);
    impl->width = 0;
    impl->cost = cost;
    impl->key = "K:" + impl->name + ":0";
    return Atom(std::move(impl));
  }

  static Atom regex(std::string name, std::string expr, double cost) {
    check_cost(cost, name);
    auto impl = std::make_shared<Impl>();
    impl->kind = AtomKind::Regex;
    impl->name = std::move(name);
    impl->rx = patprof::Regex(std::move(expr));
    impl->cost = cost;
    impl->key = "R:" + impl->name;
    return Atom(std::move(impl));
  }

  static Atom funct(std::string name, PrefixFn fn, double cost) {
    check_cost(cost, name);
    auto impl = std::make_shared<Impl>();
    impl->kind = AtomKind::Funct;
    impl->name = std::move(name);
    impl->fn = std::move(fn);
    impl->cost = cost;
    impl->key = "F:" + impl->name;
    return Atom(std::move(impl));
  }

  // Fixed-width variant of a width-0 Class atom; cost follows Q(base)/z.
  Atom with_width(std::size_t z) const {
    if (kind() != AtomKind::Class || width() != 0)
      throw ConfigError("with_width applies only to unbounded class atoms");
    if (z == 0) throw ConfigError("fixed width must be positive");
    auto impl = std::make_shared<Impl>(*impl_);
    impl->width = z;
    impl->cost = impl_->cost / static_cast<double>(z);
    impl->key = "K:" + impl->name + ":" + std::to_string(z);
    return Atom(std::move(impl));
  }

  AtomKind kind() const { return impl_->kind; }
  const std::string& name() const { return impl_->name; }
  double cost() const { return impl_->cost; }
  const Str& literal() const { return impl_->literal; }
  const CharSet& charset() const { return impl_->charset; }
  std::size_t width() const { return impl_->width; }
  const std::string& regex_source() const { return impl_->rx.source(); }

  // Canonical identity; equal keys = same matcher.
  const std::string& key() const { return impl_->key; }

  std::size_t match(StrView s) const {
    const Impl& im = *impl_;
    switch (im.kind) {
      case AtomKind::Const:
        if (s.size() >= im.literal.size() &&
            s.compare(0, im.literal.size(), im.literal) == 0)
          return im.literal.size();
        return 0;
      case AtomKind::Class: {
        std::size_t run = im.charset.prefix_run(s);
        if (im.width == 0) return run;
        return run == im.width ? im.width : 0;
      }
      case AtomKind::Regex:
        return im.rx.longest_prefix(s);
      case AtomKind::Funct: {
        std::size_t n = im.fn(s);
        return n <= s.size() ? n : 0;
      }
    }
    return 0;
  }

  // Human-readable token: quoted literal, name with superscript width, or name.
  std::string human() const {
    const Impl& im = *impl_;
    switch (im.kind) {
      case AtomKind::Const: {
        std::string out = "\"";
        out += u32_to_utf8(im.literal);
        out += "\"";
        return out;
      }
      case AtomKind::Class: {
        std::string base = display_name(im.name);
        if (im.width == 0) return base + "⁺";  // superscript +
        if (im.width == 1) return base;
        return base + superscript(im.width);
      }
      case AtomKind::Regex:
      case AtomKind::Funct:
        return im.name;
    }
    return "?";
  }

  // Fragment of an anchored regex equivalent; Funct atoms have no regex
  // equivalent and render as the atom name in angle brackets.
  std::string regex_form() const {
    const Impl& im = *impl_;
    switch (im.kind) {
      case AtomKind::Const: {
        std::string out;
        static const std::string special = "\\^$.|?*+()[]{}";
        for (char c : u32_to_utf8(im.literal)) {
          if (special.find(c) != std::string::npos) out.push_back('\\');
          out.push_back(c);
        }
        return out;
      }
      case AtomKind::Class: {
        std::string body = im.charset.is_all() ? "" : im.charset.regex_body();
        std::string cls = im.charset.is_all() ? "." : "[" + body + "]";
        if (im.width == 0) return cls + "+";
        if (im.width == 1) return cls;
        return cls + "{" + std::to_string(im.width) + "}";
      }
      case AtomKind::Regex:
        return "(" + im.rx.source() + ")";
      case AtomKind::Funct:
        return "<" + im.name + ">";
    }
    return "";
  }

  bool operator==(const Atom& other) const { return key() == other.key(); }

 private:
  struct Impl {
    AtomKind kind = AtomKind::Const;
    std::string name;  // UTF-8 display name; empty for Const
    Str literal;
    CharSet charset;
    std::size_t width = 0;
    patprof::Regex rx;
    PrefixFn fn;
    double cost = 1.0;
    std::string key;
  };

  explicit Atom(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  static void check_cost(double cost, const std::string& what) {
    if (!(cost > 0.0)) throw ConfigError("atom '" + what + "' needs a cost in (0, inf]");
  }

  // Profile listings abbreviate the two most common classes, as in the
  // rendered output legend: [U]pper and [D]igit.
  static const std::string& display_name(const std::string& name) {
    static const std::string d = "D", u = "U";
    if (name == "Digit") return d;
    if (name == "Upper") return u;
    return name;
  }

  std::shared_ptr<const Impl> impl_;
};

}  // namespace patprof
