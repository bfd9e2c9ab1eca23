// Copyright (C) 2026 The cfgrag Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cctype>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfgrag/error.hpp"
#include "cfgrag/util/text.hpp"
#include "parsers.hpp"

namespace cfgrag::confignet::detail {

namespace {

struct XmlElement {
  std::string name;  // local name, namespace prefix removed
  std::string text;
  int line = 1;
  std::vector<std::unique_ptr<XmlElement>> children;

  const XmlElement* child(std::string_view n) const {
    for (const auto& c : children) {
      if (c->name == n) return c.get();
    }
    return nullptr;
  }
};

/// Minimal non-validating XML reader: elements, attributes (skipped), text,
/// CDATA, comments, processing instructions and DOCTYPE.
class XmlReader {
 public:
  explicit XmlReader(std::string_view src) : src_(src) {}

  std::unique_ptr<XmlElement> parse_document() {
    std::unique_ptr<XmlElement> root;
    while (true) {
      skip_ws();
      if (eof()) break;
      if (!at('<')) fail("text outside the root element");
      if (starts("<?")) {
        skip_past("?>");
      } else if (starts("<!--")) {
        skip_past("-->");
      } else if (starts("<!")) {
        skip_past(">");
      } else {
        if (root) fail("multiple root elements");
        root = parse_element();
      }
    }
    if (!root) fail("no root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw Error(ErrorCode::kMalformedArtifact, msg, line_); }

  bool eof() const { return pos_ >= src_.size(); }
  bool at(char c) const { return !eof() && src_[pos_] == c; }
  bool starts(std::string_view s) const { return src_.substr(pos_).starts_with(s); }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_++] == '\n') ++line_;
    }
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  void skip_past(std::string_view terminator) {
    const auto end = src_.find(terminator, pos_);
    if (end == std::string_view::npos) fail("unterminated markup");
    advance(end + terminator.size() - pos_);
  }

  std::string read_name() {
    const std::size_t begin = pos_;
    while (!eof()) {
      const char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '>' || c == '/' || c == '=') break;
      advance();
    }
    if (pos_ == begin) fail("expected a name");
    std::string name(src_.substr(begin, pos_ - begin));
    if (const auto colon = name.find(':'); colon != std::string::npos) name.erase(0, colon + 1);
    return name;
  }

  void skip_attributes() {
    while (true) {
      skip_ws();
      if (eof()) fail("unterminated start tag");
      if (at('>') || starts("/>")) return;
      read_name();
      skip_ws();
      if (!at('=')) fail("attribute without value");
      advance();
      skip_ws();
      if (!at('"') && !at('\'')) fail("unquoted attribute value");
      const char q = src_[pos_];
      advance();
      const auto end = src_.find(q, pos_);
      if (end == std::string_view::npos) fail("unterminated attribute value");
      advance(end + 1 - pos_);
    }
  }

  void append_entity(std::string& out) {
    const auto semi = src_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 10) fail("malformed entity");
    const std::string_view ent = src_.substr(pos_ + 1, semi - pos_ - 1);
    if (ent == "lt") out.push_back('<');
    else if (ent == "gt") out.push_back('>');
    else if (ent == "amp") out.push_back('&');
    else if (ent == "quot") out.push_back('"');
    else if (ent == "apos") out.push_back('\'');
    else if (ent.starts_with("#")) {
      unsigned long cp = 0;
      try {
        cp = ent.starts_with("#x") ? std::stoul(std::string(ent.substr(2)), nullptr, 16)
                                   : std::stoul(std::string(ent.substr(1)));
      } catch (const std::exception&) {
        fail("malformed character reference");
      }
      if (cp < 0x80) out.push_back(static_cast<char>(cp));
      else out.append("?");
    } else {
      fail("unknown entity &" + std::string(ent) + ";");
    }
    advance(semi + 1 - pos_);
  }

  std::unique_ptr<XmlElement> parse_element() {
    auto el = std::make_unique<XmlElement>();
    el->line = line_;
    advance();  // '<'
    el->name = read_name();
    skip_attributes();
    if (starts("/>")) {
      advance(2);
      return el;
    }
    advance();  // '>'

    while (true) {
      if (eof()) fail("unclosed element <" + el->name + ">");
      if (starts("</")) {
        advance(2);
        const std::string closing = read_name();
        if (closing != el->name) fail("mismatched </" + closing + ">, expected </" + el->name + ">");
        skip_ws();
        if (!at('>')) fail("malformed end tag");
        advance();
        el->text = std::string(util::trim(el->text));
        return el;
      }
      if (starts("<!--")) {
        skip_past("-->");
      } else if (starts("<![CDATA[")) {
        advance(9);
        const auto end = src_.find("]]>", pos_);
        if (end == std::string_view::npos) fail("unterminated CDATA");
        el->text.append(src_.substr(pos_, end - pos_));
        advance(end + 3 - pos_);
      } else if (starts("<?")) {
        skip_past("?>");
      } else if (at('<')) {
        el->children.push_back(parse_element());
      } else if (at('&')) {
        append_entity(el->text);
      } else {
        el->text.push_back(src_[pos_]);
        advance();
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

void emit_leaf(const XmlElement& parent, std::string_view child, const std::string& prefix,
               std::vector<RawOption>& out) {
  if (const auto* c = parent.child(child)) out.push_back({prefix + "." + std::string(child), c->text, c->line});
}

void emit_coordinates(const XmlElement& el, const std::string& prefix, std::vector<RawOption>& out) {
  for (std::string_view field : {"groupId", "artifactId", "version"}) emit_leaf(el, field, prefix, out);
}

void emit_list(const XmlElement* container, std::string_view item, const std::string& prefix,
               std::vector<RawOption>& out) {
  if (!container) return;
  std::size_t index = 0;
  for (const auto& c : container->children) {
    if (c->name != item) continue;
    const std::string p = prefix + "." + std::string(item) + "[" + std::to_string(index++) + "]";
    emit_coordinates(*c, p, out);
    emit_leaf(*c, "scope", p, out);
  }
}

}  // namespace

std::vector<RawOption> parse_pom(std::string_view content) {
  if (util::trim(content).empty()) return {};
  auto root = XmlReader(content).parse_document();
  if (root->name != "project") {
    throw Error(ErrorCode::kMalformedArtifact, "root element is <" + root->name + ">, expected <project>", root->line);
  }

  std::vector<RawOption> out;
  const XmlElement& project = *root;
  if (const auto* parent = project.child("parent")) emit_coordinates(*parent, "project.parent", out);
  emit_coordinates(project, "project", out);
  emit_leaf(project, "packaging", "project", out);

  if (const auto* props = project.child("properties")) {
    for (const auto& p : props->children) {
      out.push_back({"project.properties." + sanitize_name(p->name), p->text, p->line});
    }
  }
  emit_list(project.child("dependencies"), "dependency", "project.dependencies", out);
  if (const auto* mgmt = project.child("dependencyManagement")) {
    emit_list(mgmt->child("dependencies"), "dependency", "project.dependencyManagement.dependencies", out);
  }
  if (const auto* build = project.child("build")) {
    emit_leaf(*build, "finalName", "project.build", out);
    emit_list(build->child("plugins"), "plugin", "project.build.plugins", out);
  }
  std::stable_sort(out.begin(), out.end(), [](const RawOption& a, const RawOption& b) { return a.line < b.line; });
  return out;
}

}  // namespace cfgrag::confignet::detail
