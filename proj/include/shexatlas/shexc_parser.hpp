#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "shexatlas/ast.hpp"

namespace shexatlas {

/// Syntax error in ShExC input. what() already carries "line:column: ".
class ParseError : public std::runtime_error {
 public:
  ParseError(SourcePos pos, const std::string& message);

  SourcePos position() const { return pos_; }
  const std::string& detail() const { return detail_; }

 private:
  SourcePos pos_;
  std::string detail_;
};

/// A ShExC construct outside the supported notation subset.
class UnsupportedFeature : public ParseError {
 public:
  UnsupportedFeature(SourcePos pos, std::string construct);
  const std::string& construct() const { return construct_; }

 private:
  std::string construct_;
};

class DuplicateLabel : public ParseError {
 public:
  DuplicateLabel(SourcePos pos, const std::string& label);
};

class UnknownPrefix : public std::runtime_error {
 public:
  explicit UnknownPrefix(const std::string& prefix);
};

/// Parses the ShExC subset covered by the visual notation plus PREFIX/BASE.
ShExSchema parse_schema(std::string_view text);

/// "p:local" -> table[p] + local. Absolute IRIs come back unchanged, except
/// that surrounding angle brackets are removed.
std::string expand_iri(std::string_view prefixed, const PrefixTable& table);

/// "" for {1,1}, then ?, *, +, and "{m,n}" / "{m,}" / "{m}".
std::string format_cardinality(const Cardinality& c);

/// Pretty printer; parse_schema(to_shexc(s)) == s for every parsed schema.
std::string to_shexc(const ShExSchema& schema);
std::string to_shexc(const ShapeExpr& expr);
std::string to_shexc(const TripleExpr& expr);

/// Reference targets that do not name a declared shape.
std::set<std::string> external_targets(const ShExSchema& schema);

}  // namespace shexatlas
