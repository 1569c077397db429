#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace shexatlas {

/// Heap-allocated value with deep-copy semantics, used to close the recursion
/// in the AST sum types without exposing pointers.
template <typename T>
class Box {
 public:
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;
  ~Box() = default;

  const T& operator*() const { return *ptr_; }
  T& operator*() { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }
  T* operator->() { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

 private:
  std::unique_ptr<T> ptr_;
};

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

struct PrefixTable {
  std::map<std::string, std::string> mappings;
  std::optional<std::string> base;

  bool operator==(const PrefixTable&) const = default;
};

struct Cardinality {
  static constexpr std::int64_t kUnbounded = -1;

  std::int64_t min = 1;
  std::int64_t max = 1;  // kUnbounded for "no upper limit"

  bool unbounded() const { return max == kUnbounded; }
  bool operator==(const Cardinality&) const = default;
};

enum class NodeKind { Iri, BNode, Literal, NonLiteral };

std::string to_string(NodeKind kind);

struct ValueExprText {
  std::string raw;
  std::optional<std::string> ref_target;  // set iff raw starts with '@'

  bool operator==(const ValueExprText&) const = default;
};

// ---------------------------------------------------------------------------
// Triple expressions
// ---------------------------------------------------------------------------

struct TripleExpr;

struct TripleConstraint {
  std::string predicate;
  ValueExprText value;
  Cardinality cardinality;
  SourcePos pos;

  // Source position is diagnostic only.
  friend bool operator==(const TripleConstraint& a, const TripleConstraint& b) {
    return a.predicate == b.predicate && a.value == b.value &&
           a.cardinality == b.cardinality;
  }
};

struct EachOf {
  std::vector<TripleExpr> items;
  friend bool operator==(const EachOf& a, const EachOf& b);
};

struct OneOf {
  std::vector<TripleExpr> alternatives;
  friend bool operator==(const OneOf& a, const OneOf& b);
};

struct Labelled {
  std::string name;
  Box<TripleExpr> inner;
  friend bool operator==(const Labelled& a, const Labelled& b);
};

struct TripleExpr {
  std::variant<TripleConstraint, EachOf, OneOf, Labelled> node;
  bool operator==(const TripleExpr&) const = default;
};

inline bool operator==(const EachOf& a, const EachOf& b) { return a.items == b.items; }
inline bool operator==(const OneOf& a, const OneOf& b) { return a.alternatives == b.alternatives; }
inline bool operator==(const Labelled& a, const Labelled& b) {
  return a.name == b.name && a.inner == b.inner;
}

// ---------------------------------------------------------------------------
// Shape expressions
// ---------------------------------------------------------------------------

struct ShapeExpr;

struct Shape {
  std::optional<TripleExpr> triple_expr;
  std::vector<std::string> extra;
  bool closed = false;
  std::optional<NodeKind> node_kind;

  bool operator==(const Shape&) const = default;
};

struct ShapeAnd {
  std::vector<ShapeExpr> operands;
  friend bool operator==(const ShapeAnd& a, const ShapeAnd& b);
};

struct ShapeOr {
  std::vector<ShapeExpr> operands;
  friend bool operator==(const ShapeOr& a, const ShapeOr& b);
};

struct ShapeNot {
  Box<ShapeExpr> operand;
  friend bool operator==(const ShapeNot& a, const ShapeNot& b);
};

struct ShapeRef {
  std::string target;
  bool operator==(const ShapeRef&) const = default;
};

/// Datatype, value set, or "." standing alone as a shape body.
struct NodeConstraintOnly {
  std::string text;
  bool operator==(const NodeConstraintOnly&) const = default;
};

struct ShapeExpr {
  std::variant<Shape, ShapeAnd, ShapeOr, ShapeNot, ShapeRef, NodeConstraintOnly> node;
  bool operator==(const ShapeExpr&) const = default;
};

inline bool operator==(const ShapeAnd& a, const ShapeAnd& b) { return a.operands == b.operands; }
inline bool operator==(const ShapeOr& a, const ShapeOr& b) { return a.operands == b.operands; }
inline bool operator==(const ShapeNot& a, const ShapeNot& b) { return a.operand == b.operand; }

struct ShapeDecl {
  std::string label;
  ShapeExpr expr;
  SourcePos pos;

  friend bool operator==(const ShapeDecl& a, const ShapeDecl& b) {
    return a.label == b.label && a.expr == b.expr;
  }
};

struct ShExSchema {
  PrefixTable prefixes;
  std::vector<ShapeDecl> shapes;

  bool operator==(const ShExSchema&) const = default;

  const ShapeDecl* find(const std::string& label) const;
};

}  // namespace shexatlas
