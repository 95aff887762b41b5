#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "pencil_forge/expr.hpp"

namespace pencil_forge {

class Context;

enum class NodeKind { number, symbol, sum, product, power, sqrt, log, function };

struct Node;
using Tree = std::shared_ptr<const Node>;

/// Unnormalized expression tree as written.
struct Node {
    NodeKind kind = NodeKind::number;
    mpq_class value;            // number
    std::string name;           // symbol (canonical spelling) or function name
    int order = 0;              // function derivative order
    int exponent = 0;           // power
    std::vector<Tree> children;
};

namespace tree {
Tree number(const mpq_class& v);
Tree symbol(std::string name);
Tree sum(std::vector<Tree> terms);
Tree product(std::vector<Tree> factors);
Tree power(Tree base, int exponent);
Tree sqrt(Tree arg);
Tree log(Tree arg);
Tree function(std::string name, int order, Tree arg);
}  // namespace tree

/// Grammar: identifiers [a-zA-Z][a-zA-Z0-9_]*, + - * / ^ with the usual
/// precedence, integer exponents, integer literals, sqrt(..), ln(..), and
/// declared functions f(..), f'(..), f''(..). Jets are spelled u_x, u_xx.
/// Throws ParseError (0-based position) or UnknownSymbolError.
Tree parse(std::string_view text, const Context& ctx);

Expr normalize(const Tree& t);
std::string render(const Tree& t);

/// Direct rational evaluation of the tree, bypassing normalization. Function
/// and log nodes are looked up in `symbols` under their normalized atom name.
/// Square roots must come out rational.
mpq_class evaluate(const Tree& t, const std::map<std::string, mpq_class>& symbols);

}  // namespace pencil_forge
