"""AST node type for the subset grammar.

Trees are immutable.  Every childless node carries its concrete lexeme as
``token`` (identifiers, literals, operator symbols, and the degenerate
``return`` / ``{}`` leaves), and no inner node carries one; path mining
relies on that rule to enumerate leaves.
"""

from __future__ import annotations

from dataclasses import dataclass

NODE_TYPES = (
    "ClassDeclaration",
    "MethodDeclaration",
    "Parameter",
    "Block",
    "IfStatement",
    "WhileStatement",
    "ReturnStatement",
    "ExpressionStatement",
    "LocalDeclaration",
    "Assignment",
    "BinaryExpression",
    "ConditionalExpression",
    "MethodCall",
    "FieldAccess",
    "Identifier",
    "Literal",
    "Operator",
)

_NODE_TYPE_SET = frozenset(NODE_TYPES)

# Leaf stand-ins for constructs that have no token of their own.
EMPTY_BLOCK_TOKEN = "{}"
BARE_RETURN_TOKEN = "return"


@dataclass(frozen=True)
class AstNode:
    node_type: str
    children: tuple["AstNode", ...] = ()
    token: str | None = None

    def __post_init__(self):
        if self.node_type not in _NODE_TYPE_SET:
            raise ValueError(f"unknown node type {self.node_type!r}")
        if (self.token is None) == (len(self.children) == 0):
            raise ValueError(
                f"{self.node_type}: token must be present iff the node is a leaf"
            )

    @property
    def is_leaf(self) -> bool:
        return not self.children


def leaf(node_type: str, token: str) -> AstNode:
    return AstNode(node_type, (), token)


def node(node_type: str, *children: AstNode) -> AstNode:
    return AstNode(node_type, tuple(children), None)


def iter_leaves(root: AstNode):
    """Yield leaves in left-to-right (preorder) order."""
    stack = [root]
    while stack:
        current = stack.pop()
        if current.is_leaf:
            yield current
        else:
            stack.extend(reversed(current.children))


def count_nodes(root: AstNode) -> int:
    total = 0
    stack = [root]
    while stack:
        current = stack.pop()
        total += 1
        stack.extend(current.children)
    return total


# --- pretty printing ---------------------------------------------------------

_BINARY_PRECEDENCE = {
    "||": 1, "&&": 2, "==": 3, "!=": 3,
    "<": 4, ">": 4, "<=": 4, ">=": 4,
    "+": 5, "-": 5, "*": 6, "/": 6, "%": 6,
}
_TERNARY_PRECEDENCE = 0


def _expr_precedence(n: AstNode) -> int:
    if n.node_type == "BinaryExpression":
        return _BINARY_PRECEDENCE[n.children[1].token]
    if n.node_type == "ConditionalExpression":
        return _TERNARY_PRECEDENCE
    return 99


def print_expression(n: AstNode) -> str:
    kind = n.node_type
    if kind in ("Identifier", "Literal"):
        return n.token
    if kind == "FieldAccess":
        return f"{print_expression(n.children[0])}.{print_expression(n.children[1])}"
    if kind == "MethodCall":
        callee = print_expression(n.children[0])
        args = ", ".join(print_expression(a) for a in n.children[1:])
        return f"{callee}({args})"
    if kind == "BinaryExpression":
        left, op, right = n.children
        prec = _BINARY_PRECEDENCE[op.token]
        left_text = print_expression(left)
        if _expr_precedence(left) < prec:
            left_text = f"({left_text})"
        right_text = print_expression(right)
        # left-associative grammar: parenthesize equal-precedence right operands
        if _expr_precedence(right) <= prec:
            right_text = f"({right_text})"
        return f"{left_text} {op.token} {right_text}"
    if kind == "ConditionalExpression":
        cond, then, other = n.children
        cond_text = print_expression(cond)
        if _expr_precedence(cond) <= _TERNARY_PRECEDENCE:
            cond_text = f"({cond_text})"
        return f"{cond_text} ? {print_expression(then)} : {print_expression(other)}"
    raise ValueError(f"not an expression node: {kind}")


def _print_statement(n: AstNode, indent: int, out: list[str]) -> None:
    pad = "    " * indent
    kind = n.node_type
    if kind == "Block":
        _print_block(n, indent, out)
    elif kind == "IfStatement":
        out.append(f"{pad}if ({print_expression(n.children[0])})")
        _print_statement(n.children[1], indent + 1, out)
        if len(n.children) == 3:
            out.append(f"{pad}else")
            _print_statement(n.children[2], indent + 1, out)
    elif kind == "WhileStatement":
        out.append(f"{pad}while ({print_expression(n.children[0])})")
        _print_statement(n.children[1], indent + 1, out)
    elif kind == "ReturnStatement":
        if n.is_leaf:
            out.append(f"{pad}return;")
        else:
            out.append(f"{pad}return {print_expression(n.children[0])};")
    elif kind == "LocalDeclaration":
        type_name, var_name = n.children[0].token, n.children[1].token
        if len(n.children) == 3:
            out.append(f"{pad}{type_name} {var_name} = {print_expression(n.children[2])};")
        else:
            out.append(f"{pad}{type_name} {var_name};")
    elif kind == "Assignment":
        target, value = n.children
        out.append(f"{pad}{print_expression(target)} = {print_expression(value)};")
    elif kind == "ExpressionStatement":
        out.append(f"{pad}{print_expression(n.children[0])};")
    else:
        raise ValueError(f"not a statement node: {kind}")


def _print_block(n: AstNode, indent: int, out: list[str]) -> None:
    pad = "    " * indent
    out.append(f"{pad}{{")
    if not n.is_leaf:
        for stmt in n.children:
            _print_statement(stmt, indent + 1, out)
    out.append(f"{pad}}}")


def pretty_print_method(ast: AstNode, name: str, return_type: str = "void",
                        indent: int = 0) -> str:
    """Render a MethodDeclaration subtree back to subset-grammar source."""
    if ast.node_type != "MethodDeclaration":
        raise ValueError("expected a MethodDeclaration root")
    params = [c for c in ast.children if c.node_type == "Parameter"]
    body = ast.children[-1]
    param_text = ", ".join(f"{p.children[0].token} {p.children[1].token}" for p in params)
    pad = "    " * indent
    out = [f"{pad}{return_type} {name}({param_text})"]
    _print_block(body, indent, out)
    return "\n".join(out)
