"""Recursive-descent parser for the Java-like subset grammar.

Supported shape: classes containing field declarations and methods;
statements are local declarations, assignments, if/while/return and
expression statements; expressions are literals, identifiers, field
access, method calls, binary operators, and the ternary conditional.
Unary minus exists only as a sign folded into numeric literals.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import SourceSyntaxError
from .ast_nodes import (
    AstNode,
    BARE_RETURN_TOKEN,
    EMPTY_BLOCK_TOKEN,
    leaf,
    node,
)

KEYWORDS = frozenset({"class", "if", "else", "while", "return"})
LITERAL_WORDS = frozenset({"true", "false", "null"})

_PUNCT = (
    "==", "!=", "<=", ">=", "&&", "||",
    "{", "}", "(", ")", ";", ",", ".", "=", "<", ">",
    "+", "-", "*", "/", "%", "?", ":",
)

_BINARY_LEVELS = (
    ("||",),
    ("&&",),
    ("==", "!="),
    ("<", ">", "<=", ">="),
    ("+", "-"),
    ("*", "/", "%"),
)


@dataclass(frozen=True)
class Token:
    kind: str       # ident | number | string | punct | eof
    text: str
    line: int
    col: int


def tokenize(path: str, text: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if text.startswith("/*", i):
            end = text.find("*/", i + 2)
            if end < 0:
                raise SourceSyntaxError(path, line, col, "closing */")
            skipped = text[i:end + 2]
            line += skipped.count("\n")
            col = (len(skipped) - skipped.rfind("\n")) if "\n" in skipped else col + len(skipped)
            i = end + 2
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("ident", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            tokens.append(Token("number", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch == '"':
            j = i + 1
            while j < n and text[j] != '"':
                if text[j] == "\n":
                    raise SourceSyntaxError(path, line, col, "closing quote")
                j += 1
            if j >= n:
                raise SourceSyntaxError(path, line, col, "closing quote")
            tokens.append(Token("string", text[i:j + 1], line, col))
            col += j + 1 - i
            i = j + 1
            continue
        for punct in _PUNCT:
            if text.startswith(punct, i):
                tokens.append(Token("punct", punct, line, col))
                col += len(punct)
                i += len(punct)
                break
        else:
            raise SourceSyntaxError(path, line, col, "a token", ch)
    tokens.append(Token("eof", "", line, col))
    return tokens


@dataclass(frozen=True)
class ParsedMethod:
    name: str
    return_type: str
    param_types: tuple[str, ...]
    ast: AstNode


@dataclass(frozen=True)
class ParsedClass:
    name: str
    methods: tuple[ParsedMethod, ...]
    field_count: int


class Parser:
    def __init__(self, path: str, text: str):
        self.path = path
        self.tokens = tokenize(path, text)
        self.pos = 0

    # --- token plumbing ---

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != "eof":
            self.pos += 1
        return token

    def at_punct(self, text: str) -> bool:
        token = self.peek()
        return token.kind == "punct" and token.text == text

    def at_word(self, text: str) -> bool:
        token = self.peek()
        return token.kind == "ident" and token.text == text

    def expect_punct(self, text: str) -> Token:
        if not self.at_punct(text):
            self.fail(repr(text))
        return self.advance()

    def expect_ident(self, expected: str = "an identifier") -> Token:
        token = self.peek()
        if token.kind != "ident" or token.text in KEYWORDS:
            self.fail(expected)
        return self.advance()

    def fail(self, expected: str):
        token = self.peek()
        found = token.text if token.kind != "eof" else "end of input"
        raise SourceSyntaxError(self.path, token.line, token.col, expected, found)

    # --- grammar ---

    def parse_compilation_unit(self) -> list[ParsedClass]:
        classes = []
        while self.peek().kind != "eof":
            classes.append(self.parse_class())
        return classes

    def parse_class(self) -> ParsedClass:
        if not self.at_word("class"):
            self.fail("'class'")
        self.advance()
        name = self.expect_ident("a class name").text
        self.expect_punct("{")
        methods = []
        field_count = 0
        while not self.at_punct("}"):
            member = self.parse_member()
            if isinstance(member, ParsedMethod):
                methods.append(member)
            else:
                field_count += 1
        self.expect_punct("}")
        return ParsedClass(name, tuple(methods), field_count)

    def parse_member(self):
        """Field: ``Type name (= expr)? ;``  Method: ``Type name ( params ) block``."""
        type_name = self.expect_ident("a type name").text
        member_name = self.expect_ident("a member name").text
        if self.at_punct("("):
            return self.parse_method_rest(member_name, type_name)
        if self.at_punct("="):
            self.advance()
            self.parse_expression()
        self.expect_punct(";")
        return ("field", type_name, member_name)

    def parse_method_rest(self, name: str, return_type: str) -> ParsedMethod:
        self.expect_punct("(")
        params = []
        if not self.at_punct(")"):
            while True:
                param_type = self.expect_ident("a parameter type").text
                param_name = self.expect_ident("a parameter name").text
                params.append(
                    node("Parameter", leaf("Identifier", param_type),
                         leaf("Identifier", param_name))
                )
                if self.at_punct(","):
                    self.advance()
                    continue
                break
        self.expect_punct(")")
        body = self.parse_block()
        ast = node("MethodDeclaration", *params, body)
        param_types = tuple(p.children[0].token for p in params)
        return ParsedMethod(name, return_type, param_types, ast)

    def parse_block(self) -> AstNode:
        self.expect_punct("{")
        statements = []
        while not self.at_punct("}"):
            statements.append(self.parse_statement())
        self.expect_punct("}")
        if not statements:
            return leaf("Block", EMPTY_BLOCK_TOKEN)
        return node("Block", *statements)

    def parse_statement(self) -> AstNode:
        if self.at_punct("{"):
            return self.parse_block()
        if self.at_word("if"):
            self.advance()
            self.expect_punct("(")
            cond = self.parse_expression()
            self.expect_punct(")")
            then_branch = self.parse_statement()
            if self.at_word("else"):
                self.advance()
                return node("IfStatement", cond, then_branch, self.parse_statement())
            return node("IfStatement", cond, then_branch)
        if self.at_word("while"):
            self.advance()
            self.expect_punct("(")
            cond = self.parse_expression()
            self.expect_punct(")")
            return node("WhileStatement", cond, self.parse_statement())
        if self.at_word("return"):
            self.advance()
            if self.at_punct(";"):
                self.advance()
                return leaf("ReturnStatement", BARE_RETURN_TOKEN)
            value = self.parse_expression()
            self.expect_punct(";")
            return node("ReturnStatement", value)
        # local declaration: two consecutive plain identifiers
        if (self.peek().kind == "ident" and self.peek().text not in KEYWORDS
                and self.peek().text not in LITERAL_WORDS
                and self.peek(1).kind == "ident" and self.peek(1).text not in KEYWORDS):
            type_name = self.advance().text
            var_name = self.expect_ident("a variable name").text
            children = [leaf("Identifier", type_name), leaf("Identifier", var_name)]
            if self.at_punct("="):
                self.advance()
                children.append(self.parse_expression())
            self.expect_punct(";")
            return node("LocalDeclaration", *children)
        expr = self.parse_expression()
        if self.at_punct("="):
            if expr.node_type not in ("Identifier", "FieldAccess"):
                self.fail("an assignable target")
            self.advance()
            value = self.parse_expression()
            self.expect_punct(";")
            return node("Assignment", expr, value)
        self.expect_punct(";")
        return node("ExpressionStatement", expr)

    def parse_expression(self) -> AstNode:
        condition = self.parse_binary(0)
        if self.at_punct("?"):
            self.advance()
            then_value = self.parse_expression()
            self.expect_punct(":")
            else_value = self.parse_expression()
            return node("ConditionalExpression", condition, then_value, else_value)
        return condition

    def parse_binary(self, level: int) -> AstNode:
        if level >= len(_BINARY_LEVELS):
            return self.parse_primary()
        ops = _BINARY_LEVELS[level]
        left = self.parse_binary(level + 1)
        while self.peek().kind == "punct" and self.peek().text in ops:
            op = self.advance().text
            right = self.parse_binary(level + 1)
            left = node("BinaryExpression", left, leaf("Operator", op), right)
        return left

    def parse_primary(self) -> AstNode:
        token = self.peek()
        if token.kind == "punct" and token.text == "(":
            self.advance()
            inner = self.parse_expression()
            self.expect_punct(")")
            return self.parse_postfix(inner)
        if token.kind == "punct" and token.text == "-":
            self.advance()
            number = self.peek()
            if number.kind != "number":
                self.fail("a numeric literal after unary '-'")
            self.advance()
            return leaf("Literal", "-" + number.text)
        if token.kind in ("number", "string"):
            self.advance()
            return leaf("Literal", token.text)
        if token.kind == "ident" and token.text in LITERAL_WORDS:
            self.advance()
            return leaf("Literal", token.text)
        if token.kind == "ident" and token.text not in KEYWORDS:
            self.advance()
            return self.parse_postfix(leaf("Identifier", token.text))
        self.fail("an expression")

    def parse_postfix(self, base: AstNode) -> AstNode:
        while True:
            if self.at_punct("."):
                self.advance()
                member = self.expect_ident("a member name")
                base = node("FieldAccess", base, leaf("Identifier", member.text))
            elif self.at_punct("("):
                if base.node_type not in ("Identifier", "FieldAccess"):
                    self.fail("a callable name")
                self.advance()
                args = []
                if not self.at_punct(")"):
                    while True:
                        args.append(self.parse_expression())
                        if self.at_punct(","):
                            self.advance()
                            continue
                        break
                self.expect_punct(")")
                base = node("MethodCall", base, *args)
            else:
                return base


def parse_file(path: str, text: str) -> list[ParsedClass]:
    return Parser(path, text).parse_compilation_unit()
