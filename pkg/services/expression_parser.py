"""
Parser and printer for series-parallel expression text.

Grammar::

    expr   := term { "+" term }
    term   := factor { "*" factor }
    factor := leaf | "(" expr ")"
    leaf   := ident "->" ident      (esp)
            | ident                 (msp)

``*`` (series) binds tighter than ``+`` (parallel); both associate to the left.
``#`` starts a comment that runs to the end of the line.
"""
import logging
import re
from pathlib import Path
from typing import Iterator, List, NamedTuple, Optional, Tuple, Union

from models.errors import ExpressionSyntaxError, FlavorMismatchError
from models.expression import (
    EspLeaf, Flavor, MspLeaf, NodeKind, Parallel, Series, SpExpression
)

FLAVOR_HEADER = re.compile(r"^\s*#\s*flavor\s*:\s*(\w+)", re.IGNORECASE)

TOKEN_PATTERN = re.compile(r"""
    (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<space>[ \t\r\f\v]+)
  | (?P<arrow>->)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<plus>\+)
  | (?P<star>\*)
  | (?P<lparen>\()
  | (?P<rparen>\))
""", re.VERBOSE)


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> Iterator[Token]:
    """Yield tokens with 1-based line and column; ends with an ``eof`` token."""
    line, line_start, position = 1, 0, 0
    while position < len(text):
        match = TOKEN_PATTERN.match(text, position)
        if match is None:
            raise ExpressionSyntaxError(
                f"Unexpected character {text[position]!r}", line, position - line_start + 1
            )
        kind = match.lastgroup
        if kind == 'newline':
            line += 1
            line_start = match.end()
        elif kind not in ('space', 'comment'):
            yield Token(kind, match.group(), line, position - line_start + 1)
        position = match.end()
    yield Token('eof', '', line, position - line_start + 1)


class ExpressionParser:
    """Recursive descent parser producing ``SpExpression`` trees."""

    def __init__(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    def parse(self, text: str, flavor: Union[str, Flavor]) -> SpExpression:
        """Parse ``text`` as an expression of the given flavor."""
        flavor = Flavor.parse(flavor)
        self._tokens = list(tokenize(text))
        self._position = 0
        self._flavor = flavor
        root = self._expr()
        token = self._peek()
        if token.kind != 'eof':
            self._fail(f"Unexpected {token.text!r}", token)
        self.logger.debug(f"Parsed {flavor.value} expression with {len(self._tokens) - 1} tokens")
        return SpExpression(root, flavor)

    def parse_document(self, text: str, flavor: Optional[Union[str, Flavor]] = None) -> SpExpression:
        """Parse a fixture document; the ``# flavor:`` header wins over a missing flavor.

        An explicit flavor that contradicts the header is a flavor mismatch.
        """
        header = self.read_flavor_header(text)
        if flavor is None:
            if header is None:
                raise FlavorMismatchError("No flavor given and no '# flavor:' header found")
            flavor = header
        flavor = Flavor.parse(flavor)
        if header is not None and header is not flavor:
            raise FlavorMismatchError(
                f"Document declares flavor {header.value} but {flavor.value} was requested"
            )
        return self.parse(text, flavor)

    def parse_file(self, path: Union[str, Path], flavor: Optional[Union[str, Flavor]] = None) -> SpExpression:
        with open(path, 'r', encoding='utf-8') as f:
            return self.parse_document(f.read(), flavor)

    @staticmethod
    def read_flavor_header(text: str) -> Optional[Flavor]:
        for line in text.splitlines():
            match = FLAVOR_HEADER.match(line)
            if match:
                return Flavor.parse(match.group(1))
            if line.strip() and not line.lstrip().startswith('#'):
                break
        return None

    def _peek(self) -> Token:
        return self._tokens[self._position]

    def _advance(self) -> Token:
        token = self._tokens[self._position]
        self._position += 1
        return token

    def _fail(self, message: str, token: Token):
        raise ExpressionSyntaxError(message, token.line, token.column)

    def _expect(self, kind: str, what: str) -> Token:
        token = self._peek()
        if token.kind != kind:
            found = 'end of input' if token.kind == 'eof' else repr(token.text)
            self._fail(f"Expected {what}, found {found}", token)
        return self._advance()

    def _expr(self):
        node = self._term()
        while self._peek().kind == 'plus':
            self._advance()
            node = Parallel(node, self._term())
        return node

    def _term(self):
        node = self._factor()
        while self._peek().kind == 'star':
            self._advance()
            node = Series(node, self._factor())
        return node

    def _factor(self):
        token = self._peek()
        if token.kind == 'lparen':
            self._advance()
            node = self._expr()
            self._expect('rparen', "')'")
            return node
        if token.kind == 'ident':
            return self._leaf()
        found = 'end of input' if token.kind == 'eof' else repr(token.text)
        self._fail(f"Expected a leaf or '(', found {found}", token)

    def _leaf(self):
        name = self._advance()
        is_arc = self._peek().kind == 'arrow'
        if self._flavor is Flavor.MSP:
            if is_arc:
                raise FlavorMismatchError(
                    f"Arc leaf at line {name.line}, column {name.column} in an msp expression"
                )
            return MspLeaf(name.text)
        if not is_arc:
            raise FlavorMismatchError(
                f"Vertex leaf {name.text!r} at line {name.line}, column {name.column} in an esp expression"
            )
        self._advance()
        head = self._expect('ident', "a vertex name after '->'")
        return EspLeaf(name.text, head.text)


class ExpressionPrinter:
    """Formats expressions with the fewest parentheses that parse back to the same tree."""

    def format(self, expression: Union[SpExpression, object]) -> str:
        root = expression.root if isinstance(expression, SpExpression) else expression
        parts: List[str] = []
        stack: List[Union[str, object]] = [root]
        while stack:
            item = stack.pop()
            if isinstance(item, str):
                parts.append(item)
                continue
            if item.kind is NodeKind.LEAF:
                parts.append(self._leaf_text(item))
                continue
            operator = " * " if item.kind is NodeKind.SERIES else " + "
            left_wrapped, right_wrapped = self._wrapping(item)
            # pushed in reverse so the left operand is emitted first
            stack.extend(self._wrapped(item.right, right_wrapped)[::-1])
            stack.append(operator)
            stack.extend(self._wrapped(item.left, left_wrapped)[::-1])
        return "".join(parts)

    @staticmethod
    def _leaf_text(leaf) -> str:
        if isinstance(leaf, EspLeaf):
            return f"{leaf.tail}->{leaf.head}"
        return leaf.name

    @staticmethod
    def _wrapping(node) -> Tuple[bool, bool]:
        left, right = node.left, node.right
        if node.kind is NodeKind.SERIES:
            return left.kind is NodeKind.PARALLEL, right.kind is not NodeKind.LEAF
        return False, right.kind is NodeKind.PARALLEL

    @staticmethod
    def _wrapped(node, wrap: bool) -> list:
        return ["(", node, ")"] if wrap else [node]
