"""C tokenizer and word extraction.

Two consumers with different needs share this lexer:

* clone detection wants normalized token strings (identifiers and literals
  abstracted away, so renamed copies compare equal),
* embedding / tagging want a channel-annotated word stream (alphabetic words
  and numbers pulled out of identifiers, comments and literals, plus the
  punctuation symbols).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence


class TokenKind(Enum):
    IDENTIFIER = "identifier"
    KEYWORD = "keyword"
    NUMBER_LITERAL = "number"
    STRING_LITERAL = "string"
    CHAR_LITERAL = "char"
    COMMENT = "comment"
    OPERATOR = "operator"
    DELIMITER = "delimiter"


class Channel(Enum):
    """Origin channel of a word; the single-letter code is used on the wire."""

    IDENTIFIER = "i"
    COMMENT = "c"
    LITERAL = "l"
    NUMBER = "n"
    SYMBOL = "s"

    @classmethod
    def from_code(cls, code: str) -> "Channel":
        return _CHANNEL_BY_CODE[code]


_CHANNEL_BY_CODE = {ch.value: ch for ch in Channel}


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    line: int
    column: int


@dataclass(frozen=True)
class Word:
    channel: Channel
    text: str


@dataclass
class WordSequence:
    """Word stream of one code fragment (or a whole file)."""

    file_id: int
    begin_line: int
    end_line: int
    words: list[Word] = field(default_factory=list)

    def texts(self) -> list[str]:
        return [w.text for w in self.words]


# C89/C99/C11 keywords.
C_KEYWORDS = frozenset(
    """
    auto break case char const continue default do double else enum extern
    float for goto if inline int long register restrict return short signed
    sizeof static struct switch typedef union unsigned void volatile while
    _Alignas _Alignof _Atomic _Bool _Complex _Generic _Imaginary _Noreturn
    _Static_assert _Thread_local
    """.split()
)

# Longest-first so maximal munch falls out of the ordering.
_OPERATORS = [
    "<<=", ">>=", "...",
    "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
    "+=", "-=", "*=", "/=", "%=", "&=", "^=", "|=", "##",
    "+", "-", "*", "/", "%", "=", "<", ">", "!", "&", "|", "^", "~",
    "?", ":", ".", "#",
]
_DELIMITERS = frozenset("(){}[];,")

_IDENT_START = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CONT = _IDENT_START | frozenset("0123456789")
_DIGITS = frozenset("0123456789")


def tokenize(text: str, diagnostics: list[str] | None = None) -> list[Token]:
    """Lex C source into tokens covering all non-whitespace input.

    Comments and string/char literals come out as single tokens.  An
    unterminated comment or literal extends to end of input; a diagnostic is
    appended to ``diagnostics`` (when given) instead of aborting.
    """
    tokens: list[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(text)

    def advance_over(chunk: str) -> None:
        nonlocal line, col
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)

    def emit(kind: TokenKind, chunk: str) -> None:
        tokens.append(Token(kind, chunk, line, col))
        advance_over(chunk)

    while i < n:
        ch = text[i]
        if ch in " \t\r\n\f\v":
            advance_over(ch)
            i += 1
            continue
        if ch == "/" and i + 1 < n and text[i + 1] == "/":
            end = text.find("\n", i)
            end = n if end == -1 else end
            emit(TokenKind.COMMENT, text[i:end])
            i = end
            continue
        if ch == "/" and i + 1 < n and text[i + 1] == "*":
            end = text.find("*/", i + 2)
            if end == -1:
                if diagnostics is not None:
                    diagnostics.append(f"unterminated comment at line {line}")
                end = n
            else:
                end += 2
            emit(TokenKind.COMMENT, text[i:end])
            i = end
            continue
        if ch == '"' or ch == "'":
            kind = TokenKind.STRING_LITERAL if ch == '"' else TokenKind.CHAR_LITERAL
            j = i + 1
            while j < n and text[j] != ch:
                j += 2 if text[j] == "\\" else 1
            if j >= n:
                if diagnostics is not None:
                    diagnostics.append(f"unterminated literal at line {line}")
                j = n - 1
            emit(kind, text[i : j + 1])
            i = j + 1
            continue
        if ch in _DIGITS or (ch == "." and i + 1 < n and text[i + 1] in _DIGITS):
            j = i + 1
            while j < n:
                c = text[j]
                if c in _IDENT_CONT or c == ".":
                    j += 1
                elif c in "+-" and text[j - 1] in "eEpP":
                    j += 1
                else:
                    break
            emit(TokenKind.NUMBER_LITERAL, text[i:j])
            i = j
            continue
        if ch in _IDENT_START:
            j = i + 1
            while j < n and text[j] in _IDENT_CONT:
                j += 1
            chunk = text[i:j]
            kind = TokenKind.KEYWORD if chunk in C_KEYWORDS else TokenKind.IDENTIFIER
            emit(kind, chunk)
            i = j
            continue
        if ch in _DELIMITERS:
            emit(TokenKind.DELIMITER, ch)
            i += 1
            continue
        for op in _OPERATORS:
            if text.startswith(op, i):
                emit(TokenKind.OPERATOR, op)
                i += len(op)
                break
        else:
            # Unknown byte (stray backslash, non-ASCII, ...): keep as operator
            # so the cover-all-input contract holds.
            emit(TokenKind.OPERATOR, ch)
            i += 1
    return tokens


_IDENT_PART = re.compile(r"[0-9]+|[A-Z]+(?![a-z])|[A-Z][a-z]*|[a-z]+")
_ALPHA_OR_DIGIT_RUN = re.compile(r"[A-Za-z]+|[0-9]+")


def split_identifier(text: str) -> list[str]:
    """Split an identifier at underscores, camel boundaries and digit runs.

    An uppercase run followed by a lowercase letter splits before its last
    capital (``parseHTTPResponse2`` -> parse, HTTP, Response, 2).  Case is
    preserved; concatenating the parts reproduces the identifier minus its
    underscores.
    """
    return _IDENT_PART.findall(text)


def _words_of_token(token: Token) -> Iterable[Word]:
    kind = token.kind
    if kind in (TokenKind.IDENTIFIER, TokenKind.KEYWORD):
        for part in split_identifier(token.text):
            if part[0] in _DIGITS:
                yield Word(Channel.NUMBER, part)
            else:
                yield Word(Channel.IDENTIFIER, part)
    elif kind == TokenKind.COMMENT:
        for run in _ALPHA_OR_DIGIT_RUN.findall(token.text):
            channel = Channel.NUMBER if run[0] in _DIGITS else Channel.COMMENT
            yield Word(channel, run)
    elif kind in (TokenKind.STRING_LITERAL, TokenKind.CHAR_LITERAL, TokenKind.NUMBER_LITERAL):
        for run in _ALPHA_OR_DIGIT_RUN.findall(token.text):
            channel = Channel.NUMBER if run[0] in _DIGITS else Channel.LITERAL
            yield Word(channel, run)
    else:
        yield Word(Channel.SYMBOL, token.text)


def words_with_lines(tokens: Sequence[Token]) -> list[tuple[Word, int]]:
    """Expand tokens into (word, source line) pairs in token order."""
    out: list[tuple[Word, int]] = []
    for token in tokens:
        for word in _words_of_token(token):
            out.append((word, token.line))
    return out


def extract_words(tokens: Sequence[Token], begin_line: int, end_line: int, file_id: int = -1) -> WordSequence:
    """Word sequence of the tokens whose start line falls in [begin_line, end_line]."""
    if begin_line > end_line:
        raise ValueError(f"begin_line {begin_line} > end_line {end_line}")
    words = [
        word
        for token in tokens
        if begin_line <= token.line <= end_line
        for word in _words_of_token(token)
    ]
    return WordSequence(file_id=file_id, begin_line=begin_line, end_line=end_line, words=words)


_NORMALIZED = {
    TokenKind.IDENTIFIER: "$id",
    TokenKind.NUMBER_LITERAL: "$num",
    TokenKind.STRING_LITERAL: "$str",
    TokenKind.CHAR_LITERAL: "$chr",
}


def normalize_with_lines(tokens: Sequence[Token]) -> tuple[list[str], list[int]]:
    """Normalized token strings plus the source line of each, comments dropped."""
    texts: list[str] = []
    lines: list[int] = []
    for token in tokens:
        if token.kind == TokenKind.COMMENT:
            continue
        texts.append(_NORMALIZED.get(token.kind, token.text))
        lines.append(token.line)
    return texts, lines


def normalize_for_clone_detection(tokens: Sequence[Token]) -> list[str]:
    """Token sequence with identifiers/literals abstracted, for type-1/2 matching."""
    return normalize_with_lines(tokens)[0]
