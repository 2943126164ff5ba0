"""
Canonical tokenizer shared by scoring, validation and gender swapping.

Procedure, applied to NFC-normalized text:
 - whitespace runs separate tokens (leading/trailing whitespace is dropped);
 - each character of PUNCTUATION is a token of its own;
 - an apostrophe (' or ’) right after a letter closes the current token and
   stays attached to it: "l'une" -> ["l'", "une"];
 - everything else, hyphens included, stays inside the token.

Tokens never contain whitespace, so tokenize(" ".join(tokens)) == tokens.
"""
import unicodedata
from typing import NamedTuple, Tuple

PUNCTUATION = frozenset('.,;:!?"()[]«»…—')
APOSTROPHES = frozenset("'’")

TokenSequence = Tuple[str, ...]


class Token(NamedTuple):
    text: str
    start: int
    end: int


def normalize(text):
    return unicodedata.normalize('NFC', text)


def tokenize_with_spans(text):
    """
    Tokenize ``text`` and return tokens with character offsets into the
    NFC-normalized text (see ``normalize``).
    """
    text = normalize(text)
    tokens = []
    start = None

    def close(end):
        nonlocal start
        if start is not None and end > start:
            tokens.append(Token(text[start:end], start, end))
        start = None

    for index, char in enumerate(text):
        if char.isspace():
            close(index)
        elif char in PUNCTUATION:
            close(index)
            tokens.append(Token(char, index, index + 1))
        elif char in APOSTROPHES and start is not None and text[index - 1].isalpha():
            close(index + 1)
        elif start is None:
            start = index
    close(len(text))
    return tokens


def tokenize(text) -> TokenSequence:
    return tuple(token.text for token in tokenize_with_spans(text))


def fold(token):
    """Case-insensitive comparison key for gender-term matching"""
    return token.casefold()
