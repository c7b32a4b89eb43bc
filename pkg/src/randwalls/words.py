"""Words over a symmetrized generating set.

A letter is a nonzero signed int: +g is the g-th generator, -g its inverse.
String form uses a..z for generators and A..Z for inverses, so n <= 26.
"""

from __future__ import annotations

MAX_LETTERS = 26


def inverse(word: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-g for g in reversed(word))


def is_reduced(word: tuple[int, ...]) -> bool:
    return all(word[i + 1] != -word[i] for i in range(len(word) - 1))


def is_cyclically_reduced(word: tuple[int, ...]) -> bool:
    if not word:
        return True
    return is_reduced(word) and word[0] != -word[-1]


def word_to_string(word: tuple[int, ...]) -> str:
    chars = []
    for g in word:
        if not (1 <= abs(g) <= MAX_LETTERS):
            raise ValueError(f"letter {g} out of a..z range")
        base = ord("a") if g > 0 else ord("A")
        chars.append(chr(base + abs(g) - 1))
    return "".join(chars)


def string_to_word(s: str) -> tuple[int, ...]:
    word = []
    for ch in s:
        if "a" <= ch <= "z":
            word.append(ord(ch) - ord("a") + 1)
        elif "A" <= ch <= "Z":
            word.append(-(ord(ch) - ord("A") + 1))
        else:
            raise ValueError(f"bad letter {ch!r}")
    return tuple(word)


def rotations(word: tuple[int, ...]):
    for r in range(len(word)):
        yield word[r:] + word[:r]


def canonical_rotation(word: tuple[int, ...]) -> tuple[int, ...]:
    """Lexicographically minimal cyclic rotation (for dedup only)."""
    return min(rotations(word)) if word else word
