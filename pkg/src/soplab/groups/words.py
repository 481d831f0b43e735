"""Group words over named generators and finite presentations."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Letter = tuple  # (generator name, +1 or -1)


class PresentationError(ValueError):
    pass


def free_reduce(letters: Iterable[Letter]) -> tuple:
    out: list = []
    for g, e in letters:
        if e not in (1, -1):
            raise ValueError(f"letter exponent must be +1 or -1, got {e!r}")
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


class Word:
    """A freely reduced word; the empty word is the identity."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[Letter] = ()):
        self.letters = free_reduce(letters)

    @classmethod
    def gen(cls, name: str, power: int = 1) -> "Word":
        s = 1 if power > 0 else -1
        return cls([(name, s)] * abs(power))

    @classmethod
    def from_powers(cls, pairs: Iterable[tuple[str, int]]) -> "Word":
        letters = []
        for name, p in pairs:
            letters += Word.gen(name, p).letters
        return cls(letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k))

    def inverse(self) -> "Word":
        return Word((g, -e) for g, e in reversed(self.letters))

    def conj(self, h: "Word") -> "Word":
        """self^h = h^-1 self h."""
        return h.inverse() * self * h

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def generators(self) -> set:
        return {g for g, _ in self.letters}

    def substitute(self, mapping: dict) -> "Word":
        """Replace each generator by a word (generators missing from the map are kept)."""
        out: list = []
        for g, e in self.letters:
            w = mapping.get(g, Word.gen(g))
            if isinstance(w, str):
                w = Word.gen(w)
            out += (w if e == 1 else w.inverse()).letters
        return Word(out)

    def syllables(self) -> list[tuple[str, int]]:
        out: list = []
        for g, e in self.letters:
            if out and out[-1][0] == g:
                out[-1][1] += e
            else:
                out.append([g, e])
        return [(g, p) for g, p in out]

    def cyclic_reduce(self) -> "Word":
        ls = list(self.letters)
        while len(ls) >= 2 and ls[0][0] == ls[-1][0] and ls[0][1] == -ls[-1][1]:
            ls = ls[1:-1]
        return Word(ls)

    def cyclic_conjugates(self) -> set:
        ls = self.cyclic_reduce().letters
        return {Word(ls[i:] + ls[:i]) for i in range(max(len(ls), 1))}

    def to_text(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(g if p == 1 else f"{g}{p}" for g, p in self.syllables())

    def __repr__(self):
        return f"Word({self.to_text()!r})"


def sq_relator(x: str, y: str) -> Word:
    """y^-1 x y x^-2, i.e. the relation x^y = x^2."""
    return Word.from_powers([(y, -1), (x, 1), (y, 1), (x, -2)])


def parse_word(text: str, generators: Sequence[str]) -> Word:
    """Parse letter-exponent notation like ``B-1 A B A-2``.

    Each token is a declared generator name followed by an optional signed
    integer exponent; the longest matching generator name wins, so names
    such as ``a0`` and ``a1`` are unambiguous.
    """
    text = text.strip()
    if text in ("", "1"):
        return Word()
    by_len = sorted(generators, key=len, reverse=True)
    pairs = []
    for tok in text.split():
        for g in by_len:
            if tok.startswith(g):
                rest = tok[len(g):]
                if rest == "":
                    pairs.append((g, 1))
                    break
                if re.fullmatch(r"[+-]?\d+", rest):
                    pairs.append((g, int(rest)))
                    break
        else:
            raise PresentationError(f"cannot parse token {tok!r} over generators {list(generators)}")
    return Word.from_powers(pairs)


@dataclass
class Presentation:
    generators: list
    relators: list = field(default_factory=list)
    name: str = ""

    def __post_init__(self):
        self.generators = list(self.generators)
        if len(set(self.generators)) != len(self.generators):
            raise PresentationError("duplicate generator names")
        rels = []
        for r in self.relators:
            if not isinstance(r, Word):
                r = parse_word(r, self.generators)
            extra = r.generators() - set(self.generators)
            if extra:
                raise PresentationError(f"relator {r.to_text()} uses undeclared generators {sorted(extra)}")
            if len(r):
                rels.append(r)
        self.relators = rels

    def relabel(self, mapping: dict, name: str | None = None) -> "Presentation":
        gens = [mapping.get(g, g) for g in self.generators]
        return Presentation(gens, [r.substitute(mapping) for r in self.relators],
                            self.name if name is None else name)

    def same_as(self, other: "Presentation") -> bool:
        """Same generator list and the same relator set (order-insensitive)."""
        return self.generators == other.generators and set(self.relators) == set(other.relators)

    def to_text(self) -> str:
        return "\n".join([" ".join(self.generators)] + [r.to_text() for r in self.relators]) + "\n"

    @classmethod
    def from_text(cls, text: str, name: str = "") -> "Presentation":
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            raise PresentationError("empty presentation text")
        gens = lines[0].split()
        return cls(gens, [parse_word(ln, gens) for ln in lines[1:]], name)

    def __repr__(self):
        rel = ", ".join(r.to_text() for r in self.relators)
        return f"<{' '.join(self.generators)} | {rel}>"


def preset(name: str) -> Presentation:
    """Named presentations: triangle, two-cycle, higman, chain-k (k >= 2)."""
    if name == "triangle":
        return Presentation(["A", "B", "C"], [sq_relator("A", "B"), sq_relator("B", "C"), sq_relator("C", "A")],
                            "triangle")
    if name == "two-cycle":
        return Presentation(["A", "B"], [sq_relator("A", "B"), sq_relator("B", "A")], "two-cycle")
    if name == "higman":
        g = ["A", "B", "C", "D"]
        return Presentation(g, [sq_relator(g[i], g[(i + 1) % 4]) for i in range(4)], "higman")
    m = re.fullmatch(r"chain-(\d+)", name)
    if m:
        k = int(m.group(1))
        if k < 2:
            raise PresentationError("chain-k needs k >= 2")
        g = [f"X{i}" for i in range(k)]
        return Presentation(g, [sq_relator(g[i], g[j]) for i in range(k) for j in range(i + 1, k)], name)
    m = re.fullmatch(r"cyclic-(\d+)", name)
    if m:
        return Presentation(["A"], [Word.gen("A", int(m.group(1)))], name)
    raise PresentationError(f"unknown preset {name!r}")


PRESETS = ("triangle", "two-cycle", "higman", "chain-k")
