"""Britton reduction in the path group <a, b, c | a^b = a^2, b^c = b^2>.

The path group is an HNN extension of BS(1,2) = <a, b> with stable letter
``c`` conjugating A = <b> onto B = <b^2> via g -> g^2.  Base elements are
kept as exact affine maps, so membership in A (offset 0) and in B (offset
0, even scale) is decided by inspection.  Every pinch rewrite is checked
exactly before it is applied.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .affine import BS12, AffineDyadicMap, evaluate
from .words import Word


class BrittonConsistencyError(AssertionError):
    """A membership oracle and the conjugating isomorphism disagree."""


def in_A(g: AffineDyadicMap) -> bool:
    return g.offset == 0


def in_B(g: AffineDyadicMap) -> bool:
    return g.offset == 0 and g.scale % 2 == 0


def phi_square(g: AffineDyadicMap) -> AffineDyadicMap:
    return g @ g


def phi_sqrt(g: AffineDyadicMap) -> AffineDyadicMap:
    if not in_B(g):
        raise BrittonConsistencyError(f"{g!r} is not in B")
    return AffineDyadicMap(g.scale // 2, 0)


@dataclass(frozen=True)
class HNNSetup:
    """Base model, stable letter and the isomorphism phi: A -> B with t^-1 g t = phi(g)."""

    model: dict = field(default_factory=lambda: dict(BS12))
    stable: str = "c"
    in_A: Callable = in_A
    in_B: Callable = in_B
    phi: Callable = phi_square
    phi_inv: Callable = phi_sqrt


PATH_GROUP = HNNSetup()


@dataclass
class RewriteStep:
    kind: str  # "t^-1 g t" or "t g t^-1"
    before: AffineDyadicMap
    after: AffineDyadicMap
    verified: bool


@dataclass
class BrittonForm:
    """g_0 t^e_1 g_1 ... t^e_r g_r with base elements as affine maps."""

    parts: list
    exponents: list
    steps: list = field(default_factory=list)
    setup: HNNSetup = PATH_GROUP

    @property
    def stable_count(self) -> int:
        return len(self.exponents)

    def pinches(self) -> list[int]:
        """Positions i with t^e_i g_i t^e_{i+1} a pinch; empty when reduced."""
        out = []
        for i in range(len(self.exponents) - 1):
            e1, e2, g = self.exponents[i], self.exponents[i + 1], self.parts[i + 1]
            if e1 == -1 and e2 == 1 and self.setup.in_A(g):
                out.append(i)
            if e1 == 1 and e2 == -1 and self.setup.in_B(g):
                out.append(i)
        return out

    @property
    def is_reduced(self) -> bool:
        return not self.pinches()

    @property
    def certified_nontrivial(self) -> bool:
        """Britton's lemma: a reduced form with a stable letter, or a non-identity base element."""
        if not self.is_reduced:
            return False
        return self.stable_count >= 1 or not self.parts[0].is_identity

    @property
    def is_identity(self) -> bool:
        return self.is_reduced and self.stable_count == 0 and self.parts[0].is_identity

    def to_word(self) -> Word:
        out = self.parts[0].to_word()
        for e, g in zip(self.exponents, self.parts[1:]):
            out = out * Word.gen(self.setup.stable, e) * g.to_word()
        return out

    def __repr__(self):
        bits = [repr(self.parts[0])]
        for e, g in zip(self.exponents, self.parts[1:]):
            bits += [f"{self.setup.stable}^{e}", repr(g)]
        return "BrittonForm(" + " . ".join(bits) + ")"


def britton_reduce(word: Word, setup: HNNSetup = PATH_GROUP) -> BrittonForm:
    """Reduce ``word`` by removing pinches until none is left.

    A single left-to-right pass with a stack suffices: each pinch removal
    merges base elements, and only the new top of the stack can form a new
    pinch with the next stable letter.
    """
    t = setup.stable
    parts = [AffineDyadicMap.identity()]
    exps: list[int] = []
    steps: list[RewriteStep] = []
    for g, e in word:
        if g != t:
            m = setup.model[g]
            parts[-1] = parts[-1] @ (m if e == 1 else m.inverse())
            continue
        if exps and exps[-1] == -e:
            mid = parts[-1]
            if exps[-1] == -1 and setup.in_A(mid):
                # t^-1 g t = phi(g)
                new = setup.phi(mid)
                ok = setup.in_B(new) and setup.phi_inv(new) == mid
                steps.append(RewriteStep("t^-1 g t", mid, new, ok))
            elif exps[-1] == 1 and setup.in_B(mid):
                # t g t^-1 = phi^-1(g)
                new = setup.phi_inv(mid)
                ok = setup.in_A(new) and setup.phi(new) == mid
                steps.append(RewriteStep("t g t^-1", mid, new, ok))
            else:
                new = None
            if new is not None:
                if not steps[-1].verified:
                    raise BrittonConsistencyError(f"rewrite of {mid!r} to {new!r} fails the exact check")
                parts.pop()
                exps.pop()
                parts[-1] = parts[-1] @ new
                continue
        exps.append(e)
        parts.append(AffineDyadicMap.identity())
    form = BrittonForm(parts, exps, steps, setup)
    if not form.is_reduced:
        raise BrittonConsistencyError("re-scan found a pinch after reduction")
    return form


def base_value(word: Word, setup: HNNSetup = PATH_GROUP) -> Optional[AffineDyadicMap]:
    """Affine value of a word free of stable letters, else None."""
    if any(g == setup.stable for g, _ in word):
        return None
    return evaluate(word, setup.model)
