"""The four-cycle free amalgam built from an adjacency type.

An adjacency type presents the pair group <x, y, z...> of two adjacent
tuples: ``x`` and ``y`` are the generator tuples of the two sides and the
``z`` generators form the constant part H^- shared by every tuple.  Copies
H_{i,i+1} rename x to a_i and y to a_{i+1}; the closing copy H_{3,0} is
relabeled so that a_3 plays the role of x and a_0 the role of y.

Free amalgamation over subgroups generated by shared generators is
presented by the union of the factor presentations with those generators
identified, so flattening is a union of relator sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..reports import CheckReport
from .britton import britton_reduce
from .todd_coxeter import todd_coxeter
from .words import Presentation, Word, sq_relator


class ConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class AdjacencyType:
    pres: Presentation
    x: tuple
    y: tuple
    const: tuple = ()
    vertex_relators: tuple = ()  # relators on x (and const) alone, i.e. of H_i

    def __post_init__(self):
        declared = set(self.pres.generators)
        listed = list(self.x) + list(self.y) + list(self.const)
        if len(set(listed)) != len(listed):
            raise ConstructionError("x, y and constant generators must be disjoint")
        if set(listed) != declared:
            raise ConstructionError(f"generators {sorted(declared)} must be split exactly into x, y, const")
        if len(self.x) != len(self.y):
            raise ConstructionError("x and y must have the same length")


def sq_pair() -> AdjacencyType:
    """<x, y | x^y = x^2>, trivial constant part."""
    return AdjacencyType(Presentation(["x", "y"], [sq_relator("x", "y")], "sq-pair"), ("x",), ("y",))


def free_pair() -> AdjacencyType:
    return AdjacencyType(Presentation(["x", "y"], [], "free-pair"), ("x",), ("y",))


def central_pair() -> AdjacencyType:
    """<x, y, z | x^y = x^2, [x, z], [y, z]> with H^- = <z>."""
    comm = lambda u, v: Word.from_powers([(u, -1), (v, -1), (u, 1), (v, 1)])
    pres = Presentation(["x", "y", "z"], [sq_relator("x", "y"), comm("x", "z"), comm("y", "z")], "central-pair")
    return AdjacencyType(pres, ("x",), ("y",), ("z",))


def tuple_names(adj: AdjacencyType, i: int) -> list[str]:
    return [f"a{i}" if len(adj.x) == 1 else f"a{i}_{l}" for l in range(len(adj.x))]


@dataclass
class AmalgamPresentation:
    """G_1 *_{G_0} G_2 with G_0 given by generators mapped into both factors."""

    name: str
    left: Presentation
    right: Presentation
    common: Presentation
    left_map: dict
    right_map: dict

    def __post_init__(self):
        for side, pres, mp in (("left", self.left, self.left_map), ("right", self.right, self.right_map)):
            images = list(mp.values())
            if set(mp) != set(self.common.generators):
                raise ConstructionError(f"{self.name}: {side} map must cover the common generators")
            if len(set(images)) != len(images):
                raise ConstructionError(f"{self.name}: {side} identification map is not injective")
            for g in images:
                if g not in pres.generators:
                    raise ConstructionError(f"{self.name}: {g} is not a generator of the {side} factor")

    def flatten(self, name: Optional[str] = None) -> Presentation:
        if any(k != v for k, v in {**self.left_map, **self.right_map}.items()):
            raise ConstructionError("flattening expects identifications between equal names")
        gens = list(self.left.generators)
        gens += [g for g in self.right.generators if g not in gens]
        rels = list(self.left.relators)
        rels += [r for r in self.right.relators if r not in rels]
        return Presentation(gens, rels, name or self.name)


def _identity(gens) -> dict:
    return {g: g for g in gens}


@dataclass
class FreeAmalgam:
    pairs: dict  # (i, j) -> Presentation of H_{i,j}
    vertices: dict  # i -> Presentation of H_i
    k0: AmalgamPresentation
    k1: AmalgamPresentation
    k2: AmalgamPresentation
    k: AmalgamPresentation
    flat: Presentation
    notes: list = field(default_factory=list)


def build_free_amalgam(adj: AdjacencyType, relabel: bool = True) -> FreeAmalgam:
    """Build H_{0,1}, H_{1,2}, H_{2,3}, H_{3,0}, the amalgams K0, K1, K2, K and flattened K.

    With ``relabel=False`` the closing factor is the plain subgroup
    H_{0,3} (a_0 in the x role), which does not close a directed cycle.
    """
    const = list(adj.const)

    def copy(i, j) -> Presentation:
        mp = dict(zip(adj.x, tuple_names(adj, i)))
        mp.update(zip(adj.y, tuple_names(adj, j)))
        gens = tuple_names(adj, i) + tuple_names(adj, j) + const
        rels = [r.substitute(mp) for r in adj.pres.relators]
        return Presentation(gens, rels, f"H_{i},{j}")

    def vertex(i) -> Presentation:
        mp = dict(zip(adj.x, tuple_names(adj, i)))
        return Presentation(tuple_names(adj, i) + const, [r.substitute(mp) for r in adj.vertex_relators], f"H_{i}")

    pairs = {(0, 1): copy(0, 1), (1, 2): copy(1, 2), (2, 3): copy(2, 3)}
    pairs[(3, 0)] = copy(3, 0) if relabel else copy(0, 3).relabel({}, "H_0,3")
    vertices = {i: vertex(i) for i in range(4)}
    hminus = Presentation(const, [], "H^-")

    def over(name, left, right, common_gens, common_rels=()):
        common = Presentation(common_gens, list(common_rels), f"{name}-common")
        return AmalgamPresentation(name, left, right, common, _identity(common_gens), _identity(common_gens))

    k0_amalgam = over("K0", vertices[0], vertices[2], const)
    k0 = k0_amalgam.flatten("K0")
    # the shared part of H_{0,1} and H_{1,2} is generated by a_1 and H^-
    k1 = over("K1", pairs[(0, 1)], pairs[(1, 2)], tuple_names(adj, 1) + const, vertices[1].relators)
    k2 = over("K2", pairs[(2, 3)], pairs[(3, 0)], tuple_names(adj, 3) + const, vertices[3].relators)
    k1_flat, k2_flat = k1.flatten("K1"), k2.flatten("K2")
    k = AmalgamPresentation("K", k1_flat, k2_flat, k0, _identity(k0.generators), _identity(k0.generators))
    flat = k.flatten("K")
    flat = Presentation(sorted(flat.generators, key=_gen_order(const)), flat.relators, "K")
    notes = ["K1 amalgamates over <a_1, H^->, the subgroup both factors share"]
    if hminus.generators:
        notes.append(f"constant part {hminus.generators} identified across all four copies")
    return FreeAmalgam(pairs, vertices, k0_amalgam, k1, k2, k, flat, notes)


def _gen_order(const):
    def key(g):
        return (1, const.index(g), g) if g in const else (0, 0, g)
    return key


def _cyclic_relator_match(word: Word, relators: Sequence[Word]) -> bool:
    target = word.cyclic_reduce()
    if not len(target):
        return True
    for r in relators:
        for cand in (r, r.inverse()):
            if target in cand.cyclic_conjugates():
                return True
    return False


FACTOR_PAIRS = ((0, 1), (1, 2), (2, 3), (3, 0))


def adjacency_type_check(amalgam: FreeAmalgam, adj: AdjacencyType, max_cosets: int = 10**4) -> CheckReport:
    """Each adjacent pair of K satisfies the relators of the adjacency type.

    A relator instance passes when it is, up to cyclic conjugation and
    inversion, a defining relator of K; otherwise an enumeration of K is
    tried and the instance traced in the table.  For the squaring type the
    distinctness conjunct a_i != a_j is certified inside the factor H_{i,j}
    by Britton reduction (the factors embed in K).
    """
    K = amalgam.flat
    rows, inconclusive, failed = [], [], []
    table = None
    for i, j in FACTOR_PAIRS:
        mp = dict(zip(adj.x, tuple_names(adj, i)))
        mp.update(zip(adj.y, tuple_names(adj, j)))
        for r in adj.pres.relators:
            inst = r.substitute(mp)
            if _cyclic_relator_match(inst, K.relators):
                rows.append({"pair": [i, j], "relator": inst.to_text(), "how": "defining relator"})
                continue
            if table is None:
                table = todd_coxeter(K, [], max_cosets)
            if table.closed:
                ok = all(table.trace(c, inst) == c for c in range(table.index))
                (rows if ok else failed).append({"pair": [i, j], "relator": inst.to_text(), "how": "coset table"})
            else:
                inconclusive.append({"pair": [i, j], "relator": inst.to_text(), "how": str(table.status)})
        if adj.pres.name == "sq-pair":
            # a_i a_j^-1 in H_{i,j} = BS(1,2) via x -> a, y -> b
            form = britton_reduce(Word.from_powers([("a", 1), ("b", -1)]))
            rows.append({"pair": [i, j], "relator": "distinct", "how": "Britton",
                         "nontrivial": form.certified_nontrivial})
            if not form.certified_nontrivial:
                failed.append({"pair": [i, j], "relator": "distinct"})
    status = "fail" if failed else "inconclusive" if inconclusive else "pass"
    return CheckReport("groups.adjacency_type", status, {"type": adj.pres.name, "K": repr(K)},
                       {"checked": rows, "inconclusive": inconclusive, "vacuous": not adj.pres.relators},
                       witness={"failed": failed} if failed else None)
