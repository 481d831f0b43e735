"""Group-side check reports: cycle collapse, probing, and the Britton examples."""

from __future__ import annotations

from ..reports import CheckReport, timed
from .britton import britton_reduce
from .todd_coxeter import todd_coxeter, verify_table
from .words import Presentation, Word, preset

READING = "x^y = x^2 (y^-1 x y x^-2)"


def enumeration_report(pres: Presentation, max_cosets: int, claim: str = "groups.enumerate",
                       subgroup=()) -> CheckReport:
    with timed() as clock:
        table = todd_coxeter(pres, list(subgroup), max_cosets)
    values = {"status": str(table.status), "reading": READING}
    values.update({k: v for k, v in table.stats.items()})
    if table.closed:
        values["index"] = table.index
        values["sound"] = not verify_table(table, pres, list(subgroup))
    # an overflow is a probing outcome, never a failure
    status = "pass" if table.closed else "inconclusive"
    return CheckReport(claim, status, {"presentation": pres.name or repr(pres), "max_cosets": max_cosets},
                       values, runtime=clock.elapsed)


def triangle_refutation_check(max_cosets: int = 10**6, name: str = "triangle") -> CheckReport:
    """A closed enumeration of index 1 forces x = y = z = e in any solution,
    which contradicts x != y; an overflow leaves the question open."""
    pres = preset(name)
    with timed() as clock:
        table = todd_coxeter(pres, [], max_cosets)
    values = {"status": str(table.status), "reading": READING, **table.stats}
    if table.closed and table.index == 1:
        status, notes = "pass", "group is trivial: no cycle of distinct elements exists in any group"
    elif table.closed:
        status, notes = "fail", "group is nontrivial: no refutation"
    else:
        status, notes = "inconclusive", "enumeration did not close within the bound"
    return CheckReport(f"groups.refute.{name}", status, {"max_cosets": max_cosets}, values,
                       witness={"index": table.index} if status == "fail" else None,
                       notes=notes, runtime=clock.elapsed)


def higman_probe(max_cosets: int = 10**5) -> CheckReport:
    """The 4-cycle is expected not to collapse: Overflow is the expected outcome."""
    pres = preset("higman")
    with timed() as clock:
        table = todd_coxeter(pres, [], max_cosets)
    values = {"status": str(table.status), "reading": READING, **table.stats}
    overflow = not table.closed
    return CheckReport("groups.probe.higman", "pass" if overflow else "fail", {"max_cosets": max_cosets}, values,
                       witness=None if overflow else {"index": table.index},
                       notes="pass by expectation: no collapse found; infiniteness is not certified",
                       runtime=clock.elapsed)


def chain_probe(k: int, max_cosets: int = 10**5) -> CheckReport:
    """Transitive-tournament chain of length k: probed, never verified."""
    pres = preset(f"chain-{k}")
    table = todd_coxeter(pres, [], max_cosets)
    values = {"status": str(table.status), "reading": READING, **table.stats}
    if table.closed and table.index == 1:
        return CheckReport("groups.probe.chain", "fail", {"k": k, "max_cosets": max_cosets}, values,
                           witness={"index": 1}, notes="presentation collapses")
    return CheckReport("groups.probe.chain", "inconclusive", {"k": k, "max_cosets": max_cosets}, values,
                       notes="unresolved: enumeration does not decide nontriviality of the chain presentation")


def britton_examples() -> list[CheckReport]:
    out = []
    cases = [
        ("c-1 a c", "nontrivial"),
        ("c-1 b c", "b2"),
        ("c b2 c-1", "b"),
    ]
    from .words import parse_word

    for text, expect in cases:
        form = britton_reduce(parse_word(text, ["a", "b", "c"]))
        if expect == "nontrivial":
            ok = form.certified_nontrivial and form.stable_count == 2
        else:
            target = parse_word(expect, ["a", "b", "c"])
            from .affine import evaluate

            ok = form.stable_count == 0 and form.parts[0] == evaluate(target)
        values = {"form": repr(form), "stable_letters": form.stable_count, "reduced": form.is_reduced,
                  "nontrivial": form.certified_nontrivial,
                  "rewrites": [f"{s.kind}: {s.before!r} -> {s.after!r}" for s in form.steps],
                  "rewrites_verified": all(s.verified for s in form.steps)}
        out.append(CheckReport("groups.britton", "pass" if ok else "fail", {"word": text, "expect": expect},
                               values, witness=None if ok else {"form": repr(form)}))
    return out
