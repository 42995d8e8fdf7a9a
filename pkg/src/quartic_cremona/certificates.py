"""Structured verdicts for the verification pipelines.

A Certificate records what was checked (steps), what broke (witnesses) and
which named unprovable hypotheses the conclusion leans on (axioms).  The
verdict is derived, never set by hand:

    FAIL         some check produced a counterexample (witnesses non-empty)
    CONDITIONAL  every computable check passed but at least one axiom is used
    PASS         every check passed and no axiom was needed
"""

from dataclasses import dataclass, field

PASS = "PASS"
FAIL = "FAIL"
CONDITIONAL = "CONDITIONAL"


@dataclass(frozen=True)
class Step:
    claim: str
    evidence: str

    def to_dict(self):
        return {"claim": self.claim, "evidence": self.evidence}


@dataclass(frozen=True)
class Axiom:
    name: str
    statement: str

    def to_dict(self):
        return {"name": self.name, "statement": self.statement}


HODGE_AXIOM = Axiom(
    "Hodge",
    "for a very general surface in the family every automorphism multiplies "
    "the holomorphic 2-form by +1 or -1, hence acts as +id or -id on the "
    "discriminant group of its divisor lattice",
)

TORELLI_AXIOM = Axiom(
    "Torelli",
    "an automorphism whose induced lattice action has finite order is itself "
    "of finite order, and the only finite-order automorphism of the very "
    "general surface is the identity",
)


class CertificateError(ValueError):
    pass


@dataclass(frozen=True)
class Certificate:
    verdict: str
    steps: tuple = ()
    witnesses: tuple = ()
    axioms: tuple = ()

    def __post_init__(self):
        if self.verdict not in (PASS, FAIL, CONDITIONAL):
            raise CertificateError(f"unknown verdict {self.verdict!r}")
        if self.verdict == FAIL and not self.witnesses:
            raise CertificateError("FAIL requires at least one witness")
        if self.verdict == CONDITIONAL and not self.axioms:
            raise CertificateError("CONDITIONAL requires a non-empty axiom list")
        if self.verdict == PASS and (self.witnesses or self.axioms):
            raise CertificateError("PASS must carry no witnesses and no axioms")
        if self.verdict == CONDITIONAL and self.witnesses:
            raise CertificateError("CONDITIONAL requires all computable steps to pass")

    @property
    def axiom_names(self):
        return {a.name for a in self.axioms}

    def passed(self, allow_axioms: bool = True) -> bool:
        if self.verdict == PASS:
            return True
        if self.verdict == CONDITIONAL:
            return allow_axioms
        return False

    def to_dict(self, **extra):
        doc = dict(extra)
        doc.update(
            {
                "verdict": self.verdict,
                "steps": [s.to_dict() for s in self.steps],
                "witnesses": list(self.witnesses),
                "axioms": [a.to_dict() for a in self.axioms],
            }
        )
        return doc


def conclude(steps, witnesses=(), axioms=()) -> Certificate:
    """Build a certificate with the verdict derived from the evidence."""
    steps = tuple(steps)
    witnesses = tuple(witnesses)
    # deduplicate axioms, preserving first-seen order
    seen, uniq = set(), []
    for ax in axioms:
        if ax.name not in seen:
            seen.add(ax.name)
            uniq.append(ax)
    axioms = tuple(uniq)
    if witnesses:
        return Certificate(FAIL, steps, witnesses, ())
    if axioms:
        return Certificate(CONDITIONAL, steps, (), axioms)
    return Certificate(PASS, steps, (), ())
