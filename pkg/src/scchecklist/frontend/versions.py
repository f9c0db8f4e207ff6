"""Compiler-version constraints as written in ``pragma solidity``."""
from __future__ import annotations

import re
from dataclasses import dataclass

Version = tuple[int, int, int]

_COMPARATOR = re.compile(r"^(\^|~|>=|<=|>|<|=)?\s*(\d+)(?:\.(\d+|[xX*]))?(?:\.(\d+|[xX*]))?$")
_TOP: Version = (1 << 30, 0, 0)


class VersionSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class Comparator:
    op: str  # one of "=", "^", "~", ">=", "<=", ">", "<"
    version: Version
    # components actually written; "0.8" has precision 2
    precision: int = 3

    def interval(self) -> tuple[Version, bool, Version, bool]:
        """(low, low_inclusive, high, high_inclusive)."""
        v = self.version
        if self.op == "=" and self.precision < 3:
            return v, True, _bump(v, self.precision - 1), False
        if self.op == "=":
            return v, True, v, True
        if self.op == "^":
            if v[0] > 0:
                return v, True, (v[0] + 1, 0, 0), False
            if v[1] > 0 or self.precision < 3:
                return v, True, (0, v[1] + 1, 0), False
            return v, True, (0, 0, v[2] + 1), False
        if self.op == "~":
            return v, True, _bump(v, 0 if self.precision == 1 else 1), False
        if self.op == ">=":
            return v, True, _TOP, False
        if self.op == ">":
            return v, False, _TOP, False
        if self.op == "<=":
            return (0, 0, 0), True, v, True
        return (0, 0, 0), True, v, False

    def __str__(self) -> str:
        text = ".".join(str(c) for c in self.version[: self.precision])
        return text if self.op == "=" else f"{self.op}{text}"


def _bump(v: Version, index: int) -> Version:
    parts = list(v)
    parts[index] += 1
    for k in range(index + 1, 3):
        parts[k] = 0
    return tuple(parts)  # type: ignore[return-value]


@dataclass(frozen=True)
class VersionConstraint:
    """A disjunction of conjunctions of comparators (``a b || c``)."""

    alternatives: tuple[tuple[Comparator, ...], ...]

    @property
    def kind(self) -> str:
        """exact, caret, gte, lte or range."""
        if len(self.alternatives) != 1 or len(self.alternatives[0]) != 1:
            return "range"
        (c,) = self.alternatives[0]
        if c.op == "=":
            return "exact" if c.precision == 3 else "range"
        if c.op == "^":
            return "caret"
        if c.op in (">=", ">"):
            return "gte"
        if c.op in ("<=", "<"):
            return "lte"
        return "range"

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"

    def intervals(self) -> list[tuple[Version, bool, Version, bool]]:
        out = []
        for conj in self.alternatives:
            lo, lo_inc, hi, hi_inc = (0, 0, 0), True, _TOP, False
            for c in conj:
                clo, clo_inc, chi, chi_inc = c.interval()
                if clo > lo or (clo == lo and not clo_inc):
                    lo, lo_inc = clo, clo_inc
                if chi < hi or (chi == hi and not chi_inc):
                    hi, hi_inc = chi, chi_inc
            if lo < hi or (lo == hi and lo_inc and hi_inc):
                out.append((lo, lo_inc, hi, hi_inc))
        return out

    def allows(self, v: Version) -> bool:
        for lo, lo_inc, hi, hi_inc in self.intervals():
            if (lo < v or (lo_inc and lo == v)) and (v < hi or (hi_inc and v == hi)):
                return True
        return False

    def allows_below(self, bound: Version) -> bool:
        """True when some admitted version is strictly below ``bound``."""
        return any(lo < bound for lo, _, _, _ in self.intervals())

    def __str__(self) -> str:
        return " || ".join(" ".join(str(c) for c in conj) for conj in self.alternatives)


def parse_constraint(text: str) -> VersionConstraint:
    """Parse ``^0.8.0``, ``>=0.6.0 <0.9.0``, ``0.8.19 || 0.7.6`` and friends.

    Hyphen ranges and wildcards other than a trailing ``x``/``*`` are not
    accepted.
    """
    text = text.strip()
    if not text:
        raise VersionSyntaxError("empty version constraint")
    alternatives = []
    for part in text.split("||"):
        # glue "> = 0.6" style spacing between operator and number
        pieces = re.findall(r"(?:\^|~|>=|<=|>|<|=)?\s*[0-9][0-9.xX*]*", part)
        leftover = re.sub(r"(?:\^|~|>=|<=|>|<|=)?\s*[0-9][0-9.xX*]*", "", part).strip()
        if leftover or not pieces:
            raise VersionSyntaxError(f"cannot read version constraint {part.strip()!r}")
        conj = []
        for piece in pieces:
            m = _COMPARATOR.match(piece.strip())
            if not m:
                raise VersionSyntaxError(f"cannot read comparator {piece.strip()!r}")
            op = m.group(1) or "="
            comps = [m.group(2), m.group(3), m.group(4)]
            precision = 0
            nums = []
            for c in comps:
                if c is None or c in "xX*":
                    break
                nums.append(int(c))
                precision += 1
            nums += [0] * (3 - len(nums))
            conj.append(Comparator(op, (nums[0], nums[1], nums[2]), precision))
        alternatives.append(tuple(conj))
    return VersionConstraint(tuple(alternatives))
