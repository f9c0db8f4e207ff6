"""C3 linearization of contract inheritance.

Solidity lists bases from "most base-like" to "most derived", so the merge
takes the bases right to left: ``contract D is B, C`` linearizes as
``D + merge(L(C), L(B), [C, B])``.
"""
from __future__ import annotations

from typing import Mapping

from ..frontend.ast import ContractDef


class LinearizationError(Exception):
    def __init__(self, contract: str, message: str, cycle: list[str] | None = None):
        super().__init__(f"cannot linearize '{contract}': {message}")
        self.contract = contract
        self.cycle = cycle


def c3_merge(sequences: list[list[str]]) -> list[str] | None:
    """Merge ``sequences``; None when no consistent head can be chosen."""
    seqs = [list(s) for s in sequences if s]
    out: list[str] = []
    while seqs:
        for seq in seqs:
            head = seq[0]
            if not any(head in other[1:] for other in seqs):
                break
        else:
            return None
        out.append(head)
        seqs = [s[1:] if s[0] == head else s for s in seqs]
        seqs = [s for s in seqs if s]
    return out


def linearize(contract: ContractDef, all_contracts: Mapping[str, ContractDef]) -> list[str]:
    """Linearization of ``contract``, most-derived first."""
    cache: dict[str, list[str]] = {}
    return _linearize(contract.name, all_contracts, cache, [])


def linearize_all(all_contracts: Mapping[str, ContractDef]) -> dict[str, list[str]]:
    """Linearize every contract; raises on the first failure (in name order)."""
    cache: dict[str, list[str]] = {}
    for name in sorted(all_contracts):
        _linearize(name, all_contracts, cache, [])
    return cache


def _linearize(name: str, contracts: Mapping[str, ContractDef], cache: dict[str, list[str]], path: list[str]) -> list[str]:
    if name in cache:
        return cache[name]
    if name in path:
        cycle = path[path.index(name) :] + [name]
        raise LinearizationError(path[0], "inheritance cycle " + " -> ".join(cycle), cycle)
    contract = contracts.get(name)
    if contract is None:
        raise LinearizationError(path[0] if path else name, f"unknown base contract '{name}'")
    path = path + [name]
    bases = contract.bases
    if len(set(bases)) != len(bases):
        raise LinearizationError(path[0], f"'{name}' lists a base contract twice")
    rev = list(reversed(bases))
    merged = c3_merge([_linearize(b, contracts, cache, path) for b in rev] + [rev])
    if merged is None:
        raise LinearizationError(path[0], f"no consistent order for the bases of '{name}'")
    cache[name] = [name] + merged
    return cache[name]
