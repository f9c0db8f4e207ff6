"""The fixed rule catalog: ids, default severities and checklist linkage."""
from __future__ import annotations

from .base import RuleSpec

CATALOG: tuple[RuleSpec, ...] = (
    RuleSpec(
        "D01", "strict-balance-equality", "Strict equality on the contract balance", "design", "warning", "DES-02", ("CEI", "MH", "GC"),
        "Flags == and != comparisons against the contract's own balance (address(this).balance or this.balance). "
        "Anyone can force ether into a contract, so an exact-balance invariant can be broken from outside.",
    ),
    RuleSpec(
        "D02", "missing-circuit-breaker", "No emergency stop", "design", "info", "DES-01", ("SB", "RL", "TE", "PD", "OW"),
        "Reports a contract that exposes state-changing public or external functions but has no way to halt them: "
        "no boolean gate tested in a modifier, require or if and switched by an access-controlled function, "
        "no access-controlled selfdestruct, and no modifier named like a pause switch.",
    ),
    RuleSpec(
        "D03", "push-payment-in-loop", "Ether pushed to recipients inside a loop", "design", "warning", "DES-08", ("CEI",),
        "Flags transfer, send, or a low-level call carrying value inside a loop body. One failing recipient can block "
        "the whole batch; let recipients withdraw instead.",
    ),
    RuleSpec(
        "D04", "c3-hazard", "Same member defined by several ancestors", "design", "info", "DES-06", ("PD", "REU"),
        "For a contract with two or more direct bases, reports every function or modifier name that more than one "
        "ancestor in its C3 linearization defines. Which definition runs depends on the base order.",
    ),
    RuleSpec(
        "C01", "unchecked-low-level-call", "Low-level call result ignored", "coding", "error", "COD-01", ("CEI", "MU", "GC"),
        "Flags call, delegatecall, staticcall and send used as bare statements. These return false on failure "
        "instead of reverting, so an ignored result hides the failure.",
    ),
    RuleSpec(
        "C02", "reentrancy-cei", "State change after external call", "coding", "error", "COD-02", ("CEI", "MU"),
        "Flags an external call (low-level, high-level or transfer) after which the control-flow graph can reach a "
        "state write or another external call. Loop back edges count. Functions guarded by a mutex modifier are skipped.",
    ),
    RuleSpec(
        "C03", "missing-access-control", "Critical operation without access control", "coding", "warning", "COD-03", ("AU", "OW"),
        "Flags selfdestruct, writes to an owner-like state variable, and transfers of the full contract balance in a "
        "public or external function that invokes no modifier and has no msg.sender check dominating the operation.",
    ),
    RuleSpec(
        "C04", "tx-origin-auth", "tx.origin used", "coding", "error", "COD-06", ("AU",),
        "Flags every read of tx.origin. Comparisons inside require, assert or a branch condition are errors because "
        "they act as authorization; other uses are warnings. A phishing contract called by the victim passes such checks.",
    ),
    RuleSpec(
        "C05", "unchecked-arithmetic", "Arithmetic that can wrap", "coding", "warning", "COD-10", ("MH", "GC", "REU", "BL"),
        "When the version pragma admits compilers older than 0.8, flags +, -, *, ** and their compound assignments on "
        "integers unless the contract attaches a safe-math library with `using`. On 0.8 and later only arithmetic "
        "inside unchecked blocks is flagged.",
    ),
    RuleSpec(
        "C06", "divide-before-multiply", "Division before multiplication", "coding", "warning", "COD-11", ("MH", "GC", "REU"),
        "Flags a multiplication with a division as an operand. The division truncates first, so precision is lost; "
        "multiply first.",
    ),
    RuleSpec(
        "C07", "missing-input-validation", "Parameters used without validation", "coding", "info", "COD-12", ("GC",),
        "Reports public or external functions with named parameters where no parameter is checked by require, assert, "
        "a reverting if, or a modifier argument before it is otherwise used.",
    ),
    RuleSpec(
        "C08", "unbounded-loop", "Loop bound by growing state", "coding", "warning", "COD-13", ("RL", "BL", "TC", "TE"),
        "Flags loops whose condition reads the length of a dynamic state array or compares against a state variable, "
        "unless the same condition or a preceding require caps the count with a constant.",
    ),
    RuleSpec(
        "C09", "fallback-hygiene", "Fallback does too much", "coding", "warning", "COD-14", ("CEI", "MU", "GC"),
        "Flags fallback and receive functions that declare return values, exceed the statement budget, or make external "
        "calls. A fallback that only emits events without checking msg.data.length == 0 gets an info note.",
    ),
    RuleSpec(
        "C10", "builtin-shadowing", "Built-in name redeclared", "coding", "error", "COD-15", ("GC",),
        "Flags any contract, function, modifier, variable or parameter named after a global such as msg, tx, block, now, "
        "require, assert, revert, selfdestruct, keccak256, blockhash, address or this.",
    ),
    RuleSpec(
        "C11", "address-param-interface", "Address parameter used as a contract", "coding", "info", "COD-16", ("GC",),
        "Reports address parameters that the body casts to a contract type or uses as a low-level call target. Typing "
        "the parameter as the interface lets the compiler check callers.",
    ),
    RuleSpec(
        "C12", "weak-randomness", "Block data used as randomness", "coding", "warning", "COD-17", ("OR", "REU"),
        "Flags block.timestamp, now, blockhash(), block.difficulty and block.number inside keccak256 or sha256 "
        "arguments or under a modulo. Block producers can predict or steer these values.",
    ),
    RuleSpec(
        "C13", "timestamp-dependence", "Branch depends on block time", "coding", "info", "COD-18", ("TC",),
        "Reports block.timestamp or now compared inside a branch or guard condition, and block.number combined with an "
        "integer literal of 2 or more in arithmetic, which usually means block numbers stand in for time.",
    ),
    RuleSpec(
        "T01", "unlocked-pragma", "Compiler version not pinned", "testing", "warning", "TST-02", (),
        "Flags a solidity pragma that admits more than one version (caret, tilde, ranges, inequalities) and files "
        "without any solidity pragma.",
    ),
    RuleSpec(
        "T02", "assert-guard-inventory", "No assert guards", "testing", "info", "TST-03", ("GC",),
        "Counts assert() calls per contract and reports contracts that write state but never assert an invariant.",
    ),
)

RULES: dict[str, RuleSpec] = {r.id: r for r in CATALOG}


def rule(rule_id: str) -> RuleSpec:
    return RULES[rule_id]
