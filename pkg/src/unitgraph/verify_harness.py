"""Per-n verification reports and range sweeps.

Every closed-form prediction for G(Z_n) and its incidence codes is paired
with a measured value and a verdict:

    match           prediction holds
    mismatch        both sides present and they disagree
    unverified      the measurement needed more than the distance budget
    not-applicable  the claim makes no prediction for this n
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .incidence_codes import UNDEFINED, UNKNOWN, LinearCode, code_from_incidence, default_budget, dual_code
from .ring_core import RingSpec, crt_decompose, crt_map, euler_phi, factorize, is_prime, ring_of
from .unit_graph import (
    DEFAULT_VERTEX_BUDGET,
    GraphInvariants,
    analyze_graph,
    build_unit_graph,
    diameter,
    expected_edge_count,
    is_connected,
)

MATCH = "match"
MISMATCH = "mismatch"
UNVERIFIED = "unverified"
NOT_APPLICABLE = "not-applicable"

DEFAULT_Q = 3

CSV_COLUMNS = [
    "n", "factorization", "q", "vertices", "edges", "connected", "diameter", "girth",
    "bipartite", "min_degree", "edge_connectivity", "code_len", "code_dim", "code_d",
    "dual_dim", "dual_d", "verdict_conj1", "verdict_conj2", "verdict_thm_edges",
    "verdict_thm_lambda", "verdict_dual_d",
]


def compare(predicted, measured) -> str:
    if predicted is None:
        return NOT_APPLICABLE
    if measured == UNKNOWN:
        return UNVERIFIED
    return MATCH if predicted == measured else MISMATCH


def combine(verdicts) -> str:
    """Fold field verdicts into one: any mismatch wins, then unverified."""
    vs = [v for v in verdicts if v != NOT_APPLICABLE]
    if not vs:
        return NOT_APPLICABLE
    if MISMATCH in vs:
        return MISMATCH
    if UNVERIFIED in vs:
        return UNVERIFIED
    return MATCH


def factor_string(n: int) -> str:
    if n == 1:
        return "1"
    return "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in factorize(n))


def _odd_part(n: int) -> tuple[int, int, int]:
    """(m, P, Phi): n = 2^m * P with P odd and Phi = phi(P)."""
    m = 0
    while n % 2 == 0:
        n //= 2
        m += 1
    return m, n, euler_phi(n)


def predicted_lambda(n: int) -> int | None:
    """Edge connectivity (and minimum degree) the structure theorems assign to G(Z_n)."""
    if n < 2:
        return None
    m, P, Phi = _odd_part(n)
    if m == 0:
        return Phi - 1
    return 2 ** (m - 1) * Phi


def predicted_code(n: int) -> list[int] | None:
    """[length, k, d] of the incidence code from the odd / power-of-two theorems."""
    if n < 2:
        return None
    m, P, Phi = _odd_part(n)
    if m == 0:
        return [(P - 1) * Phi // 2, P - 1, Phi - 1]
    return [P * Phi * 4 ** (m - 1), 2**m * P - 1, 2 ** (m - 1) * Phi]


def predicted_dual(n: int) -> list[int] | None:
    if n < 2:
        return None
    m, P, Phi = _odd_part(n)
    if m == 0:
        return [(P - 1) * Phi // 2, (P - 1) * (Phi - 2) // 2, 3]
    # 2^m P (Phi 2^(m-2) - 1) + 1, kept integral for m = 1
    dim = P * Phi * 4 ** (m - 1) - 2**m * P + 1
    return [P * Phi * 4 ** (m - 1), dim, 4]


def conjecture2_code(n: int) -> list[int] | None:
    if n < 2:
        return None
    phi = euler_phi(n)
    if n % 2:
        return [(n - 1) * phi // 2, n - 1, phi - 1]
    return [n * phi // 2, n - 1, phi]


def code_field(n: int, q: int) -> int:
    """Field of the incidence code examined for n: binary for odd n, q for even n."""
    return 2 if n % 2 else q


def _check_q(q: int) -> None:
    if q % 2 == 0 or not is_prime(q):
        raise DomainError(f"q must be an odd prime, got {q}")


@dataclass
class VerificationReport:
    n: int
    factorization: list[int]
    q: int | None
    graph: GraphInvariants
    predicted: dict
    measured: dict
    verdicts: dict
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "factorization": list(self.factorization),
            "q": self.q,
            "graph": self.graph.to_dict(),
            "predicted": _encode(self.predicted),
            "measured": _encode(self.measured),
            "verdicts": dict(self.verdicts),
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, d: dict) -> VerificationReport:
        return cls(
            n=d["n"],
            factorization=list(d["factorization"]),
            q=d["q"],
            graph=GraphInvariants.from_dict(d["graph"]),
            predicted=_decode(d["predicted"]),
            measured=_decode(d["measured"]),
            verdicts=dict(d["verdicts"]),
            notes=list(d["notes"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_text(self) -> str:
        head = [
            f"n = {self.n} ({factor_string(self.n)}), ring {' + '.join(f'Z_{m}' for m in self.factorization)}",
            f"code field q = {self.q if self.q is not None else '-'}",
            "",
            "graph: " + ", ".join(f"{k}={_fmt(v)}" for k, v in self.graph.to_dict().items()),
            "",
        ]
        rows = [("claim", "predicted", "measured", "verdict")]
        for key in sorted(self.verdicts):
            pred, meas = self.claim_values(key)
            rows.append((key, _fmt(pred), _fmt(meas), self.verdicts[key]))
        widths = [max(len(r[i]) for r in rows) for i in range(4)]
        lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
        lines.insert(1, "  ".join("-" * w for w in widths))
        tail = [""] + [f"note: {s}" for s in self.notes] if self.notes else []
        return "\n".join(head + lines + tail) + "\n"

    def claim_values(self, key: str) -> tuple:
        """(predicted, measured) behind a verdict key such as ``edges`` or ``dual_d``."""
        prefix, _, part = key.partition("_")
        if prefix in ("code", "dual") and part in ("len", "dim", "d"):
            i = ("len", "dim", "d").index(part)
            pred, meas = self.predicted.get(prefix), self.measured.get(prefix)
            return (pred[i] if pred else None), (meas[i] if meas else None)
        return self.predicted.get(key), self.measured.get(key)

    def csv_row(self) -> dict:
        g, m = self.graph, self.measured
        code = m.get("code") or ["", "", ""]
        dual = m.get("dual") or ["", "", ""]
        return {
            "n": self.n,
            "factorization": factor_string(self.n),
            "q": "" if self.q is None else self.q,
            "vertices": self.n,
            "edges": g.edge_count,
            "connected": str(g.connected).lower(),
            "diameter": _fmt(g.diameter),
            "girth": _fmt(g.girth),
            "bipartite": str(g.bipartite).lower(),
            "min_degree": g.min_degree,
            "edge_connectivity": g.edge_connectivity,
            "code_len": code[0],
            "code_dim": code[1],
            "code_d": code[2],
            "dual_dim": dual[1],
            "dual_d": dual[2],
            "verdict_conj1": self.verdicts["conj1"],
            "verdict_conj2": self.verdicts["conj2"],
            "verdict_thm_edges": self.verdicts["edges"],
            "verdict_thm_lambda": self.verdicts["edge_connectivity"],
            "verdict_dual_d": self.verdicts["dual_d"],
        }

    @property
    def has_mismatch(self) -> bool:
        return MISMATCH in self.verdicts.values()


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, list):
        return "[" + ", ".join(str(x) for x in v) + "]"
    return str(v)


def _encode(d: dict) -> dict:
    return {k: ("inf" if isinstance(v, float) and math.isinf(v) else v) for k, v in d.items()}


def _decode(d: dict) -> dict:
    return {k: (math.inf if v == "inf" else v) for k, v in d.items()}


def build_report(
    n: int,
    q: int = DEFAULT_Q,
    distance_budget: int | None = None,
    vertex_budget: int = DEFAULT_VERTEX_BUDGET,
) -> VerificationReport:
    """Measure everything about G(Z_n) and its incidence codes and judge each claim."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    _check_q(q)
    budget = default_budget() if distance_budget is None else distance_budget
    spec = ring_of(n)
    g = build_unit_graph(spec, vertex_budget)
    inv = analyze_graph(g)
    notes = []

    predicted = {
        "edges": expected_edge_count(spec),
        "connected": True,
        # 2 is a unit exactly when n is odd (Z_1 counts: there 2 = 0 = 1)
        "diameter": 3 if n % 2 == 0 else 2,
        "bipartite": True if n % 2 == 0 else None,
        "edge_connectivity": predicted_lambda(n),
        "min_degree": predicted_lambda(n),
        "conj2": conjecture2_code(n),
        "code": predicted_code(n),
        "dual": predicted_dual(n),
        "dual_d_vs_girth": None,
    }
    measured = {
        "edges": inv.edge_count,
        "connected": inv.connected,
        "diameter": inv.diameter,
        "bipartite": inv.bipartite,
        "edge_connectivity": inv.edge_connectivity,
        "min_degree": inv.min_degree,
        "girth": inv.girth,
    }
    verdicts = {
        "edges": compare(predicted["edges"], measured["edges"]),
        "connected": compare(True, inv.connected),
        "diameter": MATCH if inv.diameter <= predicted["diameter"] else MISMATCH,
        "bipartite": compare(predicted["bipartite"], inv.bipartite),
        "edge_connectivity": compare(predicted["edge_connectivity"], inv.edge_connectivity),
        "min_degree": compare(predicted["min_degree"], inv.min_degree),
    }
    verdicts["conj1"] = combine([verdicts["connected"], verdicts["diameter"]])

    code_q = None
    if n == 1:
        notes.append("Z_1 is treated as the zero ring; code claims do not apply")
        for key in ("code", "dual", "conj2", "dual_d_vs_girth"):
            measured[key] = None
        for key in ("code_len", "code_dim", "code_d", "dual_len", "dual_dim", "dual_d",
                    "conj2", "dual_d_vs_girth"):
            verdicts[key] = NOT_APPLICABLE
    else:
        code_q = code_field(n, q)
        code = code_from_incidence(g, code_q, budget)
        dual = dual_code(code, budget)
        measured["code"] = code.params.triple()
        measured["dual"] = dual.params.triple()
        measured["conj2"] = measured["code"]
        for prefix, pred, meas in (("code", predicted["code"], code), ("dual", predicted["dual"], dual)):
            for i, name in enumerate(("len", "dim", "d")):
                verdicts[f"{prefix}_{name}"] = compare(pred[i], meas.params.triple()[i])
        verdicts["conj2"] = combine(
            compare(p, m) for p, m in zip(predicted["conj2"], measured["code"])
        )
        verdicts["dual_d_vs_girth"] = _dual_vs_girth(dual, inv.girth)
        predicted["dual_d_vs_girth"] = inv.girth
        measured["dual_d_vs_girth"] = dual.d
        notes.extend(_code_notes(code, dual, budget))

    for key in ("code", "dual"):
        verdicts[key] = combine(verdicts[f"{key}_{f}"] for f in ("len", "dim", "d"))
    # per-field predictions are reported through the triples
    return VerificationReport(
        n=n,
        factorization=list(spec.moduli),
        q=code_q,
        graph=inv,
        predicted=predicted,
        measured=measured,
        verdicts=dict(sorted(verdicts.items())),
        notes=notes,
    )


def _dual_vs_girth(dual: LinearCode, girth: float) -> str:
    if dual.d == UNDEFINED or math.isinf(girth):
        return NOT_APPLICABLE
    if dual.d == UNKNOWN:
        return UNVERIFIED
    return MATCH if dual.d == girth else MISMATCH


def _code_notes(code: LinearCode, dual: LinearCode, budget: int) -> list[str]:
    notes = []
    if code.d == UNKNOWN:
        notes.append(f"code distance not enumerated: {code.q}^{code.k} codewords exceed budget {budget}")
    if dual.d == UNKNOWN:
        notes.append(f"dual distance search exceeded budget {budget}")
    if dual.d == UNDEFINED:
        notes.append("dual code is zero-dimensional; its minimum distance is undefined")
    if dual.d_method == "dependency":
        notes.append("dual distance found by exhaustive search for dependent parity-check columns")
    return notes


def verify_conjecture1(n: int, vertex_budget: int = DEFAULT_VERTEX_BUDGET) -> dict:
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    inv = analyze_connectivity(n, vertex_budget)
    bound = 3 if n % 2 == 0 else 2
    ok = inv["connected"] and inv["diameter"] <= bound
    return {
        "n": n,
        "connected": inv["connected"],
        "bound": bound,
        "actual": inv["diameter"],
        "verdict": MATCH if ok else MISMATCH,
    }


def analyze_connectivity(n: int, vertex_budget: int = DEFAULT_VERTEX_BUDGET) -> dict:
    g = build_unit_graph(ring_of(n), vertex_budget)
    return {"connected": is_connected(g), "diameter": diameter(g)}


def verify_conjecture2(n: int, q: int = DEFAULT_Q, distance_budget: int | None = None) -> dict:
    if n < 2:
        raise DomainError(f"code parameters are checked for n >= 2, got {n}")
    rep = build_report(n, q, distance_budget)
    return {
        "n": n,
        "q": rep.q,
        "predicted": rep.predicted["conj2"],
        "measured": rep.measured["code"],
        "verdict": rep.verdicts["conj2"],
    }


def verify_code_theorems(n: int, q: int = DEFAULT_Q, distance_budget: int | None = None) -> dict:
    if n < 2:
        return {"n": n, "hypothesis": None, "verdict": NOT_APPLICABLE}
    rep = build_report(n, q, distance_budget)
    return {
        "n": n,
        "q": rep.q,
        "hypothesis": "odd prime powers" if n % 2 else "odd prime powers with a power of two",
        "code_predicted": rep.predicted["code"],
        "code_measured": rep.measured["code"],
        "dual_predicted": rep.predicted["dual"],
        "dual_measured": rep.measured["dual"],
        "code_verdict": rep.verdicts["code"],
        "dual_verdict": rep.verdicts["dual"],
        "dual_d_verdict": rep.verdicts["dual_d"],
        "verdict": combine([rep.verdicts["code"], rep.verdicts["dual"]]),
    }


def crt_isomorphism_check(n: int, vertex_budget: int = DEFAULT_VERTEX_BUDGET) -> bool:
    """crt_map is a bijection Z_n -> direct sum that preserves adjacency both ways."""
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    target = crt_decompose(n)
    perm = np.array([target.index_of(crt_map(x, n)) for x in range(n)])
    if not np.array_equal(np.sort(perm), np.arange(n)):
        return False
    a = build_unit_graph(RingSpec([n]), vertex_budget).adjacency_matrix.toarray()
    b = build_unit_graph(target, vertex_budget).adjacency_matrix.toarray()
    return bool(np.array_equal(a, b[np.ix_(perm, perm)]))


def report(n: int, q: int = DEFAULT_Q, format: str = "json", distance_budget: int | None = None) -> str:
    if format not in ("json", "text"):
        raise DomainError(f"unknown format {format!r}; use json or text")
    rep = build_report(n, q, distance_budget)
    return rep.to_json() if format == "json" else rep.to_text()


def _sweep_one(args: tuple[int, int, int | None]) -> VerificationReport:
    n, q, budget = args
    return build_report(n, q, budget)


def sweep_reports(start: int, stop: int, q: int = DEFAULT_Q, distance_budget: int | None = None,
                  jobs: int = 1) -> list[VerificationReport]:
    """Reports for start..stop inclusive, in ascending n whatever the worker count."""
    if start < 1 or start > stop:
        raise DomainError(f"bad range {start}..{stop}")
    _check_q(q)
    budget = default_budget() if distance_budget is None else distance_budget
    tasks = [(n, q, budget) for n in range(start, stop + 1)]
    if jobs <= 1:
        return [_sweep_one(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_sweep_one, tasks))


def sweep_csv(reports: list[VerificationReport]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for rep in reports:
        writer.writerow(rep.csv_row())
    return buf.getvalue()


def sweep(start: int, stop: int, q: int = DEFAULT_Q, out=None, distance_budget: int | None = None,
          jobs: int = 1) -> int:
    """Write the sweep CSV to `out` and return the exit status (1 iff any mismatch)."""
    reports = sweep_reports(start, stop, q, distance_budget, jobs)
    text = sweep_csv(reports)
    if out is not None:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    return 1 if any(r.has_mismatch for r in reports) else 0
