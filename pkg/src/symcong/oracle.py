"""Pluggable oracle for symplectic types that no internal criterion decides.

An oracle pack is a directory containing ``manifest.json``::

    {
      "name": "my-pack",
      "primes": [7],
      "format": "decision-table" | "python",
      "table": "decisions.tsv",      # decision-table format
      "module": "plugin.py"          # python format
    }

A decision table has tab-separated rows ``ainvs1  ainvs2  p  type`` where
``ainvsN`` are comma-separated minimal a-invariants and ``type`` is
``symplectic`` or ``antisymplectic``.  Lookups are symmetric.

A python plug-in must define ``decide(ainvs1, ainvs2, p)`` returning one of
those strings or ``None``.  This is where models of X_E(7) and friends can
be attached; none ship with the package.
"""

from __future__ import annotations

import importlib.util
import json
from pathlib import Path

from .curve import RationalEC, minimal_model
from .twists import Basis, SymplecticType, TypeValue

__all__ = ["OraclePack", "OracleConflict", "load_oracle_pack", "external_oracle_hook"]


class OracleConflict(RuntimeError):
    """The oracle and an internal criterion disagree on a pair."""


class OraclePack:
    def __init__(self, name: str, primes, table=None, decide=None):
        self.name = name
        self.primes = frozenset(primes)
        self._table = table or {}
        self._decide = decide

    def decide(self, E: RationalEC, E2: RationalEC, p: int) -> TypeValue | None:
        if p not in self.primes:
            return None
        k1, k2 = minimal_model(E).ainvs, minimal_model(E2).ainvs
        if self._decide is not None:
            ans = self._decide(k1, k2, p)
        else:
            ans = self._table.get((k1, k2, p)) or self._table.get((k2, k1, p))
        return TypeValue(ans) if ans else None


def _parse_ainvs(s: str) -> tuple[int, ...]:
    return tuple(int(x) for x in s.strip().strip("[]").split(","))


def load_oracle_pack(path) -> OraclePack:
    root = Path(path)
    manifest = json.loads((root / "manifest.json").read_text())
    fmt = manifest.get("format", "decision-table")
    name = manifest.get("name", root.name)
    primes = manifest.get("primes", [7])
    if fmt == "decision-table":
        table = {}
        for n, line in enumerate((root / manifest.get("table", "decisions.tsv")).read_text().splitlines(), 1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise ValueError(f"oracle table line {n}: expected 4 tab-separated fields")
            e1 = minimal_model(RationalEC(*_parse_ainvs(parts[0]))).ainvs
            e2 = minimal_model(RationalEC(*_parse_ainvs(parts[1]))).ainvs
            table[(e1, e2, int(parts[2]))] = TypeValue(parts[3].strip()).value
        return OraclePack(name, primes, table=table)
    if fmt == "python":
        spec = importlib.util.spec_from_file_location(f"symcong_oracle_{name}", root / manifest["module"])
        mod = importlib.util.module_from_spec(spec)
        spec.loader.exec_module(mod)
        return OraclePack(name, primes, decide=mod.decide)
    raise ValueError(f"unknown oracle pack format {fmt!r}")


def external_oracle_hook(E: RationalEC, E2: RationalEC, p: int, pack: OraclePack | None = None, internal: SymplecticType | None = None) -> SymplecticType:
    """Ask the oracle pack; Undetermined without one.

    If ``internal`` carries a decided type from another criterion the two
    must agree, since under condition (S) exactly one type holds.
    """
    if pack is None:
        return SymplecticType(TypeValue.UNDETERMINED, Basis.EXTERNAL_ORACLE, "no oracle pack")
    ans = pack.decide(E, E2, p)
    if ans is None or ans is TypeValue.UNDETERMINED:
        return SymplecticType(TypeValue.UNDETERMINED, Basis.EXTERNAL_ORACLE, f"{pack.name}: no answer")
    out = SymplecticType(ans, Basis.EXTERNAL_ORACLE, pack.name)
    if internal is not None and internal.decided and internal.value is not ans:
        raise OracleConflict(f"oracle {pack.name} says {ans.value}, {internal.basis.value} says {internal.value.value}")
    return out
