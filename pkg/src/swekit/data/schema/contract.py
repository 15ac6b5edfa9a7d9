from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Any

import pandas as pd

from swekit.common.errors import DataError

CONTRACTS_FILE = Path(__file__).with_name("dataset_contracts.json")


@dataclass
class ContractResult:
    ok: bool
    errors: list[str]
    warnings: list[str]

    def summary(self) -> str:
        if self.ok:
            w = f" (warnings={len(self.warnings)})" if self.warnings else ""
            return f"OK{w}"
        return f"FAIL (errors={len(self.errors)}, warnings={len(self.warnings)})"

    def raise_for_errors(self, source: str) -> None:
        if not self.ok:
            raise DataError(f"{source}: " + "; ".join(self.errors))


@lru_cache(maxsize=None)
def load_contracts(path: str | Path = CONTRACTS_FILE) -> dict[str, Any]:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(str(p))
    return json.loads(p.read_text(encoding="utf-8"))


def contract_for(kind: str) -> dict[str, Any]:
    contracts = load_contracts()
    if kind not in contracts:
        raise KeyError(f"no dataset contract named {kind!r}; known: {sorted(contracts)}")
    return contracts[kind]


def _sample_lines(mask: pd.Series, limit: int = 5) -> list[int]:
    """1-based line numbers of offending rows."""
    return [int(i) + 1 for i in mask[mask].index[:limit]]


def _validate_string(df: pd.DataFrame, col: str, spec: dict[str, Any]) -> list[str]:
    errors: list[str] = []
    s = df[col].astype("string")
    if s.isna().any():
        bad = s.isna()
        errors.append(f"{col}: {bad.sum()} missing cells (lines: {_sample_lines(bad)})")
    if not spec.get("allow_empty", False):
        bad = s.fillna("").str.strip().eq("") & s.notna()
        if bad.any():
            errors.append(f"{col}: {bad.sum()} empty values (lines: {_sample_lines(bad)})")

    allowed = spec.get("allowed")
    if allowed is not None:
        vals = s.fillna("")
        bad = ~vals.isin(set(map(str, allowed))) & vals.ne("")
        if bad.any():
            errors.append(
                f"{col}: {bad.sum()} values outside the allowed set (sample: {vals[bad].head(5).tolist()})"
            )
    return errors


def _to_float(v: Any) -> float:
    try:
        return float(str(v).strip())
    except (TypeError, ValueError):
        return float("nan")


def _validate_number(df: pd.DataFrame, col: str, spec: dict[str, Any]) -> list[str]:
    errors: list[str] = []
    n = pd.Series([_to_float(v) for v in df[col]], index=df.index, dtype=float)
    is_na = n.isna()
    if not spec.get("allow_null", False) and is_na.any():
        errors.append(f"{col}: {is_na.sum()} non-numeric values (lines: {_sample_lines(is_na)})")

    finite = ~is_na
    inf = finite & n.abs().eq(float("inf"))
    if inf.any():
        errors.append(f"{col}: {inf.sum()} non-finite values (lines: {_sample_lines(inf)})")
    if spec.get("integer"):
        bad = finite & n.ne(n.round())
        if bad.any():
            errors.append(f"{col}: {bad.sum()} non-integer values (lines: {_sample_lines(bad)})")
    if spec.get("min") is not None:
        bad = finite & n.lt(float(spec["min"]))
        if bad.any():
            errors.append(f"{col}: {bad.sum()} values < {spec['min']} (lines: {_sample_lines(bad)})")
    if spec.get("max") is not None:
        bad = finite & n.gt(float(spec["max"]))
        if bad.any():
            errors.append(f"{col}: {bad.sum()} values > {spec['max']} (lines: {_sample_lines(bad)})")
    return errors


def validate_df_against_contract(df: pd.DataFrame, contract: dict[str, Any]) -> ContractResult:
    errors: list[str] = []
    warnings: list[str] = []

    req: dict[str, Any] = contract.get("required_columns", {}) or {}
    for col, spec in req.items():
        if col not in df.columns:
            errors.append(f"missing required column: {col}")
            continue
        t = str(spec.get("type", "")).lower().strip()
        if t == "string":
            errors.extend(_validate_string(df, col, spec))
        elif t == "number":
            errors.extend(_validate_number(df, col, spec))
        else:
            errors.append(f"{col}: unknown type '{t}' in contract")

    for col in contract.get("unique", []) or []:
        if col in df.columns:
            dup = df[col].duplicated(keep="first")
            if dup.any():
                warnings.append(f"{col}: {dup.sum()} duplicate values, first occurrence wins (lines: {_sample_lines(dup)})")

    min_rows = int(contract.get("min_rows", 0) or 0)
    if len(df) < min_rows:
        errors.append(f"expected at least {min_rows} rows, got {len(df)}")

    return ContractResult(ok=not errors, errors=errors, warnings=warnings)
