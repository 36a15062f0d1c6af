"""Multi-prime scans: exponential points on a variety, membership, relations.

Config file format::

    # comments start with '#'
    primes = first 25            # or "3..97", "2, 3, 5", or empty
    samples = (p, 2*p); (p^2, 0) # expressions in p (and pi when ram > 1)
    random_samples = 0           # extra seeded random samples per prime
    valuation_range = 1..3       # valuations of random coordinates
    ram = 1
    prec = 20                    # absolute precision for membership
    digits = 25                  # N for relation finding
    bound = 10                   # height bound B
    seed = 0
    variety = other.var          # optional; otherwise the text after '---'
    ---
    n=2; X2 - 2*X1; Y2 - Y1^2

The report is a JSON object; primes are processed independently and the
report is assembled in increasing prime order, so output bytes do not depend
on thread scheduling.
"""

import csv
import io
import json
import platform
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from . import __version__
from .errors import ExpFieldError, ParseError
from .explog import in_exp_domain
from .expr import evaluate, parse_expression
from .padic import PadicNumber, check_prime, first_primes, from_rational, is_prime, uniformizer
from .relations import find_relation
from .variety import MemberToPrecision, NonMember, exp_point_membership, parse_variety

_INT_KEYS = {"random_samples", "ram", "prec", "digits", "bound", "seed"}
_KEYS = _INT_KEYS | {"primes", "samples", "valuation_range", "variety"}


@dataclass
class ScanConfig:
    variety_text: str
    primes: List[int] = field(default_factory=list)
    samples: List[str] = field(default_factory=list)
    random_samples: int = 0
    valuation_range: tuple = (1, 3)
    ram: int = 1
    prec: int = 20
    digits: int = 25
    bound: int = 10
    seed: int = 0
    variety_path: Optional[str] = None

    def echo(self):
        out = asdict(self)
        out["valuation_range"] = list(self.valuation_range)
        return out


def parse_primes(text, line=None):
    text = text.strip()
    if not text:
        return []
    try:
        if text.startswith("first"):
            return first_primes(int(text[len("first"):]))
        if ".." in text:
            lo, hi = (int(t) for t in text.split(".."))
            return [p for p in range(lo, hi + 1) if is_prime(p)]
        primes = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ParseError(f"bad prime list {text!r}", line, 1) from exc
    for p in primes:
        if not is_prime(p):
            raise ParseError(f"{p} is not prime", line, 1)
    return sorted(set(primes))


def _split_top_level(text, sep=";"):
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def parse_scan_config(text, base_dir=None):
    """Parse a scan config (key = value header, '---', variety text)."""
    lines = text.split("\n")
    values = {}
    body_start = None
    for i, raw in enumerate(lines):
        line = raw.split("#", 1)[0].strip()
        if line == "---":
            body_start = i + 1
            break
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value' or '---'", i + 1, 1)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ParseError(f"unknown key {key!r}", i + 1, 1)
        values[key] = (value, i + 1)
    body = ""
    if body_start is not None:
        # keep line numbers of the variety text aligned with the file
        body = "\n" * body_start + "\n".join(lines[body_start:])
    cfg = ScanConfig(variety_text=body)
    for key, (value, lineno) in values.items():
        if key in _INT_KEYS:
            try:
                setattr(cfg, key, int(value))
            except ValueError as exc:
                raise ParseError(f"{key} must be an integer", lineno, 1) from exc
        elif key == "primes":
            cfg.primes = parse_primes(value, lineno)
        elif key == "samples":
            cfg.samples = _split_top_level(value)
        elif key == "valuation_range":
            try:
                lo, hi = (int(t) for t in value.split(".."))
            except ValueError as exc:
                raise ParseError("valuation_range must look like 1..3", lineno, 1) from exc
            cfg.valuation_range = (lo, hi)
        elif key == "variety":
            path = Path(value)
            if base_dir is not None and not path.is_absolute():
                path = Path(base_dir) / path
            cfg.variety_path = value
            cfg.variety_text = path.read_text(encoding="utf-8")
    if not cfg.variety_text.strip():
        raise ParseError("no variety given (use 'variety = FILE' or text after '---')")
    if cfg.ram < 1:
        raise ParseError("ram must be positive")
    parse_variety(cfg.variety_text)
    return cfg


def sample_points(cfg, p, n):
    """Explicit samples evaluated at p, then seeded random samples."""
    r = max(cfg.prec, cfg.digits) + 1
    names = {"p": from_rational(p, p, r, cfg.ram)}
    if cfg.ram > 1:
        names["pi"] = uniformizer(p, cfg.ram, r)
    out = []
    for text in cfg.samples:
        node = parse_expression(text)
        items = node[1] if node[0] == "tuple" else [node]
        values = []
        for node in items:
            v = evaluate(node, names)
            if not isinstance(v, PadicNumber):
                v = from_rational(v, p, r, cfg.ram)
            values.append(v)
        if len(values) != n:
            raise ParseError(f"sample {text!r} has {len(values)} coordinates, expected {n}")
        out.append((text, values))
    rng = random.Random(f"{cfg.seed}:{p}")
    lo, hi = cfg.valuation_range
    for _ in range(cfg.random_samples):
        coords = []
        for _ in range(n):
            v = rng.randint(lo, hi)
            u = rng.randrange(1, p**r)
            while u % p == 0:
                u = rng.randrange(1, p**r)
            coords.append(from_rational(Fraction(u) * Fraction(p) ** v, p, r, cfg.ram))
        label = "(" + ", ".join(str(c) for c in coords) + ")"
        out.append((label, coords))
    return out


def _scan_prime(cfg, V, p):
    records = []
    try:
        samples = sample_points(cfg, p, V.n)
    except (ExpFieldError, ValueError) as exc:
        return {"p": p, "error": str(exc), "samples": []}
    for label, xbar in samples:
        rec = {"sample": label}
        bad = [i for i, x in enumerate(xbar) if not in_exp_domain(x)]
        if bad:
            rec["status"] = "skipped"
            rec["reason"] = f"coordinate {bad[0] + 1} has valuation {xbar[bad[0]].valuation}, not > 1/{p - 1}"
            records.append(rec)
            continue
        try:
            verdict = exp_point_membership(V, xbar, cfg.prec)
            if isinstance(verdict, MemberToPrecision):
                rec["status"] = "member"
                rec["precision"] = str(verdict.precision)
                rel = find_relation(xbar, cfg.digits, cfg.bound)
                if rel:
                    rec["relation"] = list(rel.m)
                    rec["certified_precision"] = str(rel.certified_precision)
                else:
                    rec["relation"] = None
            elif isinstance(verdict, NonMember):
                rec["status"] = "nonmember"
                rec["polynomial"] = verdict.index
                rec["valuation"] = str(verdict.valuation)
            else:
                rec["status"] = "undecided"
                rec["reason"] = verdict.reason
        except (ExpFieldError, ValueError, ArithmeticError) as exc:
            rec["status"] = "error"
            rec["reason"] = f"{type(exc).__name__}: {exc}"
        records.append(rec)
    return {"p": p, "samples": records}


def cmd_scan(cfg, threads=1):
    """Run a scan and return the report as a plain dict."""
    V = parse_variety(cfg.variety_text)
    for p in cfg.primes:
        check_prime(p)
    primes = sorted(set(cfg.primes))
    if threads > 1 and len(primes) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_prime = list(pool.map(lambda p: _scan_prime(cfg, V, p), primes))
    else:
        per_prime = [_scan_prime(cfg, V, p) for p in primes]
    relations = set()
    exceptional = []
    for entry in per_prime:
        for rec in entry["samples"]:
            if rec.get("status") != "member":
                continue
            if rec.get("relation") is None:
                if entry["p"] not in exceptional:
                    exceptional.append(entry["p"])
            else:
                relations.add(tuple(rec["relation"]))
    return {
        "config": cfg.echo(),
        "variety": str(V),
        "declared_dimension": V.declared_dimension,
        "seed": cfg.seed,
        "versions": {"expfield": __version__, "python": platform.python_version()},
        "primes": per_prime,
        "relations": [list(m) for m in sorted(relations)],
        "exceptional_primes": {
            "candidates": exceptional,
            "note": f"member points with no relation of height <= {cfg.bound} at {cfg.digits} digits",
        },
    }


def report_json(report):
    return json.dumps(report, indent=2) + "\n"


def report_csv(report):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "sample", "status", "detail", "relation"])
    for entry in report["primes"]:
        for rec in entry["samples"]:
            status = rec["status"]
            if status == "member":
                detail = rec["precision"]
            elif status == "nonmember":
                detail = f"{rec['polynomial']}:{rec['valuation']}"
            else:
                detail = rec.get("reason", "")
            rel = rec.get("relation")
            w.writerow([entry["p"], rec["sample"], status, detail, "" if rel is None else " ".join(map(str, rel))])
    return buf.getvalue()
