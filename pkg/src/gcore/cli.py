"""Command-line frontend: ``gcore eval|marginal|compile|info|check|bench``.

Exit codes: 0 success, 2 input validation, 3 numerical failure, 4 oracle mismatch.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from typing import Sequence

import numpy as np

from gcore import circuitfile
from gcore.circuit import Circuit
from gcore.circuitfile import CircuitFileError
from gcore.corestate import ZeroStateError, new_core
from gcore.density import DensityQuery, DensityResult, NumericalError, evaluate, evaluate_many
from gcore.ipag import Compiled, compile_circuit
from gcore.randomize import random_gaussian

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL, EXIT_MISMATCH = 0, 2, 3, 4


class InputError(ValueError):
    pass


def _fmt(x: float, digits: int) -> str:
    return f"{x:.{digits}g}"


def _round(x: float, digits: int) -> float:
    return float(_fmt(x, digits))


def _outcomes(args) -> list[tuple[complex, ...]]:
    if args.outcomes_file and args.outcome:
        raise InputError("give either an outcome or --outcomes-file, not both")
    if args.outcomes_file:
        out = []
        with open(args.outcomes_file, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                try:
                    out.append(circuitfile.parse_outcome(line))
                except CircuitFileError as err:
                    raise InputError(f"{args.outcomes_file}, line {lineno}: {err}") from None
        if not out:
            raise InputError(f"{args.outcomes_file} contains no outcomes")
        return out
    if not args.outcome:
        raise InputError("missing outcome (e.g. 0.1+0.2i,0-0.3i)")
    return [circuitfile.parse_outcome(args.outcome)]


def _parse_modes(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(k) for k in text.split(","))
    except ValueError:
        raise InputError(f"bad mode list {text!r}; expected e.g. 0,2") from None


def _compiled(c: Circuit) -> Compiled:
    if not c.input.normalized:
        raise InputError(f"input core state is not normalized (norm {c.input.norm:.12g})")
    return compile_circuit(c)


def _queries(c: Circuit, measured, outcomes) -> list[DensityQuery]:
    comp = _compiled(c)
    return [DensityQuery(comp.unitary, comp.core, a, measured) for a in outcomes]


def _report(results: Sequence[DensityResult], times: Sequence[float], args) -> None:
    for r, t in zip(results, times):
        if args.json:
            rec = {
                "density": _round(r.density, args.digits),
                "kappa": _round(r.kappa, args.digits),
                "n_terms": r.n_terms,
                "wall_time_ms": round(t * 1e3, 3),
            }
            print(json.dumps(rec, sort_keys=True))
        else:
            print(_fmt(r.density, args.digits))


def _run_queries(queries: list[DensityQuery], args) -> int:
    t0 = time.perf_counter()
    if len(queries) == 1:
        results = [evaluate(queries[0])]
        times = [time.perf_counter() - t0]
    else:
        results = evaluate_many(queries)
        times = [(time.perf_counter() - t0) / len(queries)] * len(queries)
    _report(results, times, args)
    return EXIT_OK


def cmd_eval(args) -> int:
    c = circuitfile.load(args.circuit)
    return _run_queries(_queries(c, c.measured_modes, _outcomes(args)), args)


def cmd_marginal(args) -> int:
    c = circuitfile.load(args.circuit)
    return _run_queries(_queries(c, _parse_modes(args.modes), _outcomes(args)), args)


def _core_lines(core, digits: int) -> list[str]:
    return [f"  {'|' + ','.join(map(str, p)) + '>'}: {circuitfile.format_complex(a, digits)}" for p, a in core.terms]


def cmd_compile(args) -> int:
    c = circuitfile.load(args.circuit)
    comp = _compiled(c)
    events = c.ladder_events
    n_add = sum(e.kind == "add" for e in events)
    print(f"modes: {c.modes}")
    print(f"ladder events: {len(events)} ({n_add} add, {len(events) - n_add} sub)")
    print(f"discarded norm: {_fmt(comp.norm, args.digits)}")
    print(f"core state (degree {comp.core.degree}, support {comp.core.support_size}):")
    print("\n".join(_core_lines(comp.core, args.digits)))
    G = comp.unitary
    m = c.modes
    A, B = G.S[:m, :m], G.S[:m, m:]
    print("gaussian:")
    print(f"  passive: {bool(np.allclose(B, 0, atol=1e-12))}")
    print(f"  max squeezing |B|: {_fmt(float(np.linalg.norm(B, 2)), 6)}")
    print(f"  displacement: [{', '.join(circuitfile.format_complex(x, 6) for x in G.d)}]")
    if args.emit:
        emitted = Circuit(m, comp.core, tuple(c.gaussian_ops), c.measured_modes)
        with open(args.emit, "w", encoding="utf-8") as fh:
            fh.write(circuitfile.dumps(emitted) + "\n")
        print(f"wrote {args.emit}")
    return EXIT_OK


def _stellar_string(core, digits: int) -> str:
    parts = []
    for p, c in core.terms:
        coeff = c / math.sqrt(math.prod(math.factorial(k) for k in p))
        mono = "*".join(f"z{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(p) if k)
        parts.append(f"({circuitfile.format_complex(coeff, digits)})" + (f"*{mono}" if mono else ""))
    return " + ".join(parts)


def cmd_info(args) -> int:
    c = circuitfile.load(args.circuit)
    C = c.input
    print(f"modes: {c.modes}")
    print(f"input degree: {C.degree}")
    print(f"input support: {C.support_size}")
    print(f"input stellar function: {_stellar_string(C, 6)}")
    print(f"gates: {len(c.gaussian_ops)}; ladder events: {len(c.ladder_events)}")
    if c.ladder_events:
        comp = _compiled(c)
        C = comp.core
        print(f"compiled core degree: {C.degree}")
        print(f"compiled core support: {C.support_size}")
    s, n = C.support_size, C.degree
    print(f"stellar rank bound: {n}")
    print(f"density terms (s^2): {s * s}; largest loop hafnian size: {2 * n}")
    if c.measured_modes is not None:
        print(f"measured modes: {list(c.measured_modes)}")
    return EXIT_OK


def cmd_check(args) -> int:
    # Imported here so the main evaluation paths never load the oracle.
    from gcore.oracle import OracleConfig, oracle_density

    c = circuitfile.load(args.circuit)
    config = OracleConfig(cutoff=args.cutoff)
    measured = c.measured_modes
    if args.modes:
        measured = _parse_modes(args.modes)
    worst = 0.0
    for alpha in _outcomes(args):
        q = _queries(c, measured, [alpha])[0]
        fast = evaluate(q).density
        ref = oracle_density(c, alpha, config, measured=q.measured_modes)
        delta = abs(fast - ref.density)
        worst = max(worst, delta)
        status = "PASS" if delta <= args.tol else "FAIL"
        print(
            f"{status} alpha=[{','.join(circuitfile.format_complex(a, 6) for a in alpha)}] "
            f"density={_fmt(fast, args.digits)} oracle={_fmt(ref.density, args.digits)} "
            f"|delta|={delta:.3e} leakage={ref.leakage:.1e} cutoff={args.cutoff}"
        )
    return EXIT_OK if worst <= args.tol else EXIT_MISMATCH


def bench_case(n: int, s: int, rng: np.random.Generator, m: int = 2):
    """Random ``m``-mode unitary and an ``s``-term core whose every term has degree ``n``."""
    G = random_gaussian(m, rng)
    occs = set()
    while len(occs) < s:
        cut = sorted(rng.integers(0, n + 1, size=m - 1))
        occs.add(tuple(int(x) for x in np.diff([0, *cut, n])))
        if len(occs) >= math.comb(n + m - 1, m - 1):
            break
    amps = rng.normal(size=len(occs)) + 1j * rng.normal(size=len(occs))
    C = new_core(zip(sorted(occs), amps))
    return G, C


def _parse_range(text: str) -> list[int]:
    try:
        if ":" in text:
            lo, hi = (int(x) for x in text.split(":"))
            return list(range(lo, hi + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"bad size range {text!r}; expected lo:hi or a,b,c") from None


def time_density(G, C, alpha, repeats: int) -> float:
    best = math.inf
    q = DensityQuery(G, C, alpha)
    for _ in range(repeats):
        t0 = time.perf_counter()
        evaluate(q)
        best = min(best, time.perf_counter() - t0)
    return best


def cmd_bench(args) -> int:
    sizes = _parse_range(args.sizes)
    if any(n < 0 for n in sizes) or args.support < 1:
        raise InputError("sizes must be >= 0 and support >= 1")
    rng = np.random.default_rng(args.seed)
    rows = []
    print(f"{'n':>4} {'s':>3} {'terms':>6} {'time_ms':>12} {'ratio':>7}")
    prev = None
    for n in sizes:
        G, C = bench_case(n, args.support, rng)
        t = time_density(G, C, 0.3 * np.ones(G.modes), args.repeats)
        ratio = t / prev if prev else float("nan")
        s = C.support_size
        rows.append({"n": n, "s": s, "n_terms": s * s, "time_ms": t * 1e3, "ratio": ratio})
        print(f"{n:>4} {s:>3} {s * s:>6} {t * 1e3:>12.4f} {ratio:>7.3f}")
        prev = t
    ratios = [r["ratio"] for r in rows[1:]]
    if ratios:
        print(f"mean per-step ratio: {np.mean(ratios):.3f}")
    if args.json:
        print(json.dumps(rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gcore", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, outcome=True):
        sp.add_argument("circuit", help="circuit file (JSON)")
        if outcome:
            sp.add_argument("outcome", nargs="?", help="comma-separated a+bi literals, one per measured mode")
            sp.add_argument("--outcomes-file", help="file with one outcome per line")
        sp.add_argument("--digits", type=int, default=12, help="significant digits (default 12)")
        sp.add_argument("--json", action="store_true", help="structured output")

    sp = sub.add_parser("eval", help="density of a heterodyne outcome")
    common(sp)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("marginal", help="density on a subset of modes")
    common(sp)
    sp.add_argument("--modes", required=True, help="measured modes, e.g. 0,2")
    sp.set_defaults(func=cmd_marginal)

    sp = sub.add_parser("compile", help="reduce add/sub events to a core state")
    common(sp, outcome=False)
    sp.add_argument("--emit", help="write the compiled circuit file here")
    sp.set_defaults(func=cmd_compile)

    sp = sub.add_parser("info", help="core-state metadata")
    common(sp, outcome=False)
    sp.set_defaults(func=cmd_info)

    sp = sub.add_parser("check", help="compare against the truncated Fock simulator")
    common(sp)
    sp.add_argument("--cutoff", type=int, default=25)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--modes", help="measured modes (default: file or all)")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("bench", help="time the density kernel against degree")
    sp.add_argument("--sizes", default="10:14", help="degree range lo:hi or list a,b,c")
    sp.add_argument("--support", type=int, default=1)
    sp.add_argument("--repeats", type=int, default=3)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    # unknown tokens cover outcomes given after options or starting with '-'
    args, extra = parser.parse_known_args(argv)
    if extra:
        if getattr(args, "outcome", "unset") is None and len(extra) == 1:
            args.outcome = extra[0]
        else:
            parser.error(f"unrecognized arguments: {' '.join(extra)}")
    try:
        return args.func(args)
    except (NumericalError, ZeroStateError, np.linalg.LinAlgError, FloatingPointError) as err:
        print(f"error: numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (CircuitFileError, InputError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
