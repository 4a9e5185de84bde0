"""Command-line interface.

Subcommands mirror the library surface: closed forms (pspace, curve,
segre), Frobenius-level estimation (estimate, ehk, dim1) and the gate
that confronts the two (compare).  Results print as JSON on stdout and
optionally to --json; --csv writes grid samples of the density for
plotting.  Failures print {"error": {...}} on stderr and exit nonzero.
Reruns with equal arguments produce byte-identical output.

Environment: HKD_THREADS caps the colength worker pool (default: all
cores); HKD_KERNEL picks the counting backend (numba or numpy).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import closedform, density, rings
from .piecewise import (
    PiecewisePoly,
    as_fraction,
    fraction_to_decimal_str,
    fraction_to_str,
)


def _print_json(payload: dict, path: str | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    sys.stdout.write(text)
    if path:
        Path(path).write_text(text)


def _write_csv(f: PiecewisePoly, grid: int, path: str) -> None:
    """Sample f on the grid j/grid across its support hull, one row per point."""
    lines = ["x_rational,f_rational,f_decimal20"]
    sup = f.support()
    if sup is not None:
        j0 = math.ceil(sup[0] * grid)
        j1 = math.floor(sup[1] * grid)
        for j in range(j0, j1 + 1):
            x = Fraction(j, grid)
            v = f(x)
            lines.append(
                f"{fraction_to_str(x)},{fraction_to_str(v)},{fraction_to_decimal_str(v)}"
            )
    Path(path).write_text("\n".join(lines) + "\n")


def _load_ring(path: str) -> rings.RingSpec:
    return rings.ring_from_json(json.loads(Path(path).read_text()))


def _load_ideal(ring: rings.RingSpec, path: str | None) -> rings.IdealSpec:
    if path is None:
        return rings.maximal_ideal(ring)
    return rings.ideal_from_json(ring, json.loads(Path(path).read_text()))


def _parse_strata(text: str) -> list[tuple[int, Fraction]]:
    raw = json.loads(text)
    return [(int(r), as_fraction(str(a))) for r, a in raw]


def _emit_hk(hk: closedform.HKDensity, args) -> int:
    _print_json(hk.to_json(), args.json)
    if args.csv:
        _write_csv(hk.density, args.grid, args.csv)
    return 0


def _cmd_pspace(args) -> int:
    return _emit_hk(closedform.projective_space_density(args.d), args)


def _cmd_curve(args) -> int:
    hn = closedform.curve_hn(
        args.d, _parse_strata(args.strata), check_degree_sum=args.check_degree_sum
    )
    return _emit_hk(closedform.curve_density(hn), args)


def _factor_pair(
    spec: dict, cutoff: Fraction
) -> tuple[PiecewisePoly, PiecewisePoly]:
    if "pspace" in spec:
        d = int(spec["pspace"])
        f = closedform.projective_space_density(d).density
        return closedform.hilbert_samuel_density(1, d + 1, cutoff), f
    if "curve" in spec:
        hn = closedform.curve_hn(spec["curve"]["d"], spec["curve"]["strata"])
        f = closedform.curve_density(hn).density
        return closedform.hilbert_samuel_density(hn.degree, 2, cutoff), f
    if "piecewise" in spec:
        return (
            PiecewisePoly.from_json(spec["piecewise"]["F"]),
            PiecewisePoly.from_json(spec["piecewise"]["f"]),
        )
    raise ValueError(f"unknown factor spec: {sorted(spec)}")


def _factor_support_end(spec: dict) -> Fraction:
    if "pspace" in spec:
        return Fraction(int(spec["pspace"]) + 1)
    if "curve" in spec:
        hn = closedform.curve_hn(spec["curve"]["d"], spec["curve"]["strata"])
        return 1 - hn.strata[-1][1] / hn.degree
    if "piecewise" in spec:
        sup = PiecewisePoly.from_json(spec["piecewise"]["f"]).support()
        return sup[1] if sup else Fraction(0)
    raise ValueError(f"unknown factor spec: {sorted(spec)}")


def _cmd_segre(args) -> int:
    specs = json.loads(args.factors)
    if not isinstance(specs, list) or not specs:
        raise ValueError("--factors must be a non-empty JSON list")
    cutoff = max(_factor_support_end(s) for s in specs)
    pairs = [_factor_pair(s, cutoff) for s in specs]
    return _emit_hk(closedform.segre_combine(pairs), args)


def _cmd_estimate(args) -> int:
    ring = _load_ring(args.ring)
    ideal = _load_ideal(ring, args.ideal)
    report = density.estimate_density(
        ring, ideal, args.p, args.n_max, as_fraction(args.tol), args.grid
    )
    _print_json(density.report_to_json(report), args.json)
    if args.csv:
        _write_csv(report.density, args.grid, args.csv)
    return 0


def _cmd_ehk(args) -> int:
    ring = _load_ring(args.ring)
    ideal = _load_ideal(ring, args.ideal)
    values = [
        [str(n), fraction_to_str(density.riemann_multiplicity(ring, ideal, args.p, n))]
        for n in range(args.n_max + 1)
    ]
    _print_json({"p": args.p, "ehk_riemann": values}, args.json)
    return 0


def _cmd_dim1(args) -> int:
    ring = _load_ring(args.ring)
    ideal = _load_ideal(ring, args.ideal)
    result = density.dim1_density(ring, ideal, args.p)
    payload = {
        "density": result.density.to_json(),
        "ehk": fraction_to_str(result.multiplicity),
        "level": result.level,
    }
    _print_json(payload, args.json)
    if args.csv:
        _write_csv(result.density, args.grid, args.csv)
    return 0


def _closed_form_for(ring: rings.RingSpec, strata: str | None) -> closedform.HKDensity:
    """The closed-form density the compare gate holds estimates against."""
    if isinstance(ring, rings.PolynomialRing):
        if ring.num_vars < 2:
            raise ValueError("compare needs Krull dimension >= 2")
        return closedform.projective_space_density(ring.num_vars - 1)
    if isinstance(ring, rings.MonomialQuotientRing):
        return closedform.density_from_components(ring)
    if isinstance(ring, rings.SegreProductRing):
        factors = []
        for side in (ring.left, ring.right):
            if not isinstance(side, rings.PolynomialRing):
                raise ValueError("compare on Segre products needs polynomial factors")
            factors.append(side.num_vars - 1)
        cutoff = Fraction(max(factors) + 1)
        pairs = [
            (
                closedform.hilbert_samuel_density(1, d + 1, cutoff),
                closedform.projective_space_density(d).density,
            )
            for d in factors
        ]
        return closedform.segre_combine(pairs)
    if isinstance(ring, rings.BinomialRewriteRing):
        if strata is None:
            raise ValueError(
                "compare on a binomial quotient needs --strata (curve data)"
            )
        # degree-one generators: the curve degree is the Hilbert slope e0
        window = rings.hilbert_stabilization_degree(ring) + 2
        degree = rings.hilbert_len(ring, window + 1) - rings.hilbert_len(ring, window)
        hn = closedform.curve_hn(degree, _parse_strata(strata), check_degree_sum=True)
        return closedform.curve_density(hn)
    raise ValueError(f"no closed form known for ring type {type(ring).__name__}")


def _cmd_compare(args) -> int:
    ring = _load_ring(args.ring)
    ideal = _load_ideal(ring, args.ideal)
    closed = _closed_form_for(ring, args.strata)
    tol = as_fraction(args.tol)
    report = density.estimate_density(ring, ideal, args.p, args.n_max, 0, args.grid)
    riemann = report.riemann_values[-1]
    difference = abs(closed.multiplicity - riemann)
    ok = difference < tol
    payload = {
        "closed_form_ehk": fraction_to_str(closed.multiplicity),
        "riemann_ehk": fraction_to_str(riemann),
        "difference": fraction_to_str(difference),
        "tol": fraction_to_str(tol),
        "n": report.final_n,
        "within_tol": ok,
    }
    _print_json(payload, args.json)
    return 0 if ok else 1


def _add_output_flags(sub, csv: bool = True) -> None:
    sub.add_argument("--json", metavar="PATH", help="also write the JSON result here")
    if csv:
        sub.add_argument("--csv", metavar="PATH", help="write density grid samples here")
        sub.add_argument(
            "--grid", type=int, default=64, help="grid denominator for samples (default 64)"
        )


def _add_ring_flags(sub) -> None:
    sub.add_argument("--ring", required=True, metavar="FILE", help="ring spec JSON file")
    sub.add_argument(
        "--ideal",
        metavar="FILE",
        help="ideal JSON file (default: the maximal ideal)",
    )
    sub.add_argument("--p", type=int, required=True, help="the characteristic, a prime")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hkd",
        description="Exact Hilbert-Kunz density functions and multiplicities.",
        epilog="Environment: HKD_THREADS (worker pool size), HKD_KERNEL (numba|numpy).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("pspace", help="closed-form density of projective space")
    s.add_argument("--d", type=int, required=True, help="projective dimension")
    _add_output_flags(s)
    s.set_defaults(func=_cmd_pspace)

    s = sub.add_parser("curve", help="closed-form density of a curve from strata data")
    s.add_argument("--d", type=int, required=True, help="curve degree")
    s.add_argument(
        "--strata",
        required=True,
        metavar="JSON",
        help='strata as [[rank, slope], ...], e.g. "[[2, -1]]"',
    )
    s.add_argument(
        "--check-degree-sum",
        action="store_true",
        help="require sum(rank * slope) = -degree",
    )
    _add_output_flags(s)
    s.set_defaults(func=_cmd_curve)

    s = sub.add_parser("segre", help="combine factor densities into a Segre product")
    s.add_argument(
        "--factors",
        required=True,
        metavar="JSON",
        help='list of {"pspace": d} | {"curve": {"d":..,"strata":..}} | '
        '{"piecewise": {"F":..,"f":..}}',
    )
    _add_output_flags(s)
    s.set_defaults(func=_cmd_segre)

    s = sub.add_parser("estimate", help="Frobenius-level convergence report")
    _add_ring_flags(s)
    s.add_argument("--n-max", type=int, required=True, help="highest Frobenius level")
    s.add_argument("--tol", default="0", help="early-stop sup-difference (rational)")
    _add_output_flags(s)
    s.set_defaults(func=_cmd_estimate)

    s = sub.add_parser("ehk", help="normalized colengths total/q^dim per level")
    _add_ring_flags(s)
    s.add_argument("--n-max", type=int, required=True, help="highest Frobenius level")
    _add_output_flags(s, csv=False)
    s.set_defaults(func=_cmd_ehk)

    s = sub.add_parser("dim1", help="exact limit density in Krull dimension one")
    _add_ring_flags(s)
    _add_output_flags(s)
    s.set_defaults(func=_cmd_dim1)

    s = sub.add_parser("compare", help="gate a Riemann estimate against a closed form")
    _add_ring_flags(s)
    s.add_argument("--n-max", type=int, required=True, help="highest Frobenius level")
    s.add_argument("--tol", default="1/20", help="acceptance tolerance (rational)")
    s.add_argument("--strata", metavar="JSON", help="curve strata for binomial quotients")
    _add_output_flags(s, csv=False)
    s.add_argument("--grid", type=int, default=64, help="sup-difference grid (default 64)")
    s.set_defaults(func=_cmd_compare)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # argparse errors exit on their own
        error = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        sys.stderr.write(json.dumps(error) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
