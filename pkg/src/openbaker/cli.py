"""Command-line interface.

Subcommands build maps and spectra, evaluate restricted-norm reports,
scan alphabet families, enumerate orthogonality structures, fit
counting exponents, compare cutoffs, and serialize everything as
RFC-4180 CSV, schema-versioned JSON, and self-contained SVG scatter
plots.  All outputs are deterministic for fixed flags and seeds; caps
are overridable through OPENBAKER_* environment variables.
"""

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import additive, alphabet, fup, quantize, spectral
from .errors import DegenerateAlphabet, OpenBakerError, OutOfRange, exit_code_for

SCHEMA_NAME = "report-v1"


def _parse_digits(text):
    try:
        return [int(p) for p in text.split(",") if p != ""]
    except ValueError:
        raise OutOfRange(f"digit list {text!r} is not comma-separated integers")


def _parse_range(text):
    """Parse 'a..b' (inclusive) or a single integer."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        try:
            lo, hi = int(lo), int(hi)
        except ValueError:
            raise OutOfRange(f"range {text!r} is not of the form a..b")
        if hi < lo:
            raise OutOfRange(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    try:
        return [int(text)]
    except ValueError:
        raise OutOfRange(f"range {text!r} is not an integer or a..b")


def _parse_floats(text):
    try:
        return [float(p) for p in text.split(",") if p != ""]
    except ValueError:
        raise OutOfRange(f"list {text!r} is not comma-separated numbers")


def _pool_map(fn, items, jobs):
    items = list(items)
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _fmt(x):
    return "%.17g" % float(x)


def _write_csv(path, header, rows):
    def emit(handle):
        w = csv.writer(handle, lineterminator="\r\n")
        w.writerow(header)
        for row in rows:
            w.writerow(row)

    if path is None:
        emit(sys.stdout)
    else:
        with open(path, "w", newline="", encoding="utf-8") as handle:
            emit(handle)


def _write_json(path, payload):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _alphabet_from(args):
    return alphabet.new_alphabet(args.M, _parse_digits(args.A))


def _cutoff_from(args):
    if getattr(args, "sharp", False):
        return quantize.sharp_one()
    return quantize.cutoff_tau(args.tau)


def _alphabet_str(a):
    return ";".join(str(s) for s in a.symbols)


# ---------------------------------------------------------------- SVG


def _svg_scatter(path, eigs, circles):
    """Self-contained SVG: unit-disk scatter with labeled circles."""
    size = 640.0
    c = size / 2.0
    scale = 0.45 * size

    def px(z):
        return c + scale * z.real, c - scale * z.imag

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size:.0f}" height="{size:.0f}" '
        f'viewBox="0 0 {size:.0f} {size:.0f}">',
        f'<rect width="{size:.0f}" height="{size:.0f}" fill="white"/>',
        f'<circle cx="{c:.1f}" cy="{c:.1f}" r="{scale:.1f}" '
        'fill="none" stroke="black" stroke-width="1"/>',
    ]
    palette = ["#c0392b", "#2471a3", "#1e8449"]
    for idx, (radius, label) in enumerate(circles):
        if radius is None or not (0.0 < radius <= 1.0):
            continue
        color = palette[idx % len(palette)]
        parts.append(
            f'<circle cx="{c:.1f}" cy="{c:.1f}" r="{scale * radius:.3f}" '
            f'fill="none" stroke="{color}" stroke-width="1" '
            'stroke-dasharray="6,4"/>'
        )
        tx = c + 4.0
        ty = c - scale * radius - 4.0
        parts.append(
            f'<text x="{tx:.1f}" y="{ty:.1f}" font-size="14" '
            f'font-family="sans-serif" fill="{color}">{label}</text>'
        )
    for z in eigs:
        x, y = px(complex(z))
        parts.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="2" fill="#111111"/>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(parts) + "\n")


# ------------------------------------------------------------ spectrum


def _reference_circles(a, k):
    """Radii M**(-beta) for the computable exponent, the pressure-at-
    half exponent, and half the pressure-at-one exponent."""
    M = a.base
    d = alphabet.dimension(a)
    circles = {"P(1/2)": M ** -(0.5 - d), "P(1)/2": M ** -((1.0 - d) / 2.0)}
    try:
        r = fup.r_norm(a, k)
        circles["FUP"] = M ** -fup.beta_value(a, k, r)
    except OpenBakerError:
        circles["FUP"] = None
    return circles


def cmd_spectrum(args):
    a = _alphabet_from(args)
    cut = _cutoff_from(args)
    qm = quantize.build_map(a, args.k, cut, cut)
    if cut.smooth and not args.no_trim:
        qm = quantize.trim(qm)
    if args.perturb is not None:
        qm = quantize.perturb(qm, args.perturb, args.seed)
    spec = spectral.eigenvalues(qm)
    eigs = spec.eigenvalues
    if args.out:
        rows = ([_fmt(z.real), _fmt(z.imag)] for z in eigs)
        _write_csv(args.out, ["re", "im"], rows)
    circles = _reference_circles(a, args.k)
    band = {
        name: (
            None
            if radius is None
            else sum(1 for z in eigs if abs(abs(z) - radius) < args.band_eps)
        )
        for name, radius in circles.items()
    }
    counts = {_fmt(nu): spectral.counting(spec, nu) for nu in (args.nu or [])}
    payload = {
        "schema": SCHEMA_NAME,
        "kind": "spectrum",
        "source": spec.source,
        "spectral_radius": spectral.spectral_radius(spec),
        "eigenvalue_count": len(eigs),
        "reference_circles": circles,
        "band_eps": args.band_eps,
        "band_counts": band,
        "counts": counts,
    }
    if args.svg:
        order = ["FUP", "P(1/2)", "P(1)/2"]
        _svg_scatter(args.svg, eigs, [(circles[n], n) for n in order])
    _write_json(args.json, payload)
    return 0


# ----------------------------------------------------------------- fup


def cmd_fup(args):
    a = _alphabet_from(args)
    if a.degenerate:
        raise DegenerateAlphabet("restricted-norm report needs 1 < |A| < M")
    rep = fup.fup_report(a, args.kmax)
    payload = {
        "schema": SCHEMA_NAME,
        "kind": "fup",
        "M": a.base,
        "A": list(a.symbols),
        "delta": alphabet.dimension(a),
        "k_values": list(rep.k_values),
        "r": list(rep.r),
        "beta": list(rep.beta),
        "beta_best": rep.beta_best,
        "bounds": [
            {
                "trivial": b.trivial,
                "lower": b.lower,
                "additive": b.additive,
                "witness_constant": b.witness_constant,
                "witness_modulated": b.witness_modulated,
            }
            for b in rep.bounds
        ],
    }
    _write_json(args.json, payload)
    return 0


# ---------------------------------------------------------------- scan


def _largest_level(size, cap_value):
    k = 1
    while size ** (k + 1) <= cap_value:
        k += 1
    return k


def _scan_sizes(M, size):
    if size is not None:
        return [size] if 1 < size < M else []
    return list(range(2, M))


def cmd_scan(args):
    m_values = _parse_range(args.M)
    if args.table1:
        header = ["M", "size", "delta", "k", "beta_min", "improvement", "alphabet"]
        rows = []
        for M in m_values:
            for size in _scan_sizes(M, args.size):
                k = _largest_level(size, args.cap)
                pairs = _scan_with_jobs(M, size, k, args.jobs)
                betas = [
                    (fup.beta_value(a, k, r), a) for a, r in pairs
                ]
                beta_min, best = min(betas, key=lambda t: t[0])
                d = alphabet.dimension(best)
                improvement = beta_min - max(0.0, 0.5 - d)
                rows.append(
                    [
                        M,
                        size,
                        _fmt(d),
                        k,
                        _fmt(beta_min),
                        _fmt(improvement),
                        _alphabet_str(best),
                    ]
                )
        _write_csv(args.out, header, rows)
        return 0
    header = ["M", "alphabet", "delta", "k", "beta_k"]
    rows = []
    for M in m_values:
        for size in _scan_sizes(M, args.size):
            k = _largest_level(size, args.cap)
            for a, r in _scan_with_jobs(M, size, k, args.jobs):
                rows.append(
                    [
                        M,
                        _alphabet_str(a),
                        _fmt(alphabet.dimension(a)),
                        k,
                        _fmt(fup.beta_value(a, k, r)),
                    ]
                )
    _write_csv(args.out, header, rows)
    return 0


def _scan_with_jobs(M, size, k, jobs):
    """Compute r_k once per shift/reflection class, in parallel, then
    expand to every alphabet in lexicographic order."""
    alphabets = list(alphabet.enumerate_alphabets(M, size))
    keys = [fup.shift_reflect_key(a) for a in alphabets]
    unique = sorted(set(keys))
    vals = _pool_map(
        lambda key: fup.r_norm(alphabet.Alphabet(M, key), k), unique, jobs
    )
    table = dict(zip(unique, vals))
    return [(a, table[key]) for a, key in zip(alphabets, keys)]


# -------------------------------------------------------------- special


def cmd_special(args):
    if args.M_max > 32:
        raise OutOfRange(f"M-max must be at most 32, got {args.M_max}")
    entries = []
    for M in range(2, args.M_max + 1):
        seen = set()
        for size in range(2, M):
            for a in alphabet.enumerate_alphabets(M, size):
                if not alphabet.is_special(a):
                    continue
                canon = alphabet.canonical_form(a)
                key = (canon.base, canon.symbols)
                if key in seen:
                    continue
                seen.add(key)
                r2 = fup.r_norm(canon, 2)
                expected = canon.size / canon.base
                entries.append(
                    {
                        "M": canon.base,
                        "A": list(canon.symbols),
                        "delta": alphabet.dimension(canon),
                        "r2": r2,
                        "expected_r2": expected,
                        "certified": abs(r2 - expected) <= 1e-9,
                    }
                )
    payload = {
        "schema": SCHEMA_NAME,
        "kind": "special",
        "M_max": args.M_max,
        "count": len(entries),
        "entries": entries,
    }
    _write_json(args.json, payload)
    return 0


# -------------------------------------------------------------- fuglede


def _rotation_class(mask, M):
    best = mask
    full = (1 << M) - 1
    for _ in range(M - 1):
        mask = ((mask << 1) | (mask >> (M - 1))) & full
        if mask < best:
            best = mask
    return best


def cmd_fuglede(args):
    if args.M_max > 20:
        raise OutOfRange(f"M-max must be at most 20, got {args.M_max}")
    if args.M_max > 16 and not args.long:
        raise OutOfRange("M-max above 16 requires --long")
    counter = []
    checked = 0
    per_m = []

    def classify(item):
        M, digits = item
        a = alphabet.Alphabet(M, digits)
        is_spectral = alphabet.spectrum_set(a) is not None
        is_tile = alphabet.tiles(a) is not None
        return (M, digits, is_spectral, is_tile)

    for M in range(1, args.M_max + 1):
        reps = []
        seen = set()
        for mask in range(1, 1 << M):
            cls = _rotation_class(mask, M)
            if cls in seen:
                continue
            seen.add(cls)
            digits = tuple(i for i in range(M) if (cls >> i) & 1)
            reps.append(digits)
        spectral_n = 0
        tile_n = 0
        nondeg = [(M, d) for d in reps if 1 < len(d) < M]
        results = _pool_map(classify, nondeg, args.jobs)
        for digits in reps:
            if len(digits) in (1, M):
                # singletons and the full set are both spectral and
                # tiles; no counterexample possible
                spectral_n += 1
                tile_n += 1
                checked += 1
        for M_, digits, is_spectral, is_tile in results:
            checked += 1
            spectral_n += is_spectral
            tile_n += is_tile
            if is_spectral != is_tile:
                counter.append(
                    {
                        "M": M_,
                        "A": list(digits),
                        "spectral": is_spectral,
                        "tile": is_tile,
                    }
                )
        per_m.append(
            {
                "M": M,
                "classes": len(reps),
                "spectral": spectral_n,
                "tile": tile_n,
            }
        )
    payload = {
        "schema": SCHEMA_NAME,
        "kind": "fuglede",
        "M_max": args.M_max,
        "checked_classes": checked,
        "counterexamples": counter,
        "per_modulus": per_m,
    }
    _write_json(args.json, payload)
    return 0


# ----------------------------------------------------------------- weyl


def cmd_weyl(args):
    a = _alphabet_from(args)
    cut = _cutoff_from(args)
    ks = _parse_range(args.k)
    nus = args.nus or [round(0.1 * i, 10) for i in range(1, 11)]
    rows = spectral.weyl_fit(a, ks, nus, cut)
    logM = math.log(a.base)
    header = ["nu"] + [f"k{k}" for k in ks]
    csv_rows = []
    for row in rows:
        cells = [_fmt(row["nu"])]
        for k in ks:
            count = row["counts"][k]
            cells.append("" if count == 0 else _fmt(math.log(count) / logM))
        csv_rows.append(cells)
    _write_csv(args.out, header, csv_rows)
    payload = {
        "schema": SCHEMA_NAME,
        "kind": "weyl",
        "M": a.base,
        "A": list(a.symbols),
        "delta": alphabet.dimension(a),
        "k_values": ks,
        "fits": [
            {
                "nu": row["nu"],
                "slope": row["slope"],
                "predicted": row["predicted"],
                "counts": {str(k): v for k, v in row["counts"].items()},
                "used_levels": row["used_levels"],
                "excluded_levels": row["excluded_levels"],
                "degenerate": row["degenerate"],
            }
            for row in rows
        ],
    }
    _write_json(args.json, payload)
    return 0


# -------------------------------------------------------- cutoff-compare


def cmd_cutoff_compare(args):
    a = _alphabet_from(args)
    taus = _parse_floats(args.taus)
    if not taus:
        raise OutOfRange("need at least one tau")
    cutoffs = [("tau=" + repr(t), quantize.cutoff_tau(t)) for t in taus]
    if args.sharp:
        cutoffs.append(("sharp", quantize.sharp_one()))

    def solve(named):
        name, cut = named
        qm = quantize.build_map(a, args.k, cut, cut)
        if cut.smooth:
            qm = quantize.trim(qm)
        return name, spectral.eigenvalues(qm).eigenvalues

    solved = _pool_map(solve, cutoffs, args.jobs)
    base_name, base_eigs = solved[0]
    comparisons = []
    for name, eigs in solved[1:]:
        rec = spectral.match_annulus(base_eigs, eigs, args.annulus)
        comparisons.append(
            {
                "cutoff": name,
                "count_baseline": rec["count_a"],
                "count_other": rec["count_b"],
                "matched": rec["matched"],
                "max_distance": (
                    None if math.isinf(rec["max_distance"]) else rec["max_distance"]
                ),
                "count_mismatch": rec["count_a"] != rec["count_b"],
            }
        )
    payload = {
        "schema": SCHEMA_NAME,
        "kind": "cutoff-compare",
        "M": a.base,
        "A": list(a.symbols),
        "k": args.k,
        "annulus": args.annulus,
        "baseline": base_name,
        "comparisons": comparisons,
    }
    _write_json(args.json, payload)
    return 0


# --------------------------------------------------------------- energy


def cmd_energy(args):
    a = _alphabet_from(args)
    prof = additive.profile(a)
    payload = {
        "schema": SCHEMA_NAME,
        "kind": "energy",
        "M": a.base,
        "A": list(a.symbols),
        "delta": alphabet.dimension(a),
        "portrait": {str(j): v for j, v in sorted(prof.portrait.items())},
        "energies": {str(l): v for l, v in sorted(prof.energies.items())},
        "energies_mod": list(prof.energies_mod),
        "matrix": [list(row) for row in prof.matrix],
        "rho": prof.rho,
        "gamma": prof.gamma,
    }
    if args.k is not None:
        e_rec = additive.cantor_energy_mod(a, args.k)
        payload["k"] = args.k
        payload["cantor_energy"] = e_rec
        if a.size ** (3 * args.k) <= 10 ** 9:
            e_brute = additive.cantor_energy_brute(a, args.k)
            payload["cantor_energy_brute"] = e_brute
            payload["cross_check"] = e_rec == e_brute
    _write_json(args.json, payload)
    return 0


# ------------------------------------------------------------ propagate


def cmd_propagate(args):
    a = _alphabet_from(args)
    cut = quantize.cutoff_tau(args.tau)
    # the defect estimator is matrix-free; only metadata is needed
    qm = quantize.QuantumMap(
        alphabet=a,
        level=args.k,
        dim=a.base ** args.k,
        left_cutoff=cut,
        right_cutoff=cut,
    )
    rec = spectral.propagation_defect(qm, args.rho)
    payload = {
        "schema": SCHEMA_NAME,
        "kind": "propagate",
        "M": a.base,
        "A": list(a.symbols),
        "k": args.k,
        "rho": args.rho,
        "tau": args.tau,
        "space_defect": rec["space_defect"],
        "fourier_defect": rec["fourier_defect"],
    }
    _write_json(args.json, payload)
    return 0


# ----------------------------------------------------------- arg wiring


def _add_alphabet_flags(p):
    p.add_argument("--M", type=int, required=True, help="base (modulus per digit)")
    p.add_argument("--A", type=str, required=True, help="digits, comma-separated")


def _add_cutoff_flags(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--tau", type=float, default=0.05, help="smooth cutoff width")
    g.add_argument("--sharp", action="store_true", help="indicator cutoff")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="openbaker",
        description="Open quantum baker's maps, spectra, and Cantor-set "
        "uncertainty norms",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="eigenvalues of one map")
    _add_alphabet_flags(p)
    p.add_argument("--k", type=int, required=True)
    _add_cutoff_flags(p)
    p.add_argument("--no-trim", action="store_true")
    p.add_argument("--perturb", type=float, default=None, metavar="REL")
    p.add_argument("--seed", type=int, default=1234)
    p.add_argument("--nu", type=_parse_floats, default=None)
    p.add_argument("--band-eps", type=float, default=0.05)
    p.add_argument("--out", type=str, default=None, help="eigenvalue CSV path")
    p.add_argument("--svg", type=str, default=None)
    p.add_argument("--json", type=str, default=None)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("fup", help="restricted-norm report")
    _add_alphabet_flags(p)
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--json", type=str, default=None)
    p.set_defaults(func=cmd_fup)

    p = sub.add_parser("scan", help="norm exponents over alphabet families")
    p.add_argument("--M", type=str, required=True, help="base or range a..b")
    p.add_argument("--size", type=int, default=None)
    p.add_argument("--cap", type=int, default=5000, help="largest |A|**k")
    p.add_argument("--table1", action="store_true", help="per-family minima")
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("special", help="orthogonal digit alphabets")
    p.add_argument("--M-max", dest="M_max", type=int, required=True)
    p.add_argument("--json", type=str, default=None)
    p.set_defaults(func=cmd_special)

    p = sub.add_parser("fuglede", help="spectral-set vs tile check")
    p.add_argument("--M-max", dest="M_max", type=int, required=True)
    p.add_argument("--long", action="store_true")
    p.add_argument("--json", type=str, default=None)
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(func=cmd_fuglede)

    p = sub.add_parser("weyl", help="counting-exponent table and fits")
    _add_alphabet_flags(p)
    p.add_argument("--k", type=str, required=True, help="level range a..b")
    _add_cutoff_flags(p)
    p.add_argument("--nus", type=_parse_floats, default=None)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--json", type=str, default=None)
    p.set_defaults(func=cmd_weyl)

    p = sub.add_parser("cutoff-compare", help="spectra across cutoff widths")
    _add_alphabet_flags(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--taus", type=str, required=True)
    p.add_argument("--sharp", action="store_true")
    p.add_argument("--annulus", type=float, default=0.25)
    p.add_argument("--json", type=str, default=None)
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(func=cmd_cutoff_compare)

    p = sub.add_parser("energy", help="additive statistics of an alphabet")
    _add_alphabet_flags(p)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--json", type=str, default=None)
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("propagate", help="propagation defect diagnostics")
    _add_alphabet_flags(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--tau", type=float, default=0.05)
    p.add_argument("--json", type=str, default=None)
    p.set_defaults(func=cmd_propagate)

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except OpenBakerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
