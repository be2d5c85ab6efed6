"""Command line entry point: ``permhaar <exact|mc|limit|audit|wg|converge> ...``."""

from __future__ import annotations

import csv
import io
import json
import sys
from fractions import Fraction

from . import conditions, limits, montecarlo, weingarten
from .config import ConfigError, parse_config
from .exact import BudgetExceeded, exact_moment
from .permutations import PermutationError
from .words import PermRef, WordError


def rational(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def fmt(x):
    return format(float(x), ".17g")


def _emit(text, path):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run_exact(cfg):
    res = exact_moment(cfg.word, cfg.N, budget=cfg.budget)
    lines = [rational(res.total)]
    if cfg.breakdown:
        for r in res.breakdown:
            lines.append(f"p={r.p} q={r.q} wg={rational(r.wg)} count={r.tuple_count} value={rational(r.value)}")
    return "\n".join(lines) + "\n"


def run_mc(cfg):
    est = montecarlo.estimate_moment(cfg.word, cfg.N, cfg.samples, cfg.seed, cfg.threads)
    row = {
        "word": cfg.word_text,
        "N": cfg.N,
        "samples": est.samples,
        "seed": est.seed,
        "mean_re": fmt(est.mean.real),
        "mean_im": fmt(est.mean.imag),
        "se": fmt(est.se),
    }
    if cfg.out == "json":
        row.update(mean_re=est.mean.real, mean_im=est.mean.imag, se=est.se)
        return json.dumps(row) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(row), lineterminator="\n")
    writer.writeheader()
    writer.writerow(row)
    return buf.getvalue()


def run_limit(cfg):
    return rational(limits.predicted_limit(cfg.word)) + "\n"


def run_wg(cfg):
    table = weingarten.weingarten_table(cfg.n, cfg.N)
    lines = []
    for ctype in sorted(table.values, key=lambda c: (-len(c), c)):
        value = table.values[ctype]
        shown = rational(value) if table.exact else fmt(value)
        lines.append(f"type=[{','.join(map(str, ctype))}] value={shown}")
    return "\n".join(lines) + "\n"


def run_audit(cfg):
    try:
        family = conditions.parse_family(cfg.family)
    except WordError as exc:
        raise ConfigError("family", str(exc)) from None
    report = conditions.audit_family(family, cfg.sizes)
    if cfg.plot:
        from .plotting import plot_audit

        plot_audit(report, cfg.plot)
    _emit(json.dumps(report.to_json(), indent=2) + "\n", cfg.out)
    return ""


def convergence_table(word, ladder, samples, seed, family=None, threads=1):
    """MC estimate, predicted limit and gap for the word bound at each ladder value."""
    rows = []
    for n in ladder:
        bound = word.bind(n, family)
        N = bound.natural_size() or n
        est = montecarlo.estimate_moment(bound, N, samples, seed, threads)
        limit = limits.predicted_limit(bound)
        rows.append(
            {
                "n": n,
                "N": N,
                "samples": samples,
                "seed": seed,
                "mean_re": est.mean.real,
                "mean_im": est.mean.imag,
                "se": est.se,
                "limit": limit,
                "gap": abs(est.mean - float(limit)),
            }
        )
    return rows


def run_converge(cfg):
    family = None
    if cfg.family:
        try:
            family = PermRef.parse(cfg.family)
        except WordError as exc:
            raise ConfigError("family", str(exc)) from None
    rows = convergence_table(cfg.word, cfg.sizes, cfg.samples, cfg.seed, family, cfg.threads)
    buf = io.StringIO()
    cols = ["n", "N", "samples", "seed", "mean_re", "mean_im", "se", "limit", "gap"]
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for r in rows:
        writer.writerow(
            [r["n"], r["N"], r["samples"], r["seed"], fmt(r["mean_re"]), fmt(r["mean_im"]), fmt(r["se"]), rational(r["limit"]), fmt(r["gap"])]
        )
    if cfg.plot:
        from .plotting import plot_convergence

        plot_convergence(rows, cfg.plot, title=cfg.word_text)
    _emit(buf.getvalue(), cfg.out)
    return ""


RUNNERS = {
    "exact": run_exact,
    "mc": run_mc,
    "limit": run_limit,
    "wg": run_wg,
    "audit": run_audit,
    "converge": run_converge,
}


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
        sys.stdout.write(RUNNERS[cfg.subcommand](cfg))
    except ConfigError as exc:
        print(f"error: {exc.field}: {exc.reason}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"error: budget: {exc}", file=sys.stderr)
        return 3
    except (WordError, PermutationError, weingarten.WeingartenError, ValueError, KeyError) as exc:
        print(f"error: input: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
