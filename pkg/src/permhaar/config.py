"""Run configuration: CLI flags merged over a flat ``key=value`` file over defaults."""

from __future__ import annotations

import argparse
import os
from dataclasses import dataclass, field
from pathlib import Path

from .exact import DEFAULT_BUDGET
from .words import WordError, parse_word

SUBCOMMANDS = ("exact", "mc", "limit", "audit", "wg", "converge")

DEFAULTS = {"seed": "0", "samples": "100", "threads": "1", "out": None}

# flag name -> (subcommands that accept it, is boolean switch)
FLAGS = {
    "word": (("exact", "mc", "limit", "converge"), False),
    "N": (("exact", "mc", "wg"), False),
    "n": (("wg",), False),
    "breakdown": (("exact",), True),
    "budget": (("exact",), False),
    "samples": (("mc", "converge"), False),
    "seed": (("mc", "converge"), False),
    "threads": (("mc", "converge"), False),
    "out": (("mc", "audit", "converge"), False),
    "family": (("audit", "converge"), False),
    "sizes": (("audit",), False),
    "ladder": (("converge",), False),
    "plot": (("audit", "converge"), False),
}


class ConfigError(ValueError):
    def __init__(self, field, reason):
        super().__init__(f"{field}: {reason}")
        self.field = field
        self.reason = reason


@dataclass
class RunConfig:
    subcommand: str
    word: object = None
    word_text: str | None = None
    N: int | None = None
    n: int | None = None
    sizes: list = field(default_factory=list)
    samples: int = 100
    seed: int = 0
    out: str | None = None
    budget: int = DEFAULT_BUDGET
    threads: int = 1
    breakdown: bool = False
    family: str | None = None
    plot: str | None = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError("args", message)


def _parser():
    parser = _Parser(prog="permhaar", allow_abbrev=False)
    sub = parser.add_subparsers(dest="subcommand")
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, allow_abbrev=False)
        p.add_argument("--config")
        for flag, (cmds, switch) in FLAGS.items():
            if name in cmds:
                if switch:
                    p.add_argument("--" + flag, action="store_const", const="1")
                else:
                    p.add_argument("--" + flag)
    return parser


def read_config_file(path):
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, eq, val = line.partition("=")
        if not eq:
            raise ConfigError("config", f"line {lineno} is not key=value")
        values[key.strip()] = val.strip()
    return values


def _int(name, value, minimum=None):
    try:
        x = int(value)
    except (TypeError, ValueError):
        raise ConfigError(name, f"not an integer: {value!r}") from None
    if minimum is not None and x < minimum:
        raise ConfigError(name, f"{name} must be positive" if minimum == 1 else f"must be >= {minimum}")
    return x


def _int_list(name, value):
    try:
        xs = [int(v) for v in str(value).split(",") if v.strip()]
    except ValueError:
        raise ConfigError(name, f"not a comma-separated integer list: {value!r}") from None
    if not xs:
        raise ConfigError(name, "empty list")
    if any(x < 1 for x in xs):
        raise ConfigError(name, "sizes must be positive")
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise ConfigError(name, "sizes must be strictly increasing")
    return xs


def parse_config(args, config_file=None):
    """Build a validated :class:`RunConfig` from argv-style ``args``."""
    ns = _parser().parse_args(list(args))
    if ns.subcommand is None:
        raise ConfigError("subcommand", f"expected one of {', '.join(SUBCOMMANDS)}")
    cmd = ns.subcommand
    cli = {k: v for k, v in vars(ns).items() if v is not None and k not in ("subcommand", "config")}
    path = config_file or ns.config
    filevals = read_config_file(path) if path else {}
    for key in filevals:
        if key not in FLAGS or cmd not in FLAGS[key][0]:
            raise ConfigError(key, f"unknown key for {cmd}")
    env = {}
    if os.environ.get("PHL_BUDGET"):
        env["budget"] = os.environ["PHL_BUDGET"]
    merged = {**DEFAULTS, **env, **filevals, **cli}
    get = merged.get

    cfg = RunConfig(cmd)
    if cmd in ("exact", "mc", "limit", "converge"):
        if not get("word"):
            raise ConfigError("word", "required")
        cfg.word_text = get("word")
        try:
            cfg.word = parse_word(cfg.word_text)
        except WordError as exc:
            raise ConfigError("word", str(exc)) from None
    if cmd in ("exact", "wg"):
        if get("N") is None:
            raise ConfigError("N", "required")
    if get("N") is not None and cmd in ("exact", "mc", "wg"):
        cfg.N = _int("N", get("N"), 1)
    if cmd == "wg":
        if get("n") is None:
            raise ConfigError("n", "required")
        cfg.n = _int("n", get("n"), 1)
    if cmd in ("exact", "mc") and cfg.word is not None:
        try:
            natural = cfg.word.natural_size()
        except WordError as exc:
            raise ConfigError("word", str(exc)) from None
        if cfg.N is None:
            if natural is None:
                raise ConfigError("N", "required (word has only identity permutations)")
            cfg.N = natural
        elif natural is not None and natural != cfg.N:
            raise ConfigError("N", f"word permutations act on N={natural}, got N={cfg.N}")
    if cmd in ("mc", "converge"):
        cfg.samples = _int("samples", get("samples"), 1)
        cfg.seed = _int("seed", get("seed"), 0)
        cfg.threads = _int("threads", get("threads"), 1)
    if cmd == "exact":
        cfg.budget = _int("budget", get("budget", DEFAULT_BUDGET), 1)
        cfg.breakdown = get("breakdown") in ("1", "true", "yes")
    if cmd == "audit":
        if not get("family"):
            raise ConfigError("family", "required")
        if not get("sizes"):
            raise ConfigError("sizes", "required")
        cfg.sizes = _int_list("sizes", get("sizes"))
    if cmd == "converge":
        if not get("ladder"):
            raise ConfigError("ladder", "required")
        cfg.sizes = _int_list("ladder", get("ladder"))
    cfg.family = get("family")
    cfg.plot = get("plot")
    cfg.out = get("out")
    if cmd == "mc":
        cfg.out = cfg.out or "csv"
        if cfg.out not in ("csv", "json"):
            raise ConfigError("out", "must be csv or json")
    return cfg
