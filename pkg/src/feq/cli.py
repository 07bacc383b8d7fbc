"""Command-line front end: ``feq <subcommand> [group] [options]``.

Exit codes: 0 success, 1 computational error, 2 usage error.  Errors are
written as ``{"error": {"code", "message", "witness"}}``.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .errors import FeqError
from .io import dumps, function_from_dict, load_function, load_group, to_jsonable
from .group import FiniteGroup, Subgroup, conjugacy_classes, parse_subgroup_ref

DEFAULT_SEED = 0xD1A1
EQUATIONS = ("dalembert", "wilson", "long", "sine", "twisted", "spherical")


class UsageError(FeqError):
    pass


class UnknownSubcommand(UsageError):
    pass


class BadGroupSpec(UsageError):
    pass


class BadSubgroupSpec(UsageError):
    pass


class BadMuRef(UsageError):
    pass


class BadFunctionRef(UsageError):
    pass


@dataclass
class RunConfig:
    command: str
    group: FiniteGroup | None = None
    group_ref: str | None = None
    K: Subgroup | None = None
    k_ref: str = "trivial"
    mu: np.ndarray | None = None
    mu_ref: str = "0"
    tol: float | None = None
    seed: int = DEFAULT_SEED
    output: str | None = None
    format: str = "json"
    equation: str | None = None
    f: np.ndarray | None = None
    g: np.ndarray | None = None
    chi: np.ndarray | None = None
    g_index: int | None = None
    oracle: bool = False
    symmetrized: bool = False
    trials: int = 100
    epsilon: float = 1e-6
    cayley: bool = False


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        if "invalid choice" in message:
            raise UnknownSubcommand(message)
        raise UsageError(message)


def _common(p: argparse.ArgumentParser, k=True, mu=True):
    p.add_argument("group_pos", nargs="?", metavar="group", help="preset (e.g. symmetric:3) or group JSON file")
    p.add_argument("--group", help="same as the positional group argument")
    if k:
        p.add_argument("--k", default="trivial", help="subgroup: trivial, all, center, commutator, or element list")
    if mu:
        p.add_argument("--mu", default="0", help="index into mu-list, or function JSON file")
    p.add_argument("--tol", type=float, help="tolerance override (env FEQ_TOL)")
    p.add_argument("--seed", type=int, help="seed (env FEQ_SEED)")
    p.add_argument("--output", "-o", help="write report here instead of stdout")
    p.add_argument("--format", choices=("json", "text"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="feq", description="Integral d'Alembert and Wilson equations on finite groups.")
    parser.add_argument("--version", action="version", version=f"feq {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("group", help="describe a group")
    _common(p, k=False, mu=False)
    p.add_argument("--cayley", action="store_true", help="include the Cayley table")

    p = sub.add_parser("central-pair", help="test whether (G, K) is a central pair")
    _common(p, mu=False)

    p = sub.add_parser("spherical", help="K-spherical functions")
    _common(p, mu=False)

    p = sub.add_parser("characters", help="irreducible character table")
    _common(p, k=False, mu=False)

    p = sub.add_parser("mu-list", help="enumerate unit characters")
    _common(p, k=False, mu=False)

    p = sub.add_parser("solve", help="solve the d'Alembert or Wilson equation")
    p.add_argument("equation", choices=("dalembert", "wilson"))
    _common(p)
    p.add_argument("--oracle", action="store_true", help="use the linear-algebra route")
    p.add_argument("--g", help="function JSON for g (wilson)")
    p.add_argument("--g-index", type=int, help="pick g from the d'Alembert solutions (wilson)")

    p = sub.add_parser("verify", help="residual of a function (pair) in an equation")
    p.add_argument("equation", choices=EQUATIONS)
    _common(p)
    p.add_argument("--f", help="function JSON (omega for sine, g for long)")
    p.add_argument("--g", help="second function JSON")
    p.add_argument("--chi", help="character of K as function JSON over K's elements (twisted)")
    p.add_argument("--symmetrized", action="store_true", help="symmetrized sine law")

    p = sub.add_parser("fuzz-stability", help="fuzz the stability inequalities")
    _common(p)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--epsilon", type=float, default=1e-6)
    p.add_argument("--g-index", type=int, help="base solution index (default 0)")
    return parser


def _resolve_group(ref: str | None) -> FiniteGroup:
    if not ref:
        raise BadGroupSpec("a group is required (positional or --group)")
    try:
        return load_group(ref)
    except (FeqError, ValueError, OSError, KeyError) as exc:
        raise BadGroupSpec(f"cannot resolve group {ref!r}: {exc}") from None


def _resolve_mu(G: FiniteGroup, ref: str) -> np.ndarray:
    from .funcspace import enumerate_unit_characters, validate_character

    if ref.lstrip("-").isdigit():
        chars = enumerate_unit_characters(G)
        i = int(ref)
        if not 0 <= i < len(chars):
            raise BadMuRef(f"mu index {i} out of range 0..{len(chars) - 1}")
        return chars[i].values
    try:
        return validate_character(G, load_function(ref, G)).values
    except (FeqError, OSError, ValueError, KeyError) as exc:
        raise BadMuRef(f"cannot use {ref!r} as a unit character: {exc}") from None


def _resolve_function(path: str | None, G: FiniteGroup, what: str, size: int | None = None):
    if path is None:
        return None
    try:
        import json
        from pathlib import Path

        data = json.loads(Path(path).read_text())
        f = function_from_dict(data)
    except (FeqError, OSError, ValueError, KeyError) as exc:
        raise BadFunctionRef(f"cannot load {what} from {path!r}: {exc}") from None
    n = G.order if size is None else size
    if f.shape != (n,) or not np.all(np.isfinite(f)):
        raise BadFunctionRef(f"{what} must have {n} finite values", witness={"got": int(f.size)})
    return f


def parse_args(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    env_seed = os.environ.get("FEQ_SEED")
    env_tol = os.environ.get("FEQ_TOL")
    seed = ns.seed if ns.seed is not None else (int(env_seed) if env_seed else DEFAULT_SEED)
    tol = ns.tol if ns.tol is not None else (float(env_tol) if env_tol else None)
    if tol is not None and not tol > 0:
        raise UsageError("tolerance must be positive")
    ref = ns.group or ns.group_pos
    G = _resolve_group(ref)
    cfg = RunConfig(
        command=ns.command, group=G, group_ref=ref, tol=tol, seed=seed,
        output=ns.output, format=ns.format,
    )
    if hasattr(ns, "k"):
        cfg.k_ref = ns.k
        try:
            cfg.K = parse_subgroup_ref(G, ns.k)
        except (FeqError, KeyError, ValueError) as exc:
            raise BadSubgroupSpec(f"cannot resolve subgroup {ns.k!r}: {exc}") from None
    if hasattr(ns, "mu"):
        cfg.mu_ref = ns.mu
        cfg.mu = _resolve_mu(G, ns.mu)
    cfg.equation = getattr(ns, "equation", None)
    cfg.oracle = getattr(ns, "oracle", False)
    cfg.symmetrized = getattr(ns, "symmetrized", False)
    cfg.cayley = getattr(ns, "cayley", False)
    cfg.g_index = getattr(ns, "g_index", None)
    cfg.trials = getattr(ns, "trials", cfg.trials)
    cfg.epsilon = getattr(ns, "epsilon", cfg.epsilon)
    if cfg.trials < 0:
        raise UsageError("--trials must be non-negative")
    cfg.f = _resolve_function(getattr(ns, "f", None), G, "f")
    cfg.g = _resolve_function(getattr(ns, "g", None), G, "g")
    if getattr(ns, "chi", None):
        cfg.chi = _resolve_function(ns.chi, G, "chi", size=cfg.K.order)
    if cfg.command == "verify":
        needs_g = cfg.equation in ("wilson", "sine", "twisted")
        if cfg.f is None or (needs_g and cfg.g is None):
            raise UsageError(f"verify {cfg.equation} needs --f" + (" and --g" if needs_g else ""))
    return cfg


# ---------------------------------------------------------------------------
# subcommands


def _cmd_group(cfg):
    from .group import center, commutator_subgroup

    G = cfg.group
    out = {
        "order": G.order,
        "names": list(G.names),
        "identity": G.identity,
        "inverse": G.inverse,
        "abelian": G.is_abelian(),
        "classes": conjugacy_classes(G),
        "center": list(center(G).elements),
        "commutator_subgroup": list(commutator_subgroup(G).elements),
    }
    if cfg.cayley:
        out["cayley"] = G.cayley
    return out


def _cmd_central_pair(cfg):
    from .funcspace import central_pair_test

    r = central_pair_test(cfg.group, cfg.K)
    out = {"central_pair": r.central, "max_deviation": r.max_deviation, "witness": None}
    if r.witness is not None:
        out["witness"] = r.witness["orbits"]
        out["witness_element"] = r.witness["element"]
    return out


def _cmd_spherical(cfg):
    from .funcspace import orbits_of
    from .spherical import compute_spherical_functions, spherical_residual

    G, K = cfg.group, cfg.K
    sph = compute_spherical_functions(G, K, cfg.seed, cfg.tol)
    return {
        "orbits": orbits_of(G, K),
        "spherical": sph,
        "residuals": [spherical_residual(G, K, p) for p in sph],
    }


def _cmd_characters(cfg):
    from .chartab import character_table

    t = character_table(cfg.group, cfg.seed)
    return {
        "classes": t.classes,
        "class_sizes": t.sizes,
        "degrees": t.degrees,
        "rows": t.rows,
        "row_orthogonality_error": t.row_orthogonality_error(),
        "column_orthogonality_error": t.column_orthogonality_error(),
    }


def _cmd_mu_list(cfg):
    from .funcspace import enumerate_unit_characters

    return {"characters": [c.values for c in enumerate_unit_characters(cfg.group)]}


def _solution_report(rep):
    return {
        "equation": rep.equation,
        "solutions": rep.solutions,
        "residuals": rep.residuals,
        "classification": rep.classification,
        "provenance": rep.provenance,
        "details": rep.details,
        "notes": rep.notes,
    }


def _pick_g(cfg):
    from .equations import solve_dalembert

    if cfg.g is not None:
        return cfg.g
    sols = solve_dalembert(cfg.group, cfg.K, cfg.mu, cfg.seed).solutions
    i = cfg.g_index or 0
    if not 0 <= i < len(sols):
        raise UsageError(f"--g-index {i} out of range 0..{len(sols) - 1}")
    return sols[i]


def _cmd_solve(cfg):
    from . import equations as eq

    G, K, mu = cfg.group, cfg.K, cfg.mu
    if cfg.equation == "dalembert":
        fn = eq.solve_dalembert_oracle if cfg.oracle else eq.solve_dalembert
        return _solution_report(fn(G, K, mu, cfg.seed, cfg.tol))
    g = _pick_g(cfg)
    if cfg.oracle:
        rep = eq.solve_wilson_oracle(G, K, mu, g)
    else:
        rep = eq.solve_wilson(G, K, mu, g, cfg.seed, cfg.tol)
    out = _solution_report(rep)
    out["g"] = g
    return out


def _cmd_verify(cfg):
    from . import equations as eq
    from .funcspace import default_tol
    from .spherical import spherical_residual

    G, K, mu, f, g = cfg.group, cfg.K, cfg.mu, cfg.f, cfg.g
    e = cfg.equation
    if e == "dalembert":
        res = eq.dalembert_residual(G, K, mu, f)
    elif e == "wilson":
        res = eq.wilson_residual(G, K, mu, f, g)
    elif e == "long":
        res = eq.long_dalembert_residual(G, K, mu, f)
    elif e == "sine":
        res = eq.sine_addition_residual(G, K, f, g, cfg.symmetrized)
    elif e == "twisted":
        chi = cfg.chi if cfg.chi is not None else np.ones(K.order)
        res = eq.twisted_wilson_residual(G, K, mu, chi, f, g)
    else:
        res = spherical_residual(G, K, f)
    tol = cfg.tol if cfg.tol is not None else default_tol(f, g)
    return {"equation": e, "residual": res, "passes": res <= tol}


def _cmd_fuzz(cfg):
    from .equations import solve_dalembert
    from .stability import fuzz_bounds, perturbation_probe

    G, K, mu = cfg.group, cfg.K, cfg.mu
    dsols = solve_dalembert(G, K, mu, cfg.seed).solutions
    i = cfg.g_index or 0
    if not 0 <= i < len(dsols):
        raise UsageError(f"--g-index {i} out of range 0..{len(dsols) - 1}")
    base = dsols[i]
    probe = perturbation_probe(G, K, mu, (base, base), cfg.epsilon, cfg.seed, cfg.trials)
    return {
        "delta": probe.delta,
        "bound_checks": fuzz_bounds(G, K, mu, cfg.trials, cfg.seed, dsols),
        "perturbation": probe.perturbation,
        "base": base,
    }


COMMANDS = {
    "group": _cmd_group,
    "central-pair": _cmd_central_pair,
    "spherical": _cmd_spherical,
    "characters": _cmd_characters,
    "mu-list": _cmd_mu_list,
    "solve": _cmd_solve,
    "verify": _cmd_verify,
    "fuzz-stability": _cmd_fuzz,
}


def _header(cfg) -> dict:
    from .funcspace import BASE_TOL

    h = {
        "tool": {"name": "feq", "version": __version__},
        "command": cfg.command if cfg.equation is None else f"{cfg.command} {cfg.equation}",
        "group": cfg.group_ref,
        "seed": cfg.seed,
        "tol": cfg.tol if cfg.tol is not None else BASE_TOL,
    }
    if cfg.K is not None:
        h["k"] = list(cfg.K.elements)
    if cfg.mu is not None:
        h["mu"] = cfg.mu_ref
    return h


# ---------------------------------------------------------------------------
# output


def _is_function_list(v) -> bool:
    return (
        isinstance(v, list)
        and len(v) > 0
        and all(isinstance(r, np.ndarray) and r.ndim == 1 for r in v)
    )


def _fmt_complex(z) -> str:
    z = complex(z)
    re, im = round(z.real, 10) + 0.0, round(z.imag, 10) + 0.0
    if im == 0:
        return f"{re:.6g}"
    if re == 0:
        return f"{im:.6g}i"
    return f"{re:.6g}{im:+.6g}i"


def _text_table(rows, header=None) -> list[str]:
    cells = [[_fmt_complex(v) for v in r] for r in rows]
    if header is not None:
        cells = [list(header)] + cells
    widths = [max(len(r[j]) for r in cells) for j in range(len(cells[0]))]
    return ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]


def emit_report(report: dict, fmt: str = "json", names=None) -> str:
    """Serialize deterministically; ``names`` labels table columns in text mode."""
    if fmt == "json":
        return dumps(report)
    lines = []
    for key, val in report.items():
        if isinstance(val, np.ndarray) and val.ndim == 2:
            lines.append(f"{key}:")
            lines.extend("  " + s for s in _text_table(val))
        elif _is_function_list(val):
            lines.append(f"{key}:")
            hdr = names if names is not None and len(names) == len(val[0]) else None
            lines.extend("  " + s for s in _text_table(val, hdr))
        elif isinstance(val, np.ndarray):
            lines.append(f"{key}: " + " ".join(_fmt_complex(v) for v in val))
        else:
            lines.append(f"{key}: {dumps(val, indent=None)}")
    return "\n".join(lines)


def _write(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def run(cfg: RunConfig) -> int:
    try:
        body = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        _write(dumps({"error": exc.to_dict()}), cfg.output)
        return 2
    except FeqError as exc:
        _write(dumps({"error": exc.to_dict()}), cfg.output)
        return 1
    report = {**_header(cfg), **body}
    names = list(cfg.group.names) if cfg.group is not None else None
    _write(emit_report(report, cfg.format, names), cfg.output)
    return 0


def main(argv=None) -> int:
    try:
        cfg = parse_args(argv)
    except UsageError as exc:
        sys.stdout.write(dumps({"error": exc.to_dict()}) + "\n")
        return 2
    except FeqError as exc:
        sys.stdout.write(dumps({"error": exc.to_dict()}) + "\n")
        return 1
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
