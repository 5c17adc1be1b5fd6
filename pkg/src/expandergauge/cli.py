"""Command-line front end.  Every command is a thin adapter over a library call."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import certify, growth, spectral
from .characters import DEFAULT_SEED, CharacterError, character_table
from .families import parse_group
from .graphs import certificate, h_ver_exact_witness
from .limits import Limits, limits_from_env
from .perm import (GroupAction, derived_length, derived_series, lower_central_series,
                   nilpotency_class)
from .words import WordError


@dataclass
class RunConfig:
    command: str
    family: str | None = None
    s: str | None = None
    limits: Limits = field(default_factory=Limits)
    seed: int = DEFAULT_SEED
    out: str | None = None
    format: str = "json"


def jsonable(x):
    """Exact rationals as "num/den", floats to 12 significant digits."""
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(f"{float(x):.12g}")
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [jsonable(v) for v in x]
    return x


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True)


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    for r in rows:
        lines.append(",".join("" if v is None else str(jsonable(v)) for v in r))
    return "\n".join(lines) + "\n"


def _need(args, name):
    if getattr(args, name) is None:
        raise ValueError(f"--{name} is required for '{args.command}'")
    return getattr(args, name)


def _group(args):
    return parse_group(_need(args, "family"))


def _graph(args):
    G = _group(args)
    s = args.s or "gens"
    return certify.build_graph(G, s, args.graph, args.seed)


# ------------------------------------------------------------------ commands

def cmd_group(args, lim):
    G = _group(args)
    out = {
        "label": G.label, "order": G.order, "degree": G.degree,
        "abelian": G.is_abelian(), "transitive": G.is_transitive(),
        "orbit_lengths": G.orbit_lengths(),
        "derived_series_orders": [H.order for H in derived_series(G)],
        "derived_length": derived_length(G),
        "lower_central_orders": [H.order for H in lower_central_series(G)],
        "nilpotency_class": nilpotency_class(G),
    }
    if args.format == "csv":
        return _csv(["key", "value"], [(k, out[k]) for k in sorted(out)
                                        if not isinstance(out[k], list)])
    return dumps(out)


def cmd_graph(args, lim):
    g = _graph(args)
    if args.format == "dot":
        return g.to_dot()
    if args.format == "csv":
        return "u,v\n" + g.edge_list().replace(" ", ",")
    return dumps({"vertices": g.m, "degree": g.d, "group": g.group_label, "s": g.set_label,
                  "kind": args.graph, "adjacency": g.adj.tolist(), "connected": g.is_connected()})


def cmd_hver(args, lim):
    g = _graph(args)
    mode = args.mode or ("exact" if g.m <= lim.exact else "certify")
    if mode == "exact":
        value, X = h_ver_exact_witness(g, lim.exact)
        cert = certificate(g, X, "exact")
        out = {"h_ver": value, "exact": True}
    else:
        cert = certify.folner_search(g, args.budget, args.seed)
        out = {"h_ver_upper": cert.ratio, "exact": False}
    out.update(vertices=g.m, degree=g.d, certificate=cert.to_dict(), verified=cert.verified)
    if args.format == "csv":
        return _csv(["vertices", "degree", "num", "den", "exact"],
                    [(g.m, g.d, cert.ratio.numerator, cert.ratio.denominator, mode == "exact")])
    return dumps(out)


def cmd_spectrum(args, lim):
    g = _graph(args)
    ev = spectral.adjacency_spectrum(g, lim.dense, args.method)
    out = {"vertices": g.m, "degree": g.d, "eigenvalues": ev.tolist(),
           "complete": g.m <= lim.dense, "gap": float(g.d - ev[1]) if g.m > 1 else None}
    if g.m > 1 and g.is_connected():
        out["cheeger"] = spectral.cheeger_sandwich(g, lim.dense)
    if args.format == "csv":
        return _csv(["index", "eigenvalue"], [(i, float(v)) for i, v in enumerate(ev)])
    return dumps(out)


def _kmax(args, G):
    return args.k if args.k is not None else G.order


def cmd_abgrowth(args, lim):
    G = _group(args)
    prof = growth.ab_profile(G, _kmax(args, G), lim.lattice)
    if args.format == "csv":
        return _csv(["k", "ab_k"], sorted(prof.items()))
    return dumps({"group": G.label, "order": G.order, "ab": prof})


def cmd_repgrowth(args, lim):
    G = _group(args)
    action = GroupAction(G) if args.action else None
    prof = growth.growth_profile(G, _kmax(args, G), action, lim.lattice, lim.elements, args.seed)
    if args.format == "csv":
        return prof.to_csv()
    out = prof.to_dict()
    if args.table:
        out["table"] = character_table(G, lim.elements, args.seed).to_dict()
    return dumps(out)


def cmd_action_rep(args, lim):
    G = _group(args)
    action = GroupAction(G)
    dec = growth.decompose_action(action, lim.elements, args.seed)
    k = args.k if args.k is not None else max(dec.degrees)
    rep_k = {kk: sum(1 for d, m in zip(dec.degrees, dec.multiplicities) if m and d <= kk)
             for kk in range(1, k + 1)}
    out = {"group": G.label, "points": action.size, "orbital_count": dec.orbital_count,
           "constituents": [{"degree": d, "multiplicity": m} for d, m in dec.constituents()],
           "permutation_character": dec.permutation_character, "rep_action": rep_k}
    if args.format == "csv":
        return _csv(["degree", "multiplicity"], dec.constituents())
    return dumps(out)


def cmd_lw_check(args, lim):
    G = _group(args)
    subs = growth.subgroup_lattice(G, lim.lattice)
    w = growth.lw_witness(G, lim.lattice)
    out = {"group": G.label, "order": G.order, "lw_constant": growth.lw_constant(G, lim.lattice),
           "witness": w.to_dict(), "subgroups": len(subs)}
    if G.is_transitive():
        Y = G.stabilizer(0)
        out["stabilizer_order"] = Y.order
        out["lw_constant_relative"] = growth.lw_constant_relative(G, Y, lim.lattice)
        out["index_G_GprimeY"] = growth.relative_ab(G, Y, G)
    if args.format == "csv":
        return _csv(["order", "index", "abelianization_index"],
                    [(s.order, s.index, s.abelianization_index) for s in subs])
    return dumps(out)


def cmd_certify(args, lim):
    g = _graph(args)
    cert = certify.folner_search(g, args.budget, args.seed)
    out = {"vertices": g.m, "degree": g.d, "h_ver_upper": cert.ratio,
           "certificate": cert.to_dict(), "search": cert.info}
    if args.format == "csv":
        return _csv(["vertices", "degree", "num", "den", "method"],
                    [(g.m, g.d, cert.ratio.numerator, cert.ratio.denominator, cert.method)])
    return dumps(out)


def _int_list(text: str, what: str) -> list[int]:
    out = []
    for pos, tok in enumerate(text.split(",")):
        try:
            out.append(int(tok))
        except ValueError:
            raise ValueError(f"{what}: item {pos + 1} {tok!r} is not an integer") from None
    return out


def cmd_sweep(args, lim):
    fd = certify.FamilyDescriptor(
        name=_need(args, "family"), params=_int_list(_need(args, "params"), "--params"),
        s_rule=args.s, mode=args.mode or "certify", budget=args.budget, seed=args.seed,
        exact_limit=lim.exact, dense_limit=lim.dense, factor=args.factor)
    report = certify.family_sweep(fd, jobs=args.jobs)
    if args.cert_dir:
        d = Path(args.cert_dir)
        d.mkdir(parents=True, exist_ok=True)
        for r in report.rows:
            if r.certificate is not None:
                (d / f"{fd.name}-{r.param}.json").write_text(json.dumps(r.certificate, sort_keys=True) + "\n")
    if args.format == "csv":
        return report.to_csv()
    return report.to_json(certificates=not args.cert_dir)


def _parse_rows(text: str, what: str) -> list[list[int]]:
    return [_int_list(row, f"{what} row {i + 1}") for i, row in enumerate(text.split(";"))]


def cmd_lemma_minratio(args, lim):
    if args.rows:
        data = json.loads(Path(args.rows).read_text())
        a, b = data["a"], data["b"]
    else:
        a, b = _parse_rows(_need(args, "a"), "--a"), _parse_rows(_need(args, "b"), "--b")
    ks = certify.min_ratio_select(a, b)
    rows = []
    for ra, rb, k in zip(a, b, ks):
        ratios = [Fraction(x, y) for x, y in zip(ra, rb)]
        med = Fraction(sum(ra), sum(rb))
        rows.append({"k": k, "ratio": ratios[k - 1], "mediant": med,
                     "holds": min(ratios) <= med <= max(ratios) and ratios[k - 1] == min(ratios)})
    if args.format == "csv":
        return _csv(["k", "ratio", "mediant", "holds"],
                    [(r["k"], r["ratio"], r["mediant"], r["holds"]) for r in rows])
    return dumps({"rows": rows, "all_hold": all(r["holds"] for r in rows)})


def cmd_ratio_check(args, lim):
    res = growth.ratio_check(args.p, lim.lattice, lim.elements, args.seed)
    verdict = "PASS" if res["ok"] else "FAIL"
    if args.format == "json":
        return dumps(res | {"verdict": verdict})
    return f"{jsonable(res['ratio'])} {verdict}\n"


COMMANDS = {
    "group": (cmd_group, "build a group and report order, derived and lower central series"),
    "graph": (cmd_graph, "emit a Cayley or Schreier graph"),
    "hver": (cmd_hver, "vertex isoperimetric number (exact, or certified upper bound)"),
    "spectrum": (cmd_spectrum, "adjacency spectrum, gap and Cheeger bounds"),
    "abgrowth": (cmd_abgrowth, "abelianization growth ab_k"),
    "repgrowth": (cmd_repgrowth, "ab_k and Rep_k profiles"),
    "action-rep": (cmd_action_rep, "irreducible constituents of the natural permutation character"),
    "lw-check": (cmd_lw_check, "minimal c with |H:H'| <= c^|G:H|, absolute and above a stabilizer"),
    "certify": (cmd_certify, "search and verify a small-boundary set"),
    "sweep": (cmd_sweep, "sweep a graph family and report the decay verdict"),
    "lemma-minratio": (cmd_lemma_minratio, "minimal-ratio index per row and the mediant bound"),
    "ratio-check": (cmd_ratio_check, "p Rep_p / ab_p for C_p wr C_p against its closed form"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", help='group spec ("affine:13", "wreath:3", "psl2:7^2", "gens:FILE") '
                                         "or, for sweep, a family name")
    common.add_argument("--s", help='connection set, e.g. "t+1,t-1,m2,m2inv" or "pm1"')
    common.add_argument("--graph", choices=["schreier", "cayley"], default=None,
                        help="graph kind (default schreier)")
    common.add_argument("--k", type=int)
    common.add_argument("--params")
    common.add_argument("--mode", choices=["exact", "certify"])
    common.add_argument("--jobs", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--budget", type=int)
    common.add_argument("--out")
    common.add_argument("--format", choices=["json", "csv", "dot", "text"])
    common.add_argument("--config", help="key=value file merged under the flags")
    common.add_argument("--limits", help='overrides such as "exact:26,dense:4096,lattice:2000"')

    p = argparse.ArgumentParser(prog="expandergauge", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    subs = {}
    for name, (_, help_text) in COMMANDS.items():
        subs[name] = sub.add_parser(name, parents=[common], help=help_text)
    subs["spectrum"].add_argument("--method", choices=["lapack", "jacobi"], default="lapack")
    subs["repgrowth"].add_argument("--action", action="store_true", help="also Rep_k of the natural action")
    subs["repgrowth"].add_argument("--table", action="store_true", help="include the character table")
    subs["sweep"].add_argument("--factor", type=float, default=2.0)
    subs["sweep"].add_argument("--cert-dir", help="write certificates as sidecar files")
    subs["lemma-minratio"].add_argument("--a", help='rows "1,2;3,4"')
    subs["lemma-minratio"].add_argument("--b")
    subs["lemma-minratio"].add_argument("--rows", help='JSON file {"a": [[...]], "b": [[...]]}')
    subs["ratio-check"].add_argument("--p", type=int, required=True)
    return p


DEFAULTS = {"graph": "schreier", "jobs": 1, "seed": DEFAULT_SEED, "budget": certify.DEFAULT_BUDGET,
            "format": None}
INT_KEYS = {"k", "jobs", "seed", "budget", "p"}


def read_config(path: str) -> dict:
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{n}: expected key=value")
        key = key.strip().replace("-", "_")
        out[key] = int(val) if key in INT_KEYS else val.strip()
    return out


def resolve(args) -> RunConfig:
    """Merge config file under flags, then fill defaults."""
    if args.config:
        for key, val in read_config(args.config).items():
            if getattr(args, key, None) is None:
                setattr(args, key, val)
    for key, val in DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, val)
    if args.format is None:
        args.format = "text" if args.command == "ratio-check" else "json"
    lim = limits_from_env().merged(args.limits)
    for name in ("jobs", "budget"):
        if getattr(args, name) < 1:
            raise ValueError(f"--{name} must be positive")
    return RunConfig(args.command, args.family, args.s, lim, args.seed, args.out, args.format)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        text = COMMANDS[args.command][0](args, cfg.limits)
    except (ValueError, KeyError, WordError, CharacterError, OSError, ArithmeticError) as exc:
        print(f"expandergauge {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if not text.endswith("\n"):
        text += "\n"
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
