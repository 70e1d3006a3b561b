"""Command-line front end: ``checkers {amp,grid,verify,series,paths}``.

Exit codes: 0 success, 1 a verification or certification failed, 2 usage error.

Amplitude rows (CSV header / JSON keys):
    x, t, line, g_re, g_im, k, re_float, im_float, prob_num, prob_exp
where the exact amplitude is (g_re + i g_im) * 2^(-k/2) and the probability
is prob_num / 2^prob_exp.  ``line`` is the absorbing column or ``free``.
Exact fields are blank in float mode.

Series rows:
    line, t_or_k, term, partial_sum, target, tail_bound, residual, verdict
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Optional

from . import closed_form, engine, oracle, series
from .arith import GaussianInt, HalfPowerAmplitude, amp_norm_sq, amp_to_float

AMP_FIELDS = ["x", "t", "line", "g_re", "g_im", "k", "re_float", "im_float", "prob_num", "prob_exp"]
SERIES_FIELDS = ["line", "t_or_k", "term", "partial_sum", "target", "tail_bound", "residual", "verdict"]
PATH_FIELDS = ["moves", "x", "t", "turns", "g_re", "g_im", "k"]

DEFAULTS = {"exact_t_max": engine.DEFAULT_EXACT_T_MAX, "oracle_t_max": 14, "series_k_max": 100_000}


class UsageError(Exception):
    pass


def _fmt_float(v: Optional[float]) -> str:
    return "" if v is None else f"{v:.17g}"


def _line_label(cfg: engine.AbsorptionConfig):
    return "free" if cfg.line is None else cfg.line


def amp_record(x: int, t: int, cfg: engine.AbsorptionConfig, value) -> dict:
    """One amplitude row; ``value`` is a HalfPowerAmplitude (exact) or complex (float)."""
    if isinstance(value, HalfPowerAmplitude):
        z = amp_to_float(value)
        p = amp_norm_sq(value)
        return {
            "x": x, "t": t, "line": _line_label(cfg),
            "g_re": value.g.re, "g_im": value.g.im, "k": value.k,
            "re_float": z.real, "im_float": z.imag,
            "prob_num": p.num, "prob_exp": p.exp,
        }
    return {
        "x": x, "t": t, "line": _line_label(cfg),
        "g_re": None, "g_im": None, "k": None,
        "re_float": value.real, "im_float": value.imag,
        "prob_num": None, "prob_exp": None,
    }


def record_amplitude(rec: dict) -> HalfPowerAmplitude:
    """Rebuild the exact amplitude from a parsed row."""
    return HalfPowerAmplitude(GaussianInt(int(rec["g_re"]), int(rec["g_im"])), int(rec["k"]))


def write_rows(rows: list[dict], fields: list[str], fmt: str, out) -> None:
    if fmt == "json":
        json.dump(rows, out, indent=1)
        out.write("\n")
        return
    w = csv.DictWriter(out, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _fmt_float(v) if isinstance(v, float) else ("" if v is None else v)
                    for k, v in r.items()})


def read_rows(text: str, fmt: str) -> list[dict]:
    if fmt == "json":
        return json.loads(text)
    return list(csv.DictReader(io.StringIO(text)))


def _cfg(args) -> engine.AbsorptionConfig:
    return engine.FREE if args.free or args.line is None else engine.bypass(args.line)


# --- amp / grid / paths ----------------------------------------------------

def cmd_amp(args, conf, out) -> int:
    if args.t < 1:
        raise UsageError("t must be >= 1")
    cfg = _cfg(args)
    if args.mode == "exact":
        if args.t > conf["exact_t_max"]:
            raise UsageError(f"t={args.t} exceeds exact_t_max={conf['exact_t_max']}; use --mode float")
        value = engine.Lattice(cfg, conf["exact_t_max"]).amplitude(args.x, args.t)
    else:
        value = _float_amplitude(args.x, args.t, cfg)
    rec = amp_record(args.x, args.t, cfg, value)
    if args.format == "json":
        json.dump(rec, out)
        out.write("\n")
    else:
        write_rows([rec], AMP_FIELDS, "csv", out)
    return 0


def _float_amplitude(x: int, t: int, cfg: engine.AbsorptionConfig) -> complex:
    state = engine.run(t, cfg, "float")
    if x == cfg.line:
        return dict(state.absorbed).get(t, 0j)
    return state.amplitude_at(x)


def grid_records(t_max: int, cfg: engine.AbsorptionConfig, mode: str = "exact",
                 exact_t_max: int = engine.DEFAULT_EXACT_T_MAX) -> list[dict]:
    """One row per light-cone cell ``(x, t)``, ``1 <= t <= t_max``."""
    rows = []
    for state in engine.trajectory(t_max, cfg, mode, exact_t_max):
        arrivals = dict(state.absorbed)
        for x in state.xs():
            if x == cfg.line:
                value = arrivals.get(state.t, engine.AMP_ZERO if mode == "exact" else 0j)
            else:
                value = state.amplitude_at(x)
            rows.append(amp_record(x, state.t, cfg, value))
    return rows


def svg_bar_chart(probs: list[tuple[int, float]], title: str, width: int = 640, height: int = 360) -> str:
    """Minimal SVG 1.1 bar chart; each bar carries its probability in ``data-p``."""
    margin = 40
    plot_w = width - 2 * margin
    plot_h = height - 2 * margin
    top = max((p for _, p in probs), default=0.0) or 1.0
    bar_w = plot_w / max(len(probs), 1)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}">',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
        f'<text x="{margin - 4}" y="{margin + 4}" text-anchor="end" font-size="10">{top:.3g}</text>',
    ]
    for i, (x, p) in enumerate(probs):
        h = plot_h * p / top
        left = margin + i * bar_w
        parts.append(
            f'<rect x="{left:.2f}" y="{height - margin - h:.2f}" width="{bar_w * 0.9:.2f}" '
            f'height="{h:.2f}" fill="steelblue" data-x="{x}" data-p="{p:.17g}"/>'
        )
    if probs:
        for i in (0, len(probs) - 1):
            x = probs[i][0]
            parts.append(
                f'<text x="{margin + (i + 0.45) * bar_w:.2f}" y="{height - margin + 14}" '
                f'text-anchor="middle" font-size="10">{x}</text>'
            )
    parts.append(f'<text x="{width / 2:.1f}" y="{height - 8}" text-anchor="middle" font-size="12">x</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_grid(args, conf, out) -> int:
    if args.t_max < 1:
        raise UsageError("t_max must be >= 1")
    if args.mode == "exact" and args.t_max > conf["exact_t_max"]:
        raise UsageError(f"t_max={args.t_max} exceeds exact_t_max={conf['exact_t_max']}")
    cfg = _cfg(args)
    if args.format == "svg":
        state = engine.run(args.t_max, cfg, args.mode, conf["exact_t_max"])
        probs = []
        for x in state.xs():
            a = state.amplitude_at(x)
            probs.append((x, float(amp_norm_sq(a)) if args.mode == "exact" else abs(a) ** 2))
        out.write(svg_bar_chart(probs, f"P(x, {args.t_max}) {cfg}"))
        return 0
    write_rows(grid_records(args.t_max, cfg, args.mode, conf["exact_t_max"]), AMP_FIELDS, args.format, out)
    return 0


def cmd_paths(args, conf, out) -> int:
    if args.t < 1:
        raise UsageError("t must be >= 1")
    cfg = _cfg(args)
    try:
        paths = oracle.enumerate_paths(args.x, args.t, cfg, cap=conf["oracle_cap"])
    except oracle.CapExceeded as e:
        raise UsageError(str(e)) from e
    rows = []
    for p in paths:
        w = p.weight()
        rows.append({"moves": p.moves, "x": args.x, "t": args.t, "turns": p.turns(),
                     "g_re": w.g.re, "g_im": w.g.im, "k": w.k})
    write_rows(rows, PATH_FIELDS, args.format, out)
    return 0


# --- verify ---------------------------------------------------------------

ORACLE_CONFIGS = (None, -1, 0, 2, 3)


def oracle_mismatches(line: Optional[int], t: int) -> list[str]:
    """Light-cone cells of row ``t`` where the engine and the path sum disagree."""
    cfg = engine.AbsorptionConfig(line)
    row = oracle.oracle_row(t, cfg)
    bad = []
    for x in range(-t, t + 1):
        lhs = engine.amplitude(x, t, cfg)
        rhs = row.get(x, engine.AMP_ZERO)
        if lhs != rhs:
            bad.append(f"{cfg} x={x} t={t}: engine={lhs} oracle={rhs}")
    return bad


def _oracle_job(job):
    return oracle_mismatches(*job)


def worker_count() -> int:
    env = os.environ.get("CHECKERS_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"CHECKERS_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def run_suite(name: str, t_max: int, oracle_t_max: int) -> list[dict]:
    """Run one suite; each result is ``{"check", "t", "holds", "detail"}``."""
    results = []

    def add(check, t, holds, detail=""):
        results.append({"check": check, "t": t, "holds": bool(holds), "detail": detail})

    if name == "theorem1":
        cfg = engine.bypass(0)
        for t in range(1, t_max + 1):
            lhs = engine.amplitude(0, t, cfg)
            rhs = closed_form.theorem1_amplitude(t)
            add("theorem1", t, lhs == rhs, f"engine={lhs} closed={rhs}")
        if t_max // 2 >= 3:
            add("theorem1_induction", t_max // 2, closed_form.theorem1_induction_check(t_max // 2))
    elif name == "lemmas":
        checks = [(closed_form.verify_lemma1, 3), (closed_form.verify_lemma2, 3),
                  (closed_form.verify_lemma3, 4), (closed_form.verify_proposition1, 4)]
        for fn, lo in checks:
            for t in range(lo, t_max + 1):
                r = fn(t)
                add(r.identity, t, r.holds, f"lhs={r.lhs} rhs={r.rhs}")
        for n in range(3, t_max // 2 + 1):
            r = closed_form.verify_lemma4(n)
            add("lemma4", n, r.holds, f"lhs={r.lhs} rhs={r.rhs}")
    elif name == "oracle":
        depth = min(t_max, oracle_t_max)
        jobs = [(line, t) for line in ORACLE_CONFIGS for t in range(1, depth + 1)]
        workers = min(worker_count(), len(jobs))
        if workers > 1:
            with ProcessPoolExecutor(workers) as pool:
                outcomes = list(pool.map(_oracle_job, jobs))
        else:
            outcomes = [_oracle_job(j) for j in jobs]
        for (line, t), bad in zip(jobs, outcomes):
            add(f"oracle[{engine.AbsorptionConfig(line)}]", t, not bad, "; ".join(bad))
    elif name == "bijections":
        depth = min(t_max, oracle_t_max)
        reports = [oracle.check_lemma1(t) for t in range(3, depth)]
        reports += [oracle.check_lemma2(t) for t in range(3, depth + 1)]
        for t in range(4, depth + 1):
            reports += oracle.check_lemma3(t)
        reports += [oracle.check_lemma4(n) for n in range(3, depth // 2 + 1)]
        for r in reports:
            add(r.name, r.t, r.holds, r.detail)
    else:
        raise UsageError(f"unknown suite {name!r}")
    return results


def cmd_verify(args, conf, out) -> int:
    suites = ["theorem1", "lemmas", "oracle", "bijections"] if args.suite == "all" else [args.suite]
    t_max = args.t_max if args.t_max is not None else 200
    if t_max < 1:
        raise UsageError("--t-max must be >= 1")
    if t_max > conf["exact_t_max"] - 1:
        raise UsageError(f"--t-max {t_max} needs exact rows beyond exact_t_max={conf['exact_t_max']}")
    report = {}
    for s in suites:
        report[s] = run_suite(s, t_max, conf["oracle_t_max"])
    failures = [r for rs in report.values() for r in rs if not r["holds"]]
    if args.format == "json":
        json.dump({"suites": report, "all_hold": not failures}, out, indent=1)
        out.write("\n")
    else:
        for s, rs in report.items():
            ok = sum(r["holds"] for r in rs)
            out.write(f"{s}: {ok}/{len(rs)} hold\n")
        for r in failures:
            out.write(f"FAIL {r['check']} t={r['t']}: {r['detail']}\n")
        out.write("all hold\n" if not failures else f"{len(failures)} failures\n")
    return 1 if failures else 0


# --- series ---------------------------------------------------------------

def _decades(n: int) -> list[int]:
    out = []
    c = 1
    while c < n:
        out.append(c)
        c *= 10
    return out + [n]


def series_rows(line: int, k_max: Optional[int], t_max: Optional[int], use_engine: bool, mode: str):
    if use_engine:
        reports = series.engine_checkpoints(line, t_max, mode, _decades(t_max))
    else:
        reports = series.partial_sums_closed(line, k_max, _decades(k_max))
    rows = [
        {"line": line, "t_or_k": r.index, "term": r.last_term, "partial_sum": r.partial_sum,
         "target": r.target, "tail_bound": r.tail_bound, "residual": r.residual, "verdict": r.verdict}
        for r in reports
    ]
    return rows, reports[-1]


def cmd_series(args, conf, out) -> int:
    use_engine = args.engine or args.t_max is not None
    if use_engine:
        t_max = args.t_max if args.t_max is not None else 200
        if t_max < 1:
            raise UsageError("--t-max must be >= 1")
        if args.mode == "exact" and t_max > conf["exact_t_max"]:
            raise UsageError(f"--t-max {t_max} exceeds exact_t_max={conf['exact_t_max']}")
        rows, final = series_rows(args.line, None, t_max, True, args.mode)
    else:
        k_max = args.k_max if args.k_max is not None else conf["series_k_max"]
        if k_max < 1:
            raise UsageError("--k-max must be >= 1")
        if args.line not in series.SUPPORTED_LINES:
            raise UsageError(f"no closed form for line {args.line}; use --engine")
        rows, final = series_rows(args.line, k_max, None, False, args.mode)
    write_rows(rows, SERIES_FIELDS, args.format, out)
    print(f"line {args.line}: partial sum {final.partial_sum:.17g} "
          f"target {_fmt_float(final.target) or '-'} tail bound {_fmt_float(final.tail_bound) or '-'} "
          f"-> {final.verdict}", file=sys.stderr)
    return 1 if final.verdict == "failed" else 0


# --- entry point ----------------------------------------------------------

def load_config(path: Optional[str]) -> dict:
    conf = dict(DEFAULTS)
    conf["oracle_cap"] = oracle.DEFAULT_CAP
    if path:
        parser = configparser.ConfigParser()
        try:
            with open(path) as fh:
                parser.read_string("[checkers]\n" + fh.read())
        except (OSError, configparser.Error) as e:
            raise UsageError(f"cannot read config {path}: {e}") from e
        for key, value in parser["checkers"].items():
            if key not in conf:
                raise UsageError(f"unknown config key {key!r}")
            try:
                conf[key] = int(value)
            except ValueError:
                raise UsageError(f"config key {key!r} needs an integer, got {value!r}") from None
    conf["oracle_cap"] = max(conf["oracle_cap"], conf["oracle_t_max"])
    return conf


def _add_line_flags(p: argparse.ArgumentParser, default_line: Optional[int] = None) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--line", type=int, default=default_line, help="absorbing column x0")
    g.add_argument("--free", action="store_true", help="no absorption")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="checkers",
        description="Feynman checkers with an absorbing line: exact amplitudes, identities, series.",
        epilog=__doc__.split("\n\n", 1)[1] if __doc__ else None,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--config", help="key=value file setting exact_t_max, oracle_t_max, series_k_max")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("amp", help="amplitude and probability at one point")
    a.add_argument("x", type=int)
    a.add_argument("t", type=int)
    _add_line_flags(a)
    a.add_argument("--mode", choices=["exact", "float"], default="exact")
    a.add_argument("--format", choices=["json", "csv"], default="json")

    g = sub.add_parser("grid", help="all light-cone amplitudes up to t_max (CSV/JSON) or an SVG of P(x, t_max)")
    g.add_argument("t_max", type=int)
    _add_line_flags(g)
    g.add_argument("--mode", choices=["exact", "float"], default="exact")
    g.add_argument("--format", choices=["csv", "json", "svg"], default="csv")

    v = sub.add_parser("verify", help="check identities and engine/oracle agreement")
    v.add_argument("--suite", choices=["lemmas", "theorem1", "oracle", "bijections", "all"], default="all")
    v.add_argument("--t-max", type=int, default=None)
    v.add_argument("--format", choices=["text", "json"], default="text")

    s = sub.add_parser("series", help="absorption-probability partial sums and certification")
    s.add_argument("--line", type=int, default=0)
    s.add_argument("--k-max", type=int, default=None, help="last closed-form family index")
    s.add_argument("--t-max", type=int, default=None, help="sum lattice arrivals up to this time (implies --engine)")
    s.add_argument("--engine", action="store_true", help="sum arrivals from the lattice instead of the closed form")
    s.add_argument("--mode", choices=["exact", "float"], default="exact")
    s.add_argument("--format", choices=["json", "csv"], default="csv")

    pa = sub.add_parser("paths", help="list the checker paths contributing to a(x, t)")
    pa.add_argument("x", type=int)
    pa.add_argument("t", type=int)
    _add_line_flags(pa)
    pa.add_argument("--format", choices=["json", "csv"], default="csv")
    return p


COMMANDS = {"amp": cmd_amp, "grid": cmd_grid, "verify": cmd_verify, "series": cmd_series, "paths": cmd_paths}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        conf = load_config(args.config)
        return COMMANDS[args.command](args, conf, out)
    except (UsageError, engine.ExactCapExceeded) as e:
        print(f"checkers: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
