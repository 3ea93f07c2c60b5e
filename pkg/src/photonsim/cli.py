"""Command line front end: ``photonsim <subcommand>``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, capacity, checks, cv, fock, measurement, qkd, tomography
from . import linear_optics as lo
from ._accel import backend_name, configure_threads

SCHEMA = 1
EXIT_OK = 0
EXIT_INPUT = 1
EXIT_USAGE = 2
EXIT_EXPECTATION = 3

CSV_HELP = """\
CSV layouts (--format csv):
  simulate      occupation,probability (one row per detector pattern)
  demo          metric,value,expected,tolerance,passed
  demo teleport-cv with --gain-sweep
                g,G,V_plus,V_minus,F,T_q,V_q
  capacity      nbar,coherent_homodyne,coherent_heterodyne,squeezed_homodyne,number_states
  tomography    row,col,re,im
  qkd bb84      sifted_length,disclosed,errors,qber,decision
  qkd bb84 --transcript FILE writes pulse,alice_basis,bob_basis,bit,kept
  selftest      criterion,metric,value,expected,tolerance,passed

Counts CSV read by `tomography`: setting,outcome,count where multi-qubit
settings and outcomes are comma-joined inside quotes, e.g. "HV,DA","H,A",120.

JSON output always carries "schema", "version" and "seed".
"""


class InputError(ValueError):
    pass


def _range_spec(text: str) -> np.ndarray:
    try:
        a, b, n = text.split(":")
        return np.linspace(float(a), float(b), int(n))
    except ValueError as exc:
        raise InputError(f"expected start:stop:count, got {text!r}") from exc


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()


def _emit(args, payload: dict, rows: list[dict]) -> None:
    if args.format == "csv":
        text = _rows_to_csv(rows)
    else:
        doc = {"schema": SCHEMA, "version": __version__, "seed": args.seed, "backend": backend_name()}
        doc.update(payload)
        text = json.dumps(doc, indent=2, default=_json_default) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _metric_report(metrics: list[checks.Metric], scale: float) -> tuple[dict, list[dict], bool]:
    report = {m.name: m.to_dict(scale) for m in metrics}
    rows = [{"metric": m.name, **{k: report[m.name].get(k) for k in ("value", "expected", "tolerance", "passed")}}
            for m in metrics]
    ok = all(m.passed(scale) is not False for m in metrics)
    return report, rows, ok


def _read_text(value: str) -> str:
    path = Path(value)
    if path.exists():
        return path.read_text()
    return value


# --- subcommands --------------------------------------------------------------


def cmd_simulate(args) -> int:
    try:
        circuit = lo.load_circuit(_read_text(args.circuit))
        psi = fock.PureState.from_json(_read_text(args.input))
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    out = lo.run_circuit(circuit, psi)
    modes = list(range(out.mode_count))
    dist = measurement.outcome_distribution(out, modes)
    rows = [{"occupation": " ".join(map(str, occ)), "probability": p} for occ, p in sorted(dist.items())]
    _emit(args, {"state": out.to_dict(), "distribution": rows}, rows)
    return EXIT_OK


def _demo_teleport_cv(args) -> int:
    if args.gain_sweep:
        g_ent = args.G if args.G > 0 else None
        rows = cv.gain_sweep(_range_spec(args.gain_sweep), g_ent, args.alpha)
        _emit(args, {"demo": "teleport-cv", "parameters": {"G": args.G, "alpha": args.alpha}, "rows": rows}, rows)
        return EXIT_OK
    rng = np.random.default_rng(args.seed)
    return _demo_metrics(args, "teleport-cv", checks.cv_teleportation(rng, args.shots), {"shots": args.shots})


def _demo_metrics(args, name: str, metrics, parameters: dict) -> int:
    report, rows, ok = _metric_report(metrics, args.tolerance_scale)
    _emit(args, {"demo": name, "parameters": parameters, "metrics": report, "passed": ok}, rows)
    return EXIT_OK if ok else EXIT_EXPECTATION


DEMOS = {
    "hom": lambda a, rng: checks.hong_ou_mandel(),
    "klm": lambda a, rng: checks.klm_cnot(),
    "coincidence": lambda a, rng: checks.coincidence_cnot(),
    "teleport-cs": lambda a, rng: checks.teleport_cs(),
    "t3": lambda a, rng: checks.t3_teleporter(rng),
    "parity": lambda a, rng: checks.parity_fusion(rng, a.trials),
    "cluster": lambda a, rng: checks.cluster_rotation(rng),
    "grover": lambda a, rng: checks.grover_search(a.n),
    "tv": lambda a, rng: checks.tv_diagram(),
    "tomography": lambda a, rng: checks.tomography_checks(rng, a.shots * 10),
    "bb84": lambda a, rng: checks.bb84(a.pulses, a.seed),
    "sources": lambda a, rng: checks.sources(),
}


def cmd_demo(args) -> int:
    if args.name == "teleport-cv":
        return _demo_teleport_cv(args)
    if args.name == "grover" and (args.n < 2 or args.n & (args.n - 1)):
        raise InputError("--n must be a power of two")
    rng = np.random.default_rng(args.seed)
    metrics = DEMOS[args.name](args, rng)
    params = {"n": args.n} if args.name == "grover" else {}
    return _demo_metrics(args, args.name, metrics, params)


def cmd_capacity(args) -> int:
    if args.nbar_grid:
        grid = _range_spec(args.nbar_grid)
    elif args.nbar is not None:
        grid = np.array([args.nbar])
    else:
        raise InputError("give --nbar or --nbar-grid")
    rows = []
    for nbar in grid:
        try:
            rows.append({"nbar": float(nbar), **capacity.capacities(float(nbar))})
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    _emit(args, {"rows": rows, "coherent_crossover_nbar": capacity.crossover()}, rows)
    return EXIT_OK


def cmd_tomography(args) -> int:
    try:
        counts = tomography.counts_from_csv(Path(args.counts).read_text())
    except OSError as exc:
        raise InputError(str(exc)) from exc
    rho = tomography.reconstruct(counts, args.normalization, physical=not args.raw)
    rows = [
        {"row": i, "col": j, "re": rho[i, j].real, "im": rho[i, j].imag}
        for i in range(rho.shape[0])
        for j in range(rho.shape[1])
    ]
    payload = {"rho": {"re": rho.real, "im": rho.imag}, "normalization": args.normalization,
               "projected": not args.raw}
    _emit(args, payload, rows)
    return EXIT_OK


def cmd_qkd(args) -> int:
    if args.protocol == "bb84":
        cfg = qkd.Bb84Config(
            args.pulses, args.loss, args.depolarize, args.eve, args.seed, abort_qber=args.abort_qber
        )
        report = qkd.run_bb84(cfg)
        if args.transcript:
            Path(args.transcript).write_text(report.transcript_csv())
        summary = report.summary()
        _emit(args, {"protocol": "bb84", "report": summary},
              [{k: summary[k] for k in ("sifted_length", "disclosed", "errors", "qber", "decision")}])
        return EXIT_OK
    result = qkd.run_cv_qkd(args.pulses, args.variance, args.loss, args.seed, args.eve != "none")
    _emit(args, {"protocol": "cv", "report": result}, [result])
    return EXIT_OK


def cmd_selftest(args) -> int:
    report = {}
    rows = []
    all_ok = True
    for name, fn in checks.acceptance_table(args.seed):
        metrics = fn()
        r, metric_rows, ok = _metric_report(metrics, args.tolerance_scale)
        report[name] = {"passed": ok, "metrics": r}
        rows += [{"criterion": name, **row} for row in metric_rows]
        all_ok &= ok
        print(f"{'PASS' if ok else 'FAIL'} {name}", file=sys.stderr)
    _emit(args, {"selftest": report, "passed": all_ok}, rows)
    return EXIT_OK if all_ok else EXIT_EXPECTATION


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("--out", help="write the report to this file instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--tolerance-scale", type=float, default=1.0,
                        help="multiply every built-in tolerance by this factor")

    parser = argparse.ArgumentParser(
        prog="photonsim", description=__doc__, parents=[common],
        formatter_class=argparse.RawDescriptionHelpFormatter, epilog=CSV_HELP,
    )
    parser.add_argument("--version", action="version", version=f"photonsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("simulate", parents=[common], help="propagate a Fock state through a JSON circuit")
    p.add_argument("circuit", help="circuit JSON file (list of {kind, modes, params})")
    p.add_argument("--input", required=True, help="state JSON, inline or as a file path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("demo", parents=[common], help="run a named demonstration with its expectations")
    p.add_argument("name", choices=sorted([*DEMOS, "teleport-cv"]))
    p.add_argument("--n", type=int, default=4, help="grover database size")
    p.add_argument("--gain-sweep", help="teleport-cv: feed-forward gains start:stop:count")
    p.add_argument("--G", type=float, default=0.0, help="teleport-cv: EPR gain (0 = no entanglement)")
    p.add_argument("--alpha", type=float, default=10.0, help="teleport-cv: coherent amplitude")
    p.add_argument("--shots", type=int, default=100_000)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--pulses", type=int, default=100_000)
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("capacity", parents=[common], help="channel capacities versus mean photon number")
    p.add_argument("--nbar", type=float)
    p.add_argument("--nbar-grid", help="start:stop:count")
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("tomography", parents=[common], help="reconstruct a density matrix from counts CSV")
    p.add_argument("counts")
    p.add_argument("--normalization", choices=("per_basis", "printed", "reference"), default="per_basis")
    p.add_argument("--raw", action="store_true", help="skip the projection onto physical states")
    p.set_defaults(func=cmd_tomography)

    p = sub.add_parser("qkd", parents=[common], help="key distribution runs")
    p.add_argument("protocol", choices=("bb84", "cv"))
    p.add_argument("--pulses", type=int, default=100_000)
    p.add_argument("--eve", choices=("none", "intercept", "intercept-random"), default="none")
    p.add_argument("--loss", type=float, default=0.0)
    p.add_argument("--depolarize", type=float, default=0.0)
    p.add_argument("--abort-qber", type=float, default=qkd.DEFAULT_ABORT_QBER)
    p.add_argument("--variance", type=float, default=10.0, help="cv: modulation variance")
    p.add_argument("--transcript", help="bb84: write the per-pulse transcript CSV here")
    p.set_defaults(func=cmd_qkd)

    p = sub.add_parser("selftest", parents=[common], help="run the built-in acceptance table")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    configure_threads()
    parser = build_parser()
    args = parser.parse_args(argv)
    if not math.isfinite(args.tolerance_scale) or args.tolerance_scale < 0:
        parser.error("--tolerance-scale must be a non-negative number")
    try:
        return args.func(args)
    except (InputError, ValueError, qkd.ProtocolError) as exc:
        print(f"photonsim: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
