"""Command-line front end.

Every command resolves a :class:`RunConfig` (JSON file, then flag
overrides), runs one library operation, writes a JSON report that embeds
the resolved config, and prints one verdict line per check.

Exit codes: 0 pass, 1 fail, 2 inconclusive (argparse usage errors also
exit with 2).  ``--expect VERDICT`` turns a matching verdict into exit 0.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from contextlib import nullcontext
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np

from .dyadic import format_exact, parse_exact
from .independence import (
    DEFAULT_SEED,
    ShearletElements,
    admissibility_check,
    cone_slope_diagnostic,
    exact_edge_slope,
    expected_cone,
    frame_bound_sequence,
    gram,
    oversampling_containment,
    verify_min_support_lemma,
    verify_prop33,
)
from .mra1d import (
    FilterError,
    FrameHypothesisParams,
    cascade,
    check_decay,
    check_inf_phi,
    daubechies_filter,
    find_beta,
    fit_decay_constant,
    m0_positive_on_interval,
    phi_hat,
    psi_hat,
    wavelet_from_filter,
)
from .shearlet2d import (
    Cone,
    Rectangle,
    ShearletSystem,
    ShearletSystemSpec,
    enumerate_system,
    indices_json,
    polygons_svg,
    support_polygon,
)

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE = 0, 1, 2
SUITES = ("lemma31", "prop33", "cones", "gram", "hypotheses", "oversampling")


@dataclass
class RunConfig:
    """Resolved run parameters; see the README for the meaning of each key."""

    order: int = 2
    c1: str = "1/3"
    c2: str = "1/3"
    j_max: int = 1
    domain: list[str] = field(default_factory=lambda: ["0", "0", "3", "3"])
    selection: str = "inside"
    allow_inadmissible: bool = False
    cascade_level: int = 10
    quadrature_levels: list[int] = field(default_factory=lambda: [5, 6, 7])
    tolerance: float = 1e-6
    seed: int = DEFAULT_SEED
    output_dir: str = "shearcert-out"
    J: int = 1
    trials: int = 100
    offsets: list[str] = field(default_factory=lambda: ["0", "1/3", "2/3"])
    translation_window: int = 3
    prop33_levels: list[int] = field(default_factory=lambda: [9, 10, 11])
    cone_level: int = 6
    alpha: Optional[float] = None
    gamma: float = 5.0
    K1: Optional[float] = 1.0
    K2: Optional[float] = 1.0
    oversampling: list[int] = field(default_factory=lambda: [2, 3])
    frame_sizes: list[int] = field(default_factory=lambda: [10, 20, 40, 60])

    @classmethod
    def from_dict(cls, d: dict) -> RunConfig:
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def spec(self) -> ShearletSystemSpec:
        dom = Rectangle(*(parse_exact(v) for v in self.domain))
        return ShearletSystemSpec(
            self.order, self.c1, self.c2, self.j_max, dom, self.selection, self.allow_inadmissible
        )

    def params(self) -> FrameHypothesisParams:
        alpha = self.gamma + 0.5 if self.alpha is None else self.alpha
        return FrameHypothesisParams(alpha, self.gamma, self.K1 or 1.0, self.K2 or 1.0)


# -- helpers ----------------------------------------------------------------


def _dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_default) + "\n"


def _default(o: Any):
    if isinstance(o, Fraction):
        return format_exact(o)
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialise {type(o).__name__}")


def _write(cfg: RunConfig, name: str, text: str) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_text(text)
    return path


def _report(cfg: RunConfig, name: str, command: str, status: str, result: dict) -> Path:
    payload = {"command": command, "config": cfg.to_dict(), "status": status, "result": result}
    return _write(cfg, name, _dumps(payload))


def _line(check: str, status: str, detail: str = "") -> None:
    print(f"{check}: {status.upper()}" + (f" ({detail})" if detail else ""))


def _status_code(status: str) -> int:
    return {"pass": EXIT_PASS, "fail": EXIT_FAIL}.get(status, EXIT_INCONCLUSIVE)


def _gram_status(verdict: str, expect: Optional[str]) -> str:
    if expect is not None:
        return "pass" if verdict == expect else "fail"
    return {"independent": "pass", "dependent": "fail"}.get(verdict, "inconclusive")


def _thread_limit():
    raw = os.environ.get("SHEARCERT_THREADS")
    if not raw:
        return nullcontext()
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=max(1, int(raw)))


# -- suites -----------------------------------------------------------------


def run_lemma31(cfg: RunConfig) -> tuple[str, dict]:
    rep = verify_min_support_lemma(daubechies_filter(cfg.order), cfg.J, cfg.trials, cfg.seed)
    status = "pass" if rep.ok else "fail"
    _line(f"lemma31 N={cfg.order} J={cfg.J}", status, f"{rep.passed}/{rep.trials}")
    return status, rep.to_dict()


def run_prop33(cfg: RunConfig) -> tuple[str, dict]:
    w = cfg.translation_window
    res = verify_prop33(
        daubechies_filter(cfg.order),
        cfg.J,
        [parse_exact(t) for t in cfg.offsets],
        range(-w, w + 1),
        levels=cfg.prop33_levels,
        tol=cfg.tolerance,
    )
    status = {"independent": "pass", "hypothesis_failed": "fail", "dependent": "fail"}.get(res.verdict, "inconclusive")
    _line(f"prop33 J={cfg.J}", status, res.verdict)
    return status, res.to_dict()


def run_cones(cfg: RunConfig) -> tuple[str, dict]:
    spec = cfg.spec()
    system = ShearletSystem(spec)
    wrong, slope_errors, rows = [], [], []
    for ix in system.indices:
        got = cone_slope_diagnostic(system.evaluate(ix, cfg.cone_level)).verdict
        want = expected_cone(ix)
        exact = exact_edge_slope(ix, spec)
        if exact is not None:
            c = Fraction(2 ** -(-ix.j // 2))
            formula = abs(ix.k) / c if ix.cone is Cone.PSI else c / abs(ix.k)
            if exact != formula:
                slope_errors.append(ix.label())
        if got != want:
            wrong.append({"index": ix.to_dict(), "got": got, "expected": want})
        rows.append((ix.label(), got, format_exact(exact) if exact is not None else None))
    status = "pass" if not wrong and not slope_errors else "fail"
    n = len(system.indices)
    _line("cones", status, f"{n - len(wrong)}/{n} classified, {len(slope_errors)} exact slope mismatches")
    return status, {
        "elements": n,
        "misclassified": wrong,
        "exact_slope_mismatches": slope_errors,
        "level": cfg.cone_level,
        "classifications": [{"label": a, "verdict": b, "exact_slope": c} for a, b, c in rows],
    }


def run_gram(cfg: RunConfig, inject: Optional[int] = None, expect: Optional[str] = None) -> tuple[str, dict]:
    system = ShearletSystem(cfg.spec())
    src = ShearletElements(system, system.indices)
    if not src.indices:
        raise ValueError("the configured system has no elements")
    if inject is not None:
        src = src.with_duplicate(inject)
    rep = gram(src, cfg.quadrature_levels, tol=cfg.tolerance, seed=cfg.seed)
    _write(cfg, "gram.csv", rep.to_csv())
    status = _gram_status(rep.verdict, expect)
    _line(f"gram ({len(src.indices)} elements)", status, f"{rep.verdict}, sigma_rel={rep.sigma_rel:.3e}")
    out = rep.to_dict()
    out.update(injected_duplicate=inject, expected=expect)
    return status, out


def run_hypotheses(cfg: RunConfig) -> tuple[str, dict]:
    filt = daubechies_filter(cfg.order)
    L = cfg.cascade_level
    phi, psi = cascade(filt, L), wavelet_from_filter(filt, L)
    inf_ok, inf_val = check_inf_phi(phi)
    beta = find_beta(psi)
    m0_ok, m0_min = m0_positive_on_interval(cfg.order)
    params = cfg.params()
    xi = np.linspace(-64.0, 64.0, 4097)
    psi_vals, phi_vals = psi_hat(filt, xi), phi_hat(filt, xi)
    if cfg.K1 is None:
        params = dataclasses.replace(params, K1=fit_decay_constant(xi, psi_vals, params, "wavelet"))
    if cfg.K2 is None:
        params = dataclasses.replace(params, K2=fit_decay_constant(xi, phi_vals, params, "scaling"))
    wav = check_decay(xi, psi_vals, params, "wavelet")
    sca = check_decay(xi, phi_vals, params, "scaling")
    checks = {
        "inf_phi_hat": {"ok": inf_ok, "value": inf_val},
        "beta": {"ok": beta is not None, "value": format_exact(beta) if beta is not None else None},
        "m0_positive": {"ok": m0_ok, "min": m0_min},
        "decay_wavelet": wav.to_dict(),
        "decay_scaling": sca.to_dict(),
    }
    for name, c in checks.items():
        extra = f"first violation at xi={c['first_violation']:.6g}" if c.get("first_violation") is not None else ""
        _line(f"hypotheses {name}", "pass" if c["ok"] else "fail", extra)
    status = "pass" if all(c["ok"] for c in checks.values()) else "fail"
    return status, {"checks": checks, "params": dataclasses.asdict(params)}


def run_oversampling(cfg: RunConfig) -> tuple[str, dict]:
    spec = cfg.spec()
    reps = [oversampling_containment(spec, n) for n in cfg.oversampling]
    status = "pass"
    for n, r in zip(cfg.oversampling, reps):
        ok = r.contained and (r.equal if n == 1 else r.witness is not None)
        status = status if ok else "fail"
        _line(f"oversampling n={n}", "pass" if ok else "fail", r.conclusion)
    return status, {"reports": [r.to_dict() for r in reps]}


def run_frame_bounds(cfg: RunConfig) -> tuple[str, dict]:
    system = ShearletSystem(cfg.spec())
    sizes = sorted(set(cfg.frame_sizes))
    if not system.indices or sizes[-1] > len(system.indices):
        raise ValueError(f"need at least {sizes[-1]} enumerated elements, have {len(system.indices)}")
    src = ShearletElements(system, system.indices[: sizes[-1]])
    rep = frame_bound_sequence(src, [range(n) for n in sizes], cfg.quadrature_levels, tol=cfg.tolerance)
    status = "pass" if rep.nonincreasing and rep.infimum > 0 else "fail"
    _line("frame-bounds", status, f"inf A_N = {rep.infimum:.3e}")
    return status, rep.to_dict()


# -- commands ---------------------------------------------------------------


def cmd_filters(cfg: RunConfig, args) -> int:
    try:
        filt = daubechies_filter(cfg.order)
        filt.validate()
        status = "pass"
    except FilterError as exc:
        _line(f"filters N={cfg.order}", "fail", str(exc))
        return EXIT_FAIL
    result = filt.to_dict()
    print(_dumps(result), end="")
    _line(f"filters N={cfg.order}", status, f"qmf residual {filt.qmf_residual():.2e}")
    _report(cfg, "filters.json", "filters", status, result)
    return EXIT_PASS


def cmd_cascade(cfg: RunConfig, args) -> int:
    filt = daubechies_filter(cfg.order)
    phi, psi = cascade(filt, cfg.cascade_level), wavelet_from_filter(filt, cfg.cascade_level)
    _write(cfg, "phi.csv", phi.to_csv())
    _write(cfg, "psi.csv", psi.to_csv())
    result = {
        "phi": {"riemann_sum": phi.riemann_sum(), "support": [format_exact(phi.support_min), format_exact(phi.support_max)]},
        "psi": {"riemann_sum": psi.riemann_sum(), "norm2": psi.inner(psi)},
        "level": cfg.cascade_level,
    }
    _report(cfg, "cascade.json", "cascade", "pass", result)
    _line(f"cascade N={cfg.order} L={cfg.cascade_level}", "pass")
    return EXIT_PASS


def cmd_system(cfg: RunConfig, args) -> int:
    spec = cfg.spec()
    indices = enumerate_system(spec)
    _write(cfg, "system.json", indices_json(spec, indices))
    counts = {c.value: sum(1 for ix in indices if ix.cone is c) for c in Cone}
    adm = admissibility_check(cfg.order, spec.c, J=cfg.J) if args.check_admissibility else None
    result = {"count": len(indices), "per_cone": counts, "admissibility": adm.to_dict() if adm else None}
    status = "pass" if adm is None or adm.passed else "fail"
    _report(cfg, "system_report.json", "system", status, result)
    _line("system", status, f"{len(indices)} elements")
    return _status_code(status)


def cmd_gram(cfg: RunConfig, args) -> int:
    status, result = run_gram(cfg, args.inject_duplicate, args.expect)
    _report(cfg, "gram.json", "gram", status, result)
    return _status_code(status)


def cmd_verify(cfg: RunConfig, args) -> int:
    if args.suite == "gram":
        status, result = run_gram(cfg, args.inject_duplicate, args.expect)
    else:
        status, result = {
            "lemma31": run_lemma31,
            "prop33": run_prop33,
            "cones": run_cones,
            "hypotheses": run_hypotheses,
            "oversampling": run_oversampling,
        }[args.suite](cfg)
        if args.expect is not None:
            status = "pass" if status == args.expect else "fail"
    _report(cfg, f"verify_{args.suite}.json", f"verify {args.suite}", status, result)
    return _status_code(status)


def cmd_plot_support(cfg: RunConfig, args) -> int:
    spec = cfg.spec()
    indices = enumerate_system(spec)
    if args.cone:
        indices = [ix for ix in indices if ix.cone.value in args.cone]
    if args.j is not None:
        indices = [ix for ix in indices if ix.j in args.j]
    if not indices:
        print("plot-support: empty selection", file=sys.stderr)
        return EXIT_FAIL
    svg = polygons_svg([(ix, support_polygon(ix, spec)) for ix in indices], spec.domain)
    path = _write(cfg, args.name, svg)
    _line("plot-support", "pass", f"{len(indices)} polygons -> {path}")
    return EXIT_PASS


def cmd_frame_bounds(cfg: RunConfig, args) -> int:
    status, result = run_frame_bounds(cfg)
    _report(cfg, "frame_bounds.json", "frame-bounds", status, result)
    return _status_code(status)


def cmd_oversampling(cfg: RunConfig, args) -> int:
    status, result = run_oversampling(cfg)
    _report(cfg, "oversampling.json", "oversampling", status, result)
    return _status_code(status)


# -- argument parsing -------------------------------------------------------


def _positive_order(text: str) -> int:
    n = int(text)
    if not 1 <= n <= 20:
        raise argparse.ArgumentTypeError("filter order must lie in 1..20")
    return n


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("configuration (flags override --config)")
    g.add_argument("--config", type=Path, help="JSON file with RunConfig keys")
    g.add_argument("--order", "-N", type=_positive_order)
    g.add_argument("--c1")
    g.add_argument("--c2")
    g.add_argument("--j-max", dest="j_max", type=int)
    g.add_argument("--domain", nargs=4, metavar=("X0", "Y0", "X1", "Y1"))
    g.add_argument("--selection", choices=("intersects", "inside"))
    g.add_argument("--allow-inadmissible", action="store_const", const=True, default=None)
    g.add_argument("--cascade-level", dest="cascade_level", type=int)
    g.add_argument("--levels", dest="quadrature_levels", type=int, nargs="+")
    g.add_argument("--tol", dest="tolerance", type=float)
    g.add_argument("--seed", type=int)
    g.add_argument("--out", dest="output_dir")
    g.add_argument("--J", type=int)
    g.add_argument("--trials", type=int)
    g.add_argument("--offsets", nargs="+")
    g.add_argument("--window", dest="translation_window", type=int)
    g.add_argument("--cone-level", dest="cone_level", type=int)
    g.add_argument("--alpha", type=float)
    g.add_argument("--gamma", type=float)
    g.add_argument("--fit-constants", action="store_true", help="fit K1, K2 on the frequency grid")
    g.add_argument("--n", dest="oversampling", type=int, nargs="+")
    g.add_argument("--sizes", dest="frame_sizes", type=int, nargs="+")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shearcert", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        _add_config_flags(p)
        p.set_defaults(func=func)
        return p

    add("filters", cmd_filters, "print the Daubechies mask and its residuals")
    add("cascade", cmd_cascade, "sample the scaling function and wavelet")
    add("system", cmd_system, "enumerate the shearlet system").add_argument(
        "--check-admissibility", action="store_true"
    )
    for name, func, help_ in (
        ("gram", cmd_gram, "Gram certificate for the enumerated system"),
        ("verify", cmd_verify, "run a certification suite"),
    ):
        p = add(name, func, help_)
        if name == "verify":
            p.add_argument("suite", choices=SUITES)
        p.add_argument("--inject-duplicate", type=int, metavar="POS", help="append a copy of element POS")
        p.add_argument(
            "--expect",
            choices=("independent", "dependent", "inconclusive", "pass", "fail"),
            help="exit 0 when the outcome matches",
        )
    p = add("plot-support", cmd_plot_support, "SVG of the support polygons")
    p.add_argument("--cone", nargs="+", choices=[c.value for c in Cone])
    p.add_argument("--j", type=int, nargs="+")
    p.add_argument("--name", default="supports.svg")
    add("frame-bounds", cmd_frame_bounds, "lower frame bounds of nested subfamilies")
    add("oversampling", cmd_oversampling, "containment of SH(c) in SH(c/n)")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    base = json.loads(args.config.read_text()) if args.config else {}
    cfg = RunConfig.from_dict(base)
    for f in dataclasses.fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            setattr(cfg, f.name, v)
    if getattr(args, "fit_constants", False):
        cfg.K1 = cfg.K2 = None
    cfg.domain = [str(v) for v in cfg.domain]
    if args.command not in ("filters", "cascade"):
        cfg.spec()
    return cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
    except (ValueError, TypeError, OSError, json.JSONDecodeError) as exc:
        msg = str(exc)
        if "inadmissible" in msg:
            msg += " (pass --allow-inadmissible for negative-control runs)"
        parser.error(msg)
    try:
        with _thread_limit():
            return args.func(cfg, args)
    except ValueError as exc:
        print(f"shearcert: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
