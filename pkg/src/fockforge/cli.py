"""Command-line harness: verification suites, single protocol runs, and
parameter sweeps with machine-readable output.

Exit codes: 0 all checks passed, 1 any check failed or a cutoff-adequacy
warning fired, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from .fock import Cutoff, CutoffWarning, PolarParam
from .formulas import (
    check_J_rotation,
    check_K_rotation,
    check_SDS,
    check_SSS_commute,
    check_UJ_squeeze_invariance,
    check_phase_formula,
    check_squeeze_conjugation,
)
from .lie import (
    SpinK,
    schwinger_su2,
    schwinger_su11,
    single_mode_su11,
    su2_generators,
    su11_generators,
    SpinJ,
)
from .protocols import (
    CLONE_CUTOFF,
    SWAP_CUTOFF,
    apply_beamsplitter,
    full_swap,
    imperfect_clone,
    squeezed_swap_obstruction,
)
from .report import Report, make_report
from .states import coherent, fidelity, perelomov_su11, squeeze, vacuum
from .universal_swap import cnot_factorization, no_cloning_witness, swap_matrix, apply_swap
from fractions import Fraction

ENV_NMAX = "FOCKFORGE_NMAX"
DEFAULT_TOL = 1e-6
DEFAULT_SEED = 7
VERIFY_DRAWS = 3


@dataclass
class RunConfig:
    """Validated CLI configuration; n_max None means per-check defaults."""

    n_max: int | None = None
    margin: int | None = None  # None means automatic per-check policy
    tolerance: float = DEFAULT_TOL
    seed: int = DEFAULT_SEED
    output_format: str = "json"
    output_path: str | None = None

    def cutoff(self, fallback: Cutoff | None = None) -> Cutoff | None:
        if self.n_max is not None:
            return Cutoff(self.n_max)
        return fallback

    def to_json_dict(self) -> dict:
        return {
            "n_max": self.n_max,
            "margin": self.margin if self.margin is not None else "auto",
            "tolerance": self.tolerance,
            "seed": self.seed,
            "format": self.output_format,
        }


class ConfigError(ValueError):
    pass


def _build_config(args) -> RunConfig:
    n_max = args.nmax
    if n_max is None:
        env = os.environ.get(ENV_NMAX)
        if env is not None:
            try:
                n_max = int(env)
            except ValueError:
                raise ConfigError(f"{ENV_NMAX} must be an integer, got {env!r}")
    if n_max is not None and n_max < 1:
        raise ConfigError(f"--nmax must be >= 1, got {n_max}")
    margin = None
    if args.margin is not None and args.margin != "auto":
        try:
            margin = int(args.margin)
        except ValueError:
            raise ConfigError(f"--margin must be an integer or 'auto', got {args.margin!r}")
        if margin < 0:
            raise ConfigError("--margin must be non-negative")
        if n_max is not None and margin > n_max:
            raise ConfigError(f"--margin {margin} exceeds --nmax {n_max}")
    if args.tol <= 0:
        raise ConfigError(f"--tol must be positive, got {args.tol}")
    return RunConfig(
        n_max=n_max,
        margin=margin,
        tolerance=args.tol,
        seed=args.seed,
        output_format=args.format,
        output_path=args.out,
    )


def _emit(text: str, config: RunConfig):
    if config.output_path:
        with open(config.output_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run_collecting_warnings(fn):
    """Run a check, folding any truncation warnings into its report messages."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", CutoffWarning)
        result = fn()
    messages = tuple(
        str(w.message) for w in caught if issubclass(w.category, CutoffWarning)
    )
    return result, messages


# ---------------------------------------------------------------------------
# verify-all suite


def _draw(rng, low, high):
    return float(rng.uniform(low, high))


def _draw_param(rng, low, high) -> PolarParam:
    return PolarParam.from_polar(_draw(rng, low, high), _draw(rng, -math.pi, math.pi))


def _formulas_reports(config: RunConfig, rng) -> list:
    cut = config.cutoff()
    marg = config.margin
    tol = config.tolerance
    reports = []
    for _ in range(VERIFY_DRAWS):
        reports.append(
            check_J_rotation(_draw_param(rng, 0.05, 1.0), cut, marg, tol)
        )
    for _ in range(VERIFY_DRAWS):
        reports.append(
            check_K_rotation(_draw_param(rng, 0.05, 0.5), cut, marg, tol)
        )
    for _ in range(VERIFY_DRAWS):
        reports.append(
            check_squeeze_conjugation(_draw_param(rng, 0.05, 0.8), cut, marg, tol)
        )
    for _ in range(VERIFY_DRAWS):
        reports.append(
            check_SDS(
                _draw_param(rng, 0.05, 0.8), _draw_param(rng, 0.1, 1.0), cut, marg, tol
            )
        )
    for _ in range(VERIFY_DRAWS):
        phase = _draw(rng, -math.pi, math.pi)
        eps = PolarParam.from_polar(_draw(rng, 0.05, 0.8), phase)
        alp = PolarParam.from_polar(_draw(rng, 0.05, 0.8), phase)
        reports.append(check_SSS_commute(eps, alp, cut, marg, tol))
    for _ in range(VERIFY_DRAWS):
        reports.append(
            check_phase_formula(
                _draw(rng, -math.pi, math.pi), _draw_param(rng, 0.1, 2.0), cut, marg, tol
            )
        )
    for _ in range(VERIFY_DRAWS):
        reports.append(
            check_UJ_squeeze_invariance(
                _draw_param(rng, 0.05, 1.0), _draw_param(rng, 0.05, 0.5), cut, marg, tol
            )
        )
    return reports


def _protocol_reports(config: RunConfig, rng) -> list:
    tol = config.tolerance
    swap_cut = config.cutoff(SWAP_CUTOFF)
    clone_cut = config.cutoff(CLONE_CUTOFF)
    reports = []
    for _ in range(VERIFY_DRAWS):
        a1 = _draw_param(rng, 0.0, 1.5)
        a2 = _draw_param(rng, 0.0, 1.5)
        delta = _draw(rng, -math.pi, math.pi)
        reports.append(full_swap(a1, a2, delta, swap_cut, tol).report)
    for modulus in (0.5, 1.0, 2.0):
        reports.append(
            imperfect_clone(PolarParam.from_polar(modulus, 0.0), clone_cut, 0.0, tol).report
        )
    for _ in range(2):
        reports.append(
            apply_beamsplitter(
                _draw_param(rng, 0.0, 1.5),
                _draw_param(rng, 0.0, 1.5),
                _draw_param(rng, 0.1, 1.5),
                swap_cut,
                tol,
            ).report
        )
    obstruction_cut = config.cutoff()
    beta = PolarParam.from_polar(0.3, 0.0)
    reports.append(
        squeezed_swap_obstruction(
            beta, beta, PolarParam.from_polar(0.4, 0.0), obstruction_cut, config.margin, tol
        )
    )
    reports.append(
        squeezed_swap_obstruction(
            beta, beta, PolarParam.from_polar(0.5, math.pi / 2), obstruction_cut, config.margin, tol
        )
    )
    return reports


def _triple_closure_residual(triple, margin_indices) -> float:
    """Worst residual of the three bracket relations on the kept indices."""
    plus, minus, third = triple.plus.entries, triple.minus.entries, triple.third.entries
    sign = 1.0 if triple.algebra == "su2" else -1.0
    rels = (
        third @ plus - plus @ third - plus,
        third @ minus - minus @ third + minus,
        plus @ minus - minus @ plus - sign * 2.0 * third,
    )
    k = margin_indices
    return max(float(np.linalg.norm(r[np.ix_(k, k)], "fro")) for r in rels)


def _lie_reports(config: RunConfig) -> list:
    tol = config.tolerance
    reports = []

    worst = 0.0
    for two_j in range(1, 9):
        triple = su2_generators(SpinJ(two_j))
        idx = np.arange(two_j + 1)
        worst = max(worst, _triple_closure_residual(triple, idx))
    reports.append(
        make_report("su2_closure", (), Cutoff(8), 0, {"closure": worst}, {}, tol)
    )

    cut = Cutoff(30)
    triple = su11_generators(SpinK(Fraction(1, 2), cut))
    idx = np.arange(cut.dim - 1)  # one ladder step below the boundary
    res_abstract = _triple_closure_residual(triple, idx)
    reports.append(
        make_report(
            "su11_closure_abstract", (), cut, 1, {"closure": res_abstract}, {}, tol
        )
    )

    cut2 = Cutoff(10)
    triple = schwinger_su11(cut2)
    d = cut2.dim
    flat = np.arange(d * d)
    idx = np.nonzero(flat // d + flat % d <= cut2.n_max - 1)[0]
    reports.append(
        make_report(
            "su11_closure_schwinger",
            (),
            cut2,
            1,
            {"closure": _triple_closure_residual(triple, idx)},
            {},
            tol,
        )
    )

    cut3 = Cutoff(20)
    triple = single_mode_su11(cut3)
    idx = np.arange(cut3.dim - 2)  # one ladder step = two occupation levels
    reports.append(
        make_report(
            "su11_closure_single_mode",
            (),
            cut3,
            2,
            {"closure": _triple_closure_residual(triple, idx)},
            {},
            tol,
        )
    )

    cut4 = Cutoff(10)
    triple = schwinger_su2(cut4)
    d = cut4.dim
    flat = np.arange(d * d)
    idx = np.nonzero(flat // d + flat % d <= cut4.n_max - 1)[0]
    reports.append(
        make_report(
            "su2_closure_schwinger",
            (),
            cut4,
            1,
            {"closure": _triple_closure_residual(triple, idx)},
            {},
            tol,
        )
    )

    # quarter-spin correspondence: the quadratic realization on the even
    # occupations reproduces the abstract K=1/4 coherent state.
    z = PolarParam.from_polar(0.5, 0.9)
    fock_cut = Cutoff(64)
    spin = SpinK(Fraction(1, 2), Cutoff(fock_cut.n_max // 2))
    pere = perelomov_su11(z, spin)
    squeezed = squeeze(z, fock_cut).apply(vacuum(fock_cut))
    even = squeezed.amplitudes[0::2]
    from .fock import Ket

    even_ket = Ket(even, 1, spin.cutoff)
    f = fidelity(pere, even_ket)
    reports.append(
        make_report(
            "su11_quarter_correspondence",
            (z,),
            fock_cut,
            0,
            {},
            {"correspondence": f},
            tol,
        )
    )
    return reports


def _universal_swap_reports(config: RunConfig, rng) -> list:
    tol = config.tolerance
    reports = []

    worst = 0.0
    for n in (2, 3, 5, 16):
        u = swap_matrix(n)
        worst = max(worst, 0.0 if u.is_involution else 1.0)
    reports.append(
        make_report("swap_matrix_involution", (), Cutoff(15), 0, {"involution": worst}, {}, tol)
    )

    c1, c2, c3 = cnot_factorization()
    product = c1.compose(c2).compose(c3)
    gap = float(np.abs(product.to_dense() - swap_matrix(2).to_dense()).max())
    reports.append(
        make_report("cnot_product", (), Cutoff(1), 0, {"factorization": gap}, {}, tol)
    )

    n = 10
    cut = Cutoff(n - 1)
    worst = 0.0
    for _ in range(VERIFY_DRAWS):
        a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        from .fock import Ket

        out = apply_swap(Ket(a, 1, cut), Ket(b, 1, cut))
        worst = max(worst, float(np.abs(out.amplitudes - np.kron(b, a)).max()))
    reports.append(
        make_report("apply_swap_exactness", (), cut, 0, {"coordinates": worst}, {}, tol)
    )

    # permutation route against the protocol route
    swap_cut = config.cutoff(SWAP_CUTOFF)
    a1 = PolarParam.from_polar(1.0, 0.3)
    a2 = PolarParam.from_polar(0.8, -1.1)
    protocol = full_swap(a1, a2, 0.0, swap_cut, tol)
    permuted = apply_swap(coherent(a1, swap_cut), coherent(a2, swap_cut))
    f = fidelity(permuted, protocol.output)
    reports.append(
        make_report(
            "swap_route_consistency", (a1, a2), swap_cut, 0, {}, {"route_agreement": f}, tol
        )
    )

    basis = vacuum(Cutoff(3))
    reports.append(no_cloning_witness(basis, tol))
    amps = np.zeros(4, dtype=complex)
    amps[0] = amps[1] = 1 / math.sqrt(2)
    from .fock import Ket

    reports.append(no_cloning_witness(Ket(amps, 1, Cutoff(3)), tol))
    return reports


def cmd_verify_all(config: RunConfig) -> int:
    rng = np.random.default_rng(config.seed)
    blocks = (
        _formulas_reports,
        lambda cfg, r: _protocol_reports(cfg, r),
        lambda cfg, r: _lie_reports(cfg),
        _universal_swap_reports,
    )
    reports: list[Report] = []
    all_messages: list[str] = []
    for block in blocks:
        result, messages = _run_collecting_warnings(lambda b=block: b(config, rng))
        reports.extend(result)
        all_messages.extend(messages)
    for rep in reports:
        all_messages.extend(rep.warnings)

    body = {
        "config": config.to_json_dict(),
        "reports": [r.to_json_dict() for r in reports],
    }
    if config.output_format == "json":
        text = json.dumps(body, indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        buf.write("name,passed,n_max,margin,worst_residual,worst_fidelity_deficit\n")
        for r in reports:
            buf.write(
                f"{r.name},{r.passed},{r.cutoff.n_max},{r.margin},"
                f"{float(r.worst_residual)!r},{float(r.worst_fidelity_deficit)!r}\n"
            )
        text = buf.getvalue()
    _emit(text, config)

    for msg in dict.fromkeys(all_messages):
        print(f"warning: {msg}", file=sys.stderr)
    failed = [r.name for r in reports if not r.passed]
    for name in failed:
        print(f"failed: {name}", file=sys.stderr)
    return 1 if failed or all_messages else 0


# ---------------------------------------------------------------------------
# single protocol commands


def _protocol_exit(result, messages, config: RunConfig) -> int:
    body = result.to_json_dict()
    if config.output_format == "json":
        text = json.dumps(body, indent=2, sort_keys=True) + "\n"
    else:
        n1, n2 = result.mean_occupations()
        text = (
            "protocol,fidelity,mean_occupation_1,mean_occupation_2,passed\n"
            f"{result.report.name},{float(result.fidelity)!r},{float(n1)!r},{float(n2)!r},{result.report.passed}\n"
        )
    _emit(text, config)
    combined = list(dict.fromkeys(list(result.report.warnings) + list(messages)))
    for msg in combined:
        print(f"warning: {msg}", file=sys.stderr)
    return 0 if result.report.passed and not combined else 1


def cmd_swap(config: RunConfig, alpha1: PolarParam, alpha2: PolarParam, delta: float) -> int:
    result, messages = _run_collecting_warnings(
        lambda: full_swap(alpha1, alpha2, delta, config.cutoff(SWAP_CUTOFF), config.tolerance)
    )
    return _protocol_exit(result, messages, config)


def cmd_clone(config: RunConfig, alpha: PolarParam, delta: float = 0.0) -> int:
    result, messages = _run_collecting_warnings(
        lambda: imperfect_clone(alpha, config.cutoff(CLONE_CUTOFF), delta, config.tolerance)
    )
    return _protocol_exit(result, messages, config)


# ---------------------------------------------------------------------------
# sweeps


def _sweep_runner_J(value, config):
    return check_J_rotation(
        PolarParam.from_polar(value, 0.0), config.cutoff(), config.margin, config.tolerance
    )


def _sweep_runner_K(value, config):
    return check_K_rotation(
        PolarParam.from_polar(value, 0.0), config.cutoff(), config.margin, config.tolerance
    )


def _sweep_runner_squeeze(value, config):
    return check_squeeze_conjugation(
        PolarParam.from_polar(value, 0.0), config.cutoff(), config.margin, config.tolerance
    )


def _sweep_runner_SDS(value, config):
    return check_SDS(
        PolarParam.from_polar(value, 0.0),
        PolarParam.from_polar(0.5, 0.3),
        config.cutoff(),
        config.margin,
        config.tolerance,
    )


def _sweep_runner_SSS(value, config):
    return check_SSS_commute(
        PolarParam.from_polar(value, 0.0),
        PolarParam.from_polar(0.5, 0.0),
        config.cutoff(),
        config.margin,
        config.tolerance,
    )


def _sweep_runner_phase(value, config):
    return check_phase_formula(
        value, PolarParam.from_polar(1.0, 0.0), config.cutoff(), config.margin, config.tolerance
    )


def _sweep_runner_UJ(value, config):
    return check_UJ_squeeze_invariance(
        PolarParam.from_polar(value, 0.0),
        PolarParam.from_polar(0.3, 0.0),
        config.cutoff(),
        config.margin,
        config.tolerance,
    )


def _sweep_runner_obstruction(value, config):
    beta = PolarParam.from_polar(0.3, 0.0)
    return squeezed_swap_obstruction(
        beta,
        beta,
        PolarParam.from_polar(value, math.pi / 2),
        config.cutoff(),
        config.margin,
        config.tolerance,
    )


def _sweep_runner_swap(value, config):
    return full_swap(
        PolarParam.from_polar(value, 0.0),
        PolarParam.from_polar(0.7, math.pi / 2),
        0.0,
        config.cutoff(SWAP_CUTOFF),
        config.tolerance,
    ).report


def _sweep_runner_clone(value, config):
    return imperfect_clone(
        PolarParam.from_polar(value, 0.0), config.cutoff(CLONE_CUTOFF), 0.0, config.tolerance
    ).report


def _sweep_runner_beamsplitter(value, config):
    return apply_beamsplitter(
        PolarParam.from_polar(value, 0.0),
        PolarParam.from_polar(0.6, 1.0),
        PolarParam.from_polar(0.8, 0.2),
        config.cutoff(SWAP_CUTOFF),
        config.tolerance,
    ).report


SWEEP_REGISTRY = {
    "check_J_rotation": (
        _sweep_runner_J,
        ("a1_conjugation", "a2_conjugation", "su2_unitarity", "su2_determinant"),
        (),
    ),
    "check_K_rotation": (
        _sweep_runner_K,
        ("a1_conjugation", "a2dag_conjugation", "su11_normalization"),
        (),
    ),
    "check_squeeze_conjugation": (_sweep_runner_squeeze, ("a_conjugation",), ()),
    "check_SDS": (
        _sweep_runner_SDS,
        ("displacement_conjugation",),
        ("scale_up_state", "scale_down_state"),
    ),
    "check_SSS_commute": (_sweep_runner_SSS, ("commutator",), ()),
    "check_phase_formula": (
        _sweep_runner_phase,
        ("displacement_conjugation", "vacuum_invariance"),
        ("rotated_state",),
    ),
    "check_UJ_squeeze_invariance": (
        _sweep_runner_UJ,
        ("invariance", "mode1_coefficient", "mode2_coefficient", "pair_coefficient"),
        (),
    ),
    "squeezed_swap_obstruction": (
        _sweep_runner_obstruction,
        ("exponent_match", "invariance", "cross_term_modulus"),
        (),
    ),
    "full_swap": (_sweep_runner_swap, ("input_truncation_deficit",), ("swap",)),
    "imperfect_clone": (
        _sweep_runner_clone,
        ("marginal1_occupation", "marginal2_occupation", "input_truncation_deficit"),
        ("clone",),
    ),
    "apply_beamsplitter": (
        _sweep_runner_beamsplitter,
        ("energy_conservation", "input_truncation_deficit"),
        ("protocol",),
    ),
}


def cmd_sweep(config: RunConfig, check_name: str, values: list[float]) -> int:
    if check_name not in SWEEP_REGISTRY:
        print(f"error: unknown check {check_name!r}", file=sys.stderr)
        print(f"registered: {', '.join(sorted(SWEEP_REGISTRY))}", file=sys.stderr)
        return 2
    runner, residual_keys, fidelity_keys = SWEEP_REGISTRY[check_name]

    reports = []
    all_messages: list[str] = []
    for value in values:
        rep, messages = _run_collecting_warnings(lambda v=value: runner(v, config))
        reports.append((value, rep))
        all_messages.extend(messages)
        all_messages.extend(rep.warnings)

    if config.output_format == "json":
        body = {
            "check": check_name,
            "reports": [dict(value=v, **r.to_json_dict()) for v, r in reports],
        }
        text = json.dumps(body, indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        header = ["check", "value", *residual_keys, *fidelity_keys, "passed"]
        buf.write(",".join(header) + "\n")
        for v, r in reports:
            row = [check_name, repr(float(v))]
            row += [repr(float(r.residuals.get(k, float("nan")))) for k in residual_keys]
            row += [repr(float(r.fidelities.get(k, float("nan")))) for k in fidelity_keys]
            row.append(str(r.passed))
            buf.write(",".join(row) + "\n")
        text = buf.getvalue()
    _emit(text, config)

    for msg in dict.fromkeys(all_messages):
        print(f"warning: {msg}", file=sys.stderr)
    failed = [v for v, r in reports if not r.passed]
    return 1 if failed or all_messages else 0


# ---------------------------------------------------------------------------
# argument parsing


def _parse_values(text: str) -> list[float]:
    text = text.strip()
    if not text:
        return []
    return [float(tok) for tok in text.split(",") if tok.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--nmax", type=int, default=None, help="override the truncation level")
    common.add_argument(
        "--margin", default=None, help="safe-projector margin (integer or 'auto')"
    )
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="pass/fail tolerance")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="RNG seed for draws")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="write the report body to this path")

    parser = argparse.ArgumentParser(
        prog="fockforge",
        description="Numerical certification of coherent-state identities and protocols "
        "on truncated Fock spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("verify-all", parents=[common], help="run the full verification suite")

    p_swap = sub.add_parser("swap", parents=[common], help="swap two coherent states")
    p_swap.add_argument("--a1", required=True, help="first amplitude: re,im or mod@phase")
    p_swap.add_argument("--a2", required=True, help="second amplitude: re,im or mod@phase")
    p_swap.add_argument("--delta", type=float, default=0.0, help="beamsplitter phase")

    p_clone = sub.add_parser("clone", parents=[common], help="imperfectly clone a coherent state")
    p_clone.add_argument("--alpha", required=True, help="amplitude: re,im or mod@phase")
    p_clone.add_argument("--delta", type=float, default=0.0, help="beamsplitter phase")

    p_sweep = sub.add_parser("sweep", parents=[common], help="run a named check over a grid")
    p_sweep.add_argument("--check", required=True, help="registered check name")
    p_sweep.add_argument(
        "--values", default="", help="comma-separated moduli for the swept parameter"
    )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0

    try:
        config = _build_config(args)
        if args.command == "verify-all":
            return cmd_verify_all(config)
        if args.command == "swap":
            return cmd_swap(
                config, PolarParam.parse(args.a1), PolarParam.parse(args.a2), args.delta
            )
        if args.command == "clone":
            return cmd_clone(config, PolarParam.parse(args.alpha), args.delta)
        if args.command == "sweep":
            return cmd_sweep(config, args.check, _parse_values(args.values))
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
