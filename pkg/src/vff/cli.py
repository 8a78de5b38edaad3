"""Command-line driver.

Subcommands:
  train         learn the spectral decomposition of the Trotter step
  fast-forward  compare fast-forwarded and Trotterized evolution
  spectrum      report learnt vs exact eigenvalues
  cost          evaluate the test cost for two serialized circuits

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import circuit as circ_mod
from . import config as config_mod
from . import lhst, metrics, trainer
from .ansatz import SpectralAnsatz, build_D, build_V, build_V_fast_forward
from .config import ConfigError, ExperimentConfig
from .model import build_hamiltonian, exact_evolution, trotter_step_circuit, trotterized_evolution
from .noise import NoiseModel, load_calibration, noisy_state_fidelity
from .simcore import StateVector, child_seed
from .trainer import InitializationError, init_params, train

TROTTER_STEP_TOL = 1e-9


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="JSON config file")
    parser.add_argument("--seed", type=int, metavar="N")
    parser.add_argument("--shots", type=int, metavar="N")
    parser.add_argument("--steps", type=int, metavar="N", help="gradient-descent steps")
    parser.add_argument("--noise", metavar="PATH", help="calibration JSON for noisy runs")
    parser.add_argument("--analytic", action="store_true", help="noise-free exact probabilities")
    parser.add_argument("--out", metavar="DIR", help="output directory")
    parser.add_argument("--dump-circuits", action="store_true")
    parser.add_argument(
        "--print-config", action="store_true", help="print the effective config and exit"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vff", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train the diagonalizing ansatz")
    _add_common_flags(p_train)

    p_ff = sub.add_parser("fast-forward", help="fidelity vs evolution time")
    p_ff.add_argument("ansatz", metavar="ANSATZ_JSON")
    _add_common_flags(p_ff)

    p_spec = sub.add_parser("spectrum", help="learnt vs exact spectrum report")
    p_spec.add_argument("ansatz", metavar="ANSATZ_JSON")
    _add_common_flags(p_spec)

    p_cost = sub.add_parser("cost", help="evaluate the cost of two circuit files")
    p_cost.add_argument("u_circuit", metavar="U_TXT")
    p_cost.add_argument("v_circuit", metavar="V_TXT")
    _add_common_flags(p_cost)
    return parser


def _effective_config(args) -> ExperimentConfig:
    base = config_mod.load(args.config) if args.config else ExperimentConfig()
    return config_mod.apply_overrides(base, args)


def _noise_model(cfg: ExperimentConfig) -> NoiseModel | None:
    if cfg.noise is None:
        return None
    try:
        return NoiseModel.from_calibration(load_calibration(cfg.noise))
    except (OSError, KeyError, ValueError) as exc:
        raise ConfigError(f"bad calibration file {cfg.noise}: {exc}") from exc


def _prepare_out_dir(cfg: ExperimentConfig) -> Path:
    out = Path(cfg.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write-probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise ConfigError(f"output directory {out} is not writable: {exc}") from exc
    return out


def _maybe_print_config(args, cfg: ExperimentConfig) -> bool:
    if args.print_config:
        print(json.dumps(cfg.to_dict(), indent=1))
        return True
    return False


def cmd_train(args) -> int:
    cfg = _effective_config(args)
    if _maybe_print_config(args, cfg):
        return 0
    noise_model = _noise_model(cfg)
    out = _prepare_out_dir(cfg)

    target = trotter_step_circuit(cfg.ising)
    a0 = init_params(cfg.ising, cfg.seed)
    trace = train(
        target,
        a0,
        cfg.schedule,
        shots=cfg.shots,
        seed=cfg.seed,
        noise_model=noise_model,
        analytic=cfg.analytic,
    )
    trace.to_csv(out / "trace.csv")
    trace.to_json(out / "trace.json")
    final = trace.final_ansatz()
    final.save(out / "ansatz.json")
    if cfg.dump_circuits:
        _dump_circuits(out / "circuits.txt", target, final)
    print(f"final ideal cost {trace.rows[-1].ideal_cost:.6f} -> {out}")
    return 0


def _dump_circuits(path: Path, target, final: SpectralAnsatz) -> None:
    v = build_V(final)
    chunks = ["# target", circ_mod.to_text(target), "# ansatz", circ_mod.to_text(v)]
    for label, test_circuit in zip(
        ("# test pair 0", "# test pair 1"), lhst.build_lhst_circuits(target, v)
    ):
        chunks += [label, circ_mod.to_text(test_circuit)]
    path.write_text("\n".join(chunks))


def _plus_plus() -> StateVector:
    return StateVector(2, np.full(4, 0.5, dtype=complex))


def cmd_fast_forward(args) -> int:
    cfg = _effective_config(args)
    if _maybe_print_config(args, cfg):
        return 0
    noise_model = _noise_model(cfg)
    out = _prepare_out_dir(cfg)
    a = _load_ansatz(args.ansatz)

    hamiltonian = build_hamiltonian(cfg.ising)
    dt = cfg.ising.dt
    psi0 = _plus_plus()

    header = ["t", "fidelity_vff_ideal", "fidelity_trotter_ideal"]
    if noise_model is not None:
        header += ["fidelity_vff_noisy", "fidelity_trotter_noisy"]
    lines = [",".join(header)]
    for row, t in enumerate(cfg.times):
        reference = StateVector(2, exact_evolution(hamiltonian, t) @ psi0.amplitudes)
        vff_circuit = build_V_fast_forward(a, t, dt)
        vff_state = circ_mod.run(vff_circuit, psi0)
        cells = [repr(float(t)), repr(metrics.state_fidelity(reference, vff_state))]

        k = t / dt
        trotter_circuit = None
        if abs(k - round(k)) <= TROTTER_STEP_TOL:
            trotter_circuit = trotterized_evolution(cfg.ising, int(round(k)))
            trotter_state = circ_mod.run(trotter_circuit, psi0)
            cells.append(repr(metrics.state_fidelity(reference, trotter_state)))
        else:
            print(f"warning: t={t} is not a multiple of dt={dt}; no Trotter column", file=sys.stderr)
            cells.append("")

        if noise_model is not None:
            cells.append(
                repr(
                    noisy_state_fidelity(
                        vff_circuit, psi0, reference, noise_model, cfg.shots,
                        child_seed(cfg.seed, row, 0),
                    )
                )
            )
            if trotter_circuit is not None:
                cells.append(
                    repr(
                        noisy_state_fidelity(
                            trotter_circuit, psi0, reference, noise_model, cfg.shots,
                            child_seed(cfg.seed, row, 1),
                        )
                    )
                )
            else:
                cells.append("")
        lines.append(",".join(cells))

    (out / "fidelity.csv").write_text("\n".join(lines) + "\n")
    print(f"wrote {out / 'fidelity.csv'}")
    return 0


def _load_ansatz(path) -> SpectralAnsatz:
    try:
        return SpectralAnsatz.load(path)
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot load ansatz {path}: {exc}") from exc


def cmd_spectrum(args) -> int:
    cfg = _effective_config(args)
    if _maybe_print_config(args, cfg):
        return 0
    a = _load_ansatz(args.ansatz)

    target = trotter_step_circuit(cfg.ising)
    evals = np.linalg.eigvals(circ_mod.unitary_of(target))
    exact = evals[np.argsort(np.angle(evals))]
    learned = np.diag(circ_mod.unitary_of(build_D(a.gamma)))
    comp = metrics.eigenvalue_error(exact, learned)

    reordered = np.array(comp.learned_eigenvalues)[list(comp.best_permutation)]
    sum_check = float(
        np.sum(np.abs(np.array(comp.exact_eigenvalues) - np.exp(1j * comp.best_phase) * reordered) ** 2)
    )
    report = {
        "exact_spectrum": [[z.real, z.imag] for z in comp.exact_eigenvalues],
        "learned_diagonal": [[z.real, z.imag] for z in comp.learned_eigenvalues],
        "best_phase": comp.best_phase,
        "best_permutation": list(comp.best_permutation),
        "eigenvalue_error": comp.distance,
        "eigenvalue_error_squared": comp.distance**2,
        "sum_of_eigenvalue_errors": sum_check,
    }
    print(json.dumps(report, indent=1))
    return 0


def cmd_cost(args) -> int:
    cfg = _effective_config(args)
    if _maybe_print_config(args, cfg):
        return 0
    noise_model = _noise_model(cfg)
    try:
        u = circ_mod.from_text(Path(args.u_circuit).read_text())
        v = circ_mod.from_text(Path(args.v_circuit).read_text())
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot parse circuit file: {exc}") from exc

    if cfg.analytic:
        estimate = lhst.cost_analytic(u, v)
    elif noise_model is not None:
        from .noise import noisy_cost

        estimate = noisy_cost(u, v, noise_model, cfg.shots, cfg.seed)
    else:
        estimate = lhst.cost_sampled(u, v, cfg.shots, cfg.seed)
    print(json.dumps(estimate.to_dict(), indent=1))
    return 0


_COMMANDS = {
    "train": cmd_train,
    "fast-forward": cmd_fast_forward,
    "spectrum": cmd_spectrum,
    "cost": cmd_cost,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except InitializationError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except FloatingPointError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
