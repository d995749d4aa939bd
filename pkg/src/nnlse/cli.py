"""Command-line entry point: ``nnlse <subcommand> [--config run.json] [flags]``.

Values come from the JSON config first, then explicit flags override them.
Exit codes: 0 success, 1 validation/usage error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import combinations

import numpy as np

from . import io
from .bethe import (
    BetheState,
    check_cusp,
    ring_residual,
    solve_ring_bethe,
    verify_bound_pair_fd,
    verify_eigenstate_fd,
)
from .classical import gaussian, relative_drift, trajectory
from .fock import FockState, enumerate_sector
from .lattice import PositionGrid, make_grid
from .metric import (
    dirac_gram_spectrum,
    gram,
    max_imag_eigenvalue,
    pseudo_hermiticity_defect,
    self_adjointness_defect,
)
from .qoperators import (
    build_hamiltonian,
    build_momentum,
    build_number,
    build_parity,
    build_v_momentum,
    build_v_position,
    commutator,
)
from .spectra import NumericalError, convergence_sweep, diagonalize, ls_series


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _floats(text):
    return [float(v) for v in str(text).split(",") if v.strip()]


def _ints(text):
    return [int(v) for v in str(text).split(",") if v.strip()]


# nested config sections -> flat option names
SECTIONS = {
    "grid": {"L": "length", "M": "modes"},
    "sector": {"n": "particles", "momentum_block": "momentum_block"},
    "integrator": {"dt": "dt", "steps": "steps"},
}


def _flatten(cfg: dict) -> dict:
    flat = {}
    for key, val in cfg.items():
        key = key.replace("-", "_")
        if key in SECTIONS and isinstance(val, dict):
            for sub, v in val.items():
                if sub not in SECTIONS[key]:
                    raise UsageError(f"unknown field {key}.{sub} in config")
                flat[SECTIONS[key][sub]] = v
        elif key == "c":
            flat["coupling"] = val
        else:
            flat[key] = val
    return flat


def _common(p, *names):
    opts = {
        "length": dict(type=float, default=2 * np.pi, help="ring length L"),
        "modes": dict(type=int, default=4, help="mode cutoff M (modes -M..M)"),
        "particles": dict(type=int, default=2, help="particle number n"),
        "coupling": dict(type=float, default=1.0, help="coupling c"),
        "momentum_block": dict(type=int, default=None, help="total momentum index filter"),
        "out": dict(default=None, help="output path (stdout if omitted)"),
        "seed": dict(type=int, default=0, help="seed for random draws"),
    }
    for n in names:
        p.add_argument("--" + n.replace("_", "-"), dest=n, **opts[n])


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nnlse", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("spectrum", help="diagonalize a sector Hamiltonian")
    _common(s, "length", "modes", "particles", "coupling", "momentum_block", "out")
    s.add_argument("--operator-out", default=None, help="also export H")
    s.add_argument("--operator-format", choices=("dense", "triplet"), default="triplet")

    s = sub.add_parser("gram", help="Gram matrix of the Dirac or parity pairing")
    _common(s, "length", "modes", "particles", "momentum_block", "out")
    s.add_argument("--kind", choices=("dirac", "parity"), default="dirac")
    s.add_argument("--spectrum-out", default=None, help="eigenvalues as a JSON array")

    s = sub.add_parser("hermiticity", help="pseudo-Hermiticity, realness and commutator checks")
    _common(s, "length", "modes", "particles", "coupling", "out")

    s = sub.add_parser("ls-series", help="reduced-resolvent series around a Fock state")
    _common(s, "length", "modes", "coupling", "out")
    s.add_argument("--reference", default="0,0", help="occupied mode indices, comma separated")
    s.add_argument("--order", type=int, default=3)

    s = sub.add_parser("bethe-verify", help="cusp and finite-difference checks of a Bethe state")
    _common(s, "coupling", "out", "seed")
    s.add_argument("--k", default="-1,2", help="rapidities, comma separated")
    s.add_argument("--grid", type=int, default=400, help="grid points per dimension")
    s.add_argument("--box", type=float, default=30.0)

    s = sub.add_parser("ring-bethe", help="solve the ring Bethe equations")
    _common(s, "length", "coupling", "out")
    s.add_argument("--quantum-numbers", default="0,1")

    s = sub.add_parser("bound-state", help="attractive two-body bound state: ED and FD oracle")
    _common(s, "length", "momentum_block", "out")
    s.set_defaults(length=20.0, momentum_block=0)
    s.add_argument("--coupling", type=float, default=-2.0)
    s.add_argument("--cutoffs", default="8,16,24,32")
    s.add_argument("--grid", type=int, default=400)
    s.add_argument("--box", type=float, default=30.0)

    s = sub.add_parser("evolve", help="integrate the classical nonlocal NLSE and record charges")
    _common(s, "coupling", "out")
    s.add_argument("--length", type=float, default=20.0)
    s.add_argument("--points", type=int, default=512)
    s.add_argument("--dt", type=float, default=1e-4)
    s.add_argument("--steps", type=int, default=10000)
    s.add_argument("--every", type=int, default=100)
    s.add_argument("--center", type=float, default=1.0)
    s.add_argument("--width", type=float, default=1.0)
    s.add_argument("--amplitude", type=float, default=0.8)
    s.add_argument("--momentum", type=float, default=0.5)
    s.add_argument("--snapshot-out", default=None, help="final field as CSV (x, re, im)")

    s = sub.add_parser("sweep", help="lowest eigenvalues across mode cutoffs")
    _common(s, "length", "particles", "coupling", "momentum_block", "out")
    s.add_argument("--cutoffs", default="4,8,16,32")
    s.add_argument("--levels", type=int, default=3)

    for sp in sub.choices.values():
        sp.add_argument("--config", default=None, help="JSON run configuration")
    return p


def _resolve(parser, argv):
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        raise UsageError("missing subcommand")
    if args.config is None:
        return args
    with open(args.config) as fh:
        cfg = _flatten(json.load(fh))
    sp = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest for a in sp._actions}
    unknown = set(cfg) - known
    if unknown:
        raise UsageError(f"unknown config fields for {args.command}: {sorted(unknown)}")
    # flags win: re-parse with config values as defaults
    sp.set_defaults(**cfg)
    return parser.parse_args(argv)


def _emit(path, text):
    if path is None:
        sys.stdout.write(text + "\n")
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def cmd_spectrum(a):
    basis = enumerate_sector(make_grid(a.length, a.modes), a.particles, a.momentum_block)
    h = build_hamiltonian(basis, a.coupling)
    res = diagonalize(h)
    block = "all" if a.momentum_block is None else a.momentum_block
    rows = [(a.particles, block, i, e, r) for i, (e, r) in enumerate(zip(res.eigenvalues, res.residuals))]
    header = ["sector_n", "momentum_block", "index", "eigenvalue", "residual"]
    if a.out:
        io.write_rows(a.out, header, rows)
    else:
        _emit(None, "\n".join([",".join(header)] + [",".join(str(v) if not isinstance(v, float) else io.fmt(v) for v in r) for r in rows]))
    if a.operator_out:
        (io.write_dense_csv if a.operator_format == "dense" else io.write_triplets)(a.operator_out, h.matrix)


def cmd_gram(a):
    basis = enumerate_sector(make_grid(a.length, a.modes), a.particles, a.momentum_block)
    g = gram(basis, a.kind).matrix
    if a.out:
        io.write_dense_csv(a.out, g)
    else:
        _emit(None, io.dumps({"modes": [s.modes for s in basis.states], "gram": g.real}))
    if a.spectrum_out:
        io.write_json(a.spectrum_out, np.linalg.eigvalsh(g) if a.kind == "parity" else dirac_gram_spectrum(basis))


def hermiticity_report(length, modes, particles, coupling):
    basis = enumerate_sector(make_grid(length, modes), particles)
    h = build_hamiltonian(basis, coupling)
    n_op, p_op, par = build_number(basis), build_momentum(basis), build_parity(basis)
    vm, vp = build_v_momentum(basis, coupling), build_v_position(basis, coupling)
    vnorm = np.linalg.norm(vm.matrix)
    return {
        "length": length,
        "modes": modes,
        "particles": particles,
        "coupling": coupling,
        "dim": basis.dim,
        "pseudo_hermiticity_defect_H": pseudo_hermiticity_defect(h),
        "pseudo_hermiticity_defect_N": pseudo_hermiticity_defect(n_op),
        "max_imag_eigenvalue_H": max_imag_eigenvalue(h),
        "self_adjoint_defect_parity": self_adjointness_defect(h, "parity"),
        "self_adjoint_defect_dirac": self_adjointness_defect(h, "dirac"),
        "commutator_H_N": float(np.max(np.abs(commutator(h, n_op).matrix))),
        "commutator_H_P": float(np.max(np.abs(commutator(h, p_op).matrix))),
        "commutator_H_parity": float(np.max(np.abs(commutator(h, par).matrix))),
        "v_momentum_vs_position": float(np.linalg.norm(vm.matrix - vp.matrix) / vnorm) if vnorm else 0.0,
    }


def cmd_hermiticity(a):
    _emit(a.out, io.dumps(hermiticity_report(a.length, a.modes, a.particles, a.coupling)))


def cmd_ls_series(a):
    ref = FockState(tuple(_ints(a.reference)))
    grid = make_grid(a.length, a.modes)
    s = ls_series(ref, a.coupling, a.order, grid=grid)
    report = {
        "reference": list(ref.modes),
        "reference_energy": s.reference_energy,
        "order": s.order,
        "coupling": a.coupling,
        "term_norms": [float(np.linalg.norm(t)) for t in s.terms],
        "on_shell_norms": s.on_shell_norms,
        "on_shell_dim": int(s.on_shell.sum()),
        "first_order_energy": s.first_order_energy(),
    }
    if s.order >= 1:
        report["second_order_energy"] = s.second_order_energy()
    _emit(a.out, io.dumps(report))


def bethe_report(ks, coupling, grid, box, seed):
    state = BetheState(tuple(ks), coupling)
    rng = np.random.default_rng(seed)
    cusp = {}
    for i, j in combinations(range(state.n), 2):
        point = rng.uniform(-box / 4, box / 4, state.n)
        cusp[f"{i},{j}"] = check_cusp(state, (i, j), point)
    report = {"rapidities": list(ks), "coupling": coupling, "energy": state.energy, "cusp_residuals": cusp}
    if state.n in (2, 3):
        coarse = grid // 2 + 1 if state.n == 2 else max(20, grid // 10)
        fine = 2 * coarse - 1
        r_coarse = verify_eigenstate_fd(state, box, coarse)
        r_fine = verify_eigenstate_fd(state, box, fine)
        report["fd"] = {"grid": [coarse, fine], "box": box, "residual": [r_coarse, r_fine], "ratio": r_coarse / r_fine}
    return report


def cmd_bethe_verify(a):
    _emit(a.out, io.dumps(bethe_report(_floats(a.k), a.coupling, a.grid, a.box, a.seed)))


def cmd_ring_bethe(a):
    qn = _floats(a.quantum_numbers)
    st = solve_ring_bethe(len(qn), a.length, a.coupling, qn)
    _emit(a.out, io.dumps({
        "quantum_numbers": qn, "length": a.length, "coupling": a.coupling,
        "rapidities": list(st.rapidities), "energy": st.energy, "momentum": st.momentum,
        "residual": ring_residual(st, a.length, qn),
    }))


def cmd_bound_state(a):
    rows = convergence_sweep(2, a.coupling, _ints(a.cutoffs), a.length, a.momentum_block, n_levels=1)
    fine = a.grid if a.grid % 2 else a.grid + 1
    coarse = (fine + 1) // 2
    _emit(a.out, io.dumps({
        "coupling": a.coupling, "length": a.length, "exact_energy": -0.5 * a.coupling**2,
        "ed_ground": {str(M): float(e[0]) for M, e in rows},
        "fd": {"grid": [coarse, fine], "residual": [verify_bound_pair_fd(a.coupling, a.box, coarse), verify_bound_pair_fd(a.coupling, a.box, fine)]},
    }))


def cmd_evolve(a):
    grid = PositionGrid(a.length, a.points)
    f0 = gaussian(grid, a.center, a.width, a.amplitude, a.momentum)
    final, hist = trajectory(f0, a.coupling, a.dt, a.steps, a.every)
    header = ["t", "re_N", "im_N", "re_P", "im_P", "re_H", "im_H"]
    rows = [(q.time, q.N.real, q.N.imag, q.P.real, q.P.imag, q.H.real, q.H.imag) for q in hist]
    if a.out:
        io.write_rows(a.out, header, rows)
    else:
        _emit(None, io.dumps(relative_drift(hist)))
    if a.snapshot_out:
        io.write_rows(a.snapshot_out, ["x", "re", "im"], zip(grid.x, final.values.real, final.values.imag))


def cmd_sweep(a):
    rows = convergence_sweep(a.particles, a.coupling, _ints(a.cutoffs), a.length, a.momentum_block, a.levels)
    flat = [(M, i, float(e)) for M, es in rows for i, e in enumerate(es)]
    if a.out:
        io.write_rows(a.out, ["M", "level", "eigenvalue"], flat)
    else:
        _emit(None, "\n".join(f"{M},{i},{io.fmt(e)}" for M, i, e in flat))


COMMANDS = {
    "spectrum": cmd_spectrum,
    "gram": cmd_gram,
    "hermiticity": cmd_hermiticity,
    "ls-series": cmd_ls_series,
    "bethe-verify": cmd_bethe_verify,
    "ring-bethe": cmd_ring_bethe,
    "bound-state": cmd_bound_state,
    "evolve": cmd_evolve,
    "sweep": cmd_sweep,
}


LIST_FLAGS = ("--k", "--quantum-numbers", "--reference", "--cutoffs")


def _join_list_flags(argv):
    """'--k -1,2' -> '--k=-1,2' so comma lists may start with a minus sign."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in LIST_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def run(argv=None) -> int:
    parser = build_parser()
    argv = _join_list_flags(list(sys.argv[1:] if argv is None else argv))
    try:
        args = _resolve(parser, argv)
        COMMANDS[args.command](args)
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 1
    except (NumericalError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ValueError, KeyError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
