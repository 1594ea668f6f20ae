"""Problem registry: builds ready-to-train objectives with frozen inputs.

Each builder fixes the problem inputs (states drawn from a seeded input
ansatz, or observables in text form), picks the optimization ansatz
templates, lays out the parameter vector (angles first, scalars after, with
the documented initial values), and attaches the matching oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import objective as obj
from . import oracle as orc
from .ansatz import (
    BornDistribution,
    ConvexCombinationState,
    PurificationState,
    layered_unitary_circuit,
    qcbm_circuit,
)
from .estimate import Prepared, prepare
from .objective import ParamBlock, PenaltyObjective
from .pauli import PauliObservable, WalshObservable

PROBLEM_TAGS = (
    "trace_distance_primal", "trace_distance_dual",
    "fidelity_primal", "fidelity_dual",
    "negativity_primal", "negativity_dual",
    "cham_primal", "cham_dual", "cham_interior_point",
    "tvd_primal", "tvd_dual",
    "classical_cham_primal", "classical_cham_dual",
)

QUANTUM_TAGS = PROBLEM_TAGS[:9]
CLASSICAL_TAGS = PROBLEM_TAGS[9:]

INPUT_LAYERS = 2

# Preconditioning of the scalar blocks: the coefficient-norm penalty terms
# are a factor ~c 2^(n+1) stiffer than the circuit angles, and the
# constrained-Hamiltonian dual multipliers travel several units from their
# initial values, so those coordinates are rescaled relative to the angles.
ALPHA_SCALE = 0.25
ALPHA_SCALE_STIFF = 0.125
FD_LM_SCALE = 1.5
FD_NU_SCALE = 2.5
NEG_P_LAM_SCALE = 2.0
NEG_P_MU_SCALE = 3.0
MU_SCALE = 2.0
NU_SCALE = 4.0


@dataclass
class Problem:
    tag: str
    objective: PenaltyObjective
    oracle: orc.OracleResult
    n_system: int
    meta: dict


# -- ansatz construction -------------------------------------------------

def make_purification(n_system: int, layers: int, n_reference: int | None = None) -> PurificationState:
    n_ref = n_system if n_reference is None else n_reference
    return PurificationState(layered_unitary_circuit(n_ref + n_system, layers), n_ref, n_system)


def make_cc(n_system: int, layers: int, born_layers: int) -> ConvexCombinationState:
    return ConvexCombinationState(qcbm_circuit(n_system, born_layers), layered_unitary_circuit(n_system, layers))


def make_opt_template(ansatz_type: str, n_system: int, layers: int, born_layers: int,
                      n_reference: int | None = None):
    if ansatz_type == "purification":
        return make_purification(n_system, layers, n_reference)
    if ansatz_type == "convex_combination":
        return make_cc(n_system, layers, born_layers)
    if ansatz_type == "born":
        return BornDistribution(qcbm_circuit(n_system, born_layers))
    raise ValueError(f"unknown ansatz type {ansatz_type!r}")


def frozen_quantum_input(ansatz_type: str, n: int, seed_key: list[int]) -> Prepared:
    """Input state of the same form as the optimization ansatz, with random
    parameters frozen under the given seed."""
    rng = np.random.default_rng(seed_key)
    if ansatz_type == "convex_combination":
        template = make_cc(n, INPUT_LAYERS, INPUT_LAYERS)
    else:
        template = make_purification(n, INPUT_LAYERS)
    theta = rng.uniform(0.0, 2.0 * np.pi, template.n_params)
    return prepare(template, theta)


def frozen_born_input(n: int, seed_key: list[int]) -> np.ndarray:
    rng = np.random.default_rng(seed_key)
    template = BornDistribution(qcbm_circuit(n, INPUT_LAYERS))
    phi = rng.uniform(0.0, 2.0 * np.pi, template.n_params)
    return template.realize(phi)


def _angle_blocks(templates: dict[str, object]) -> list[ParamBlock]:
    return [
        ParamBlock(f"theta_{name}", t.n_params, "angle", state_index=i)
        for i, (name, t) in enumerate(templates.items())
    ]


def _scalar(name: str, size: int, init, nonneg: bool = True, scale: float = 1.0) -> ParamBlock:
    kind = "scalar_nonneg" if nonneg else "scalar"
    if np.isscalar(init):
        init = (float(init),) * size
    return ParamBlock(name, size, kind, init=tuple(float(v) for v in init), scale=scale)


# -- observable parsing ---------------------------------------------------

def pauli_instance_from_dict(n: int, instance: dict) -> tuple[PauliObservable, list[PauliObservable], np.ndarray]:
    h = PauliObservable.from_text(n, instance["h"])
    a_list = [PauliObservable.from_text(n, c["coeffs"]) for c in instance.get("constraints", [])]
    b = np.array([float(c["b"]) for c in instance.get("constraints", [])])
    return h, a_list, b


def walsh_instance_from_dict(n: int, instance: dict) -> tuple[WalshObservable, list[WalshObservable], np.ndarray]:
    h = WalshObservable.from_text(n, instance["h"])
    a_list = [WalshObservable.from_text(n, c["coeffs"]) for c in instance.get("constraints", [])]
    b = np.array([float(c["b"]) for c in instance.get("constraints", [])])
    return h, a_list, b


def default_cham_instance() -> dict:
    return {
        "h": {"ZZ": 1.0, "XI": 1.0, "IX": 1.0},
        "constraints": [
            {"coeffs": {"YI": 1.0}, "b": 0.2},
            {"coeffs": {"IZ": 1.0}, "b": 0.1},
        ],
    }


def default_classical_cham_instance() -> dict:
    return {
        "h": {"11": 1.0},
        "constraints": [
            {"coeffs": {"10": 0.5}, "b": 0.1},
            {"coeffs": {"01": 0.7}, "b": 0.3},
        ],
    }


def _slack_init(ell: int) -> tuple[float, ...]:
    base = (0.1, 0.5)
    return tuple(base[i] if i < len(base) else 0.1 for i in range(ell))


# -- builders -------------------------------------------------------------

def build_problem(tag: str, n_system: int = 2, ansatz_type: str | None = None,
                  layers: int = 2, born_layers: int = 2, n_reference: int | None = None,
                  c: float = 10.0, instance_seed: int = 921, instance: dict | None = None) -> Problem:
    if tag not in PROBLEM_TAGS:
        raise ValueError(f"unknown problem tag {tag!r}")
    if ansatz_type is None:
        ansatz_type = "born" if tag in CLASSICAL_TAGS else "purification"
    if tag in CLASSICAL_TAGS and ansatz_type != "born":
        raise ValueError(f"{tag} optimizes distributions; ansatz type must be 'born'")
    if tag in QUANTUM_TAGS and ansatz_type == "born":
        raise ValueError(f"{tag} optimizes density matrices; pick purification or convex_combination")
    builder = _BUILDERS[tag]
    return builder(n_system, ansatz_type, layers, born_layers, n_reference, c, instance_seed, instance)


def _build_trace_distance(side: str):
    def build(n, ansatz_type, layers, born_layers, n_reference, c, instance_seed, instance) -> Problem:
        rho = frozen_quantum_input(ansatz_type, n, [instance_seed, 1])
        sigma = frozen_quantum_input(ansatz_type, n, [instance_seed, 2])
        templates = {
            "omega": make_opt_template(ansatz_type, n, layers, born_layers, n_reference),
            "tau": make_opt_template(ansatz_type, n, layers, born_layers, n_reference),
        }
        blocks = _angle_blocks(templates) + [_scalar("lam", 1, 1.0), _scalar("mu", 1, 1.0)]
        if side == "dual":
            def dense_fn(states, sc):
                return obj.td_dual_dense(rho.rho, sigma.rho, states[0], states[1], sc["lam"][0], sc["mu"][0], c)

            def term_fn(states, sc, est):
                return obj.td_dual_objective(rho, sigma, states[0], states[1], sc["lam"][0], sc["mu"][0], c, est)

            direction = "min"
        else:
            def dense_fn(states, sc):
                return obj.td_primal_dense(rho.rho, sigma.rho, states[0], states[1], sc["lam"][0], sc["mu"][0], c)

            def term_fn(states, sc, est):
                return obj.td_primal_objective(rho, sigma, states[0], states[1], sc["lam"][0], sc["mu"][0], c, est)

            direction = "max"
        pen_obj = PenaltyObjective(f"trace_distance_{side}", direction, c,
                                   list(templates.values()), blocks, dense_fn, term_fn)
        value = orc.exact_trace_distance(rho.rho, sigma.rho)
        return Problem(pen_obj.tag, pen_obj, orc.OracleResult(value, "trace-norm"), n,
                       {"inputs": "two seeded random mixed states"})
    return build


def _build_fidelity(side: str):
    def build(n, ansatz_type, layers, born_layers, n_reference, c, instance_seed, instance) -> Problem:
        rho = frozen_quantum_input(ansatz_type, n, [instance_seed, 1])
        sigma = frozen_quantum_input(ansatz_type, n, [instance_seed, 2])
        n_alpha = 4**n
        if side == "primal":
            templates = {"omega": make_opt_template(ansatz_type, n + 1, layers, born_layers, n_reference)}
            blocks = _angle_blocks(templates) + [
                _scalar("alpha_re", n_alpha, 0.0, nonneg=False, scale=ALPHA_SCALE),
                _scalar("alpha_im", n_alpha, 0.0, nonneg=False, scale=ALPHA_SCALE),
                _scalar("lam", 1, 1.0),
            ]

            def dense_fn(states, sc):
                alpha = sc["alpha_re"] + 1j * sc["alpha_im"]
                return obj.fidelity_primal_dense(rho.rho, sigma.rho, states[0], alpha, sc["lam"][0], c)

            def term_fn(states, sc, est):
                alpha = sc["alpha_re"] + 1j * sc["alpha_im"]
                return obj.fidelity_primal_objective(rho, sigma, states[0], alpha, sc["lam"][0], c, est)

            direction = "max"
        else:
            templates = {
                "omega": make_opt_template(ansatz_type, n, layers, born_layers, n_reference),
                "tau": make_opt_template(ansatz_type, n, layers, born_layers, n_reference),
                "xi": make_opt_template(ansatz_type, n + 1, layers, born_layers, n_reference),
            }
            blocks = _angle_blocks(templates) + [
                _scalar("lam", 1, 1.0, scale=FD_LM_SCALE),
                _scalar("mu", 1, 1.0, scale=FD_LM_SCALE),
                _scalar("nu", 1, 1.0, scale=FD_NU_SCALE),
            ]

            def dense_fn(states, sc):
                return obj.fidelity_dual_dense(rho.rho, sigma.rho, states[0], states[1], states[2],
                                               sc["lam"][0], sc["mu"][0], sc["nu"][0], c)

            def term_fn(states, sc, est):
                return obj.fidelity_dual_objective(rho, sigma, states[0], states[1], states[2],
                                                   sc["lam"][0], sc["mu"][0], sc["nu"][0], c, est)

            direction = "min"
        pen_obj = PenaltyObjective(f"fidelity_{side}", direction, c,
                                   list(templates.values()), blocks, dense_fn, term_fn)
        value = orc.exact_root_fidelity(rho.rho, sigma.rho)
        return Problem(pen_obj.tag, pen_obj, orc.OracleResult(value, "root-fidelity"), n,
                       {"inputs": "two seeded random mixed states"})
    return build


def _build_negativity(side: str):
    def build(n, ansatz_type, layers, born_layers, n_reference, c, instance_seed, instance) -> Problem:
        if n % 2 != 0:
            raise ValueError("negativity needs an even total qubit count for the A|B split")
        n_a = n_b = n // 2
        rho = frozen_quantum_input(ansatz_type, n, [instance_seed, 1])
        templates = {
            "sigma": make_opt_template(ansatz_type, n, layers, born_layers, n_reference),
            "tau": make_opt_template(ansatz_type, n, layers, born_layers, n_reference),
        }
        n_alpha = 4**n
        alpha_scale = ALPHA_SCALE if side == "primal" else ALPHA_SCALE_STIFF
        blocks = _angle_blocks(templates) + [_scalar("alpha", n_alpha, 0.0, nonneg=False, scale=alpha_scale)]
        if side == "dual":
            blocks.append(_scalar("beta", n_alpha, 0.0, nonneg=False, scale=alpha_scale))
            blocks += [_scalar("lam", 1, 1.0), _scalar("mu", 1, 1.0)]
        else:
            blocks += [_scalar("lam", 1, 1.0, scale=NEG_P_LAM_SCALE),
                       _scalar("mu", 1, 1.0, scale=NEG_P_MU_SCALE)]
        if side == "primal":
            def dense_fn(states, sc):
                return obj.negativity_primal_dense(rho.rho, states[0], states[1], sc["alpha"],
                                                   sc["lam"][0], sc["mu"][0], c, n_a, n_b)

            def term_fn(states, sc, est):
                return obj.negativity_primal_objective(rho, states[0], states[1], sc["alpha"],
                                                       sc["lam"][0], sc["mu"][0], c, n_a, n_b, est)

            direction = "max"
        else:
            def dense_fn(states, sc):
                return obj.negativity_dual_dense(rho.rho, states[0], states[1], sc["alpha"], sc["beta"],
                                                 sc["lam"][0], sc["mu"][0], c, n_a, n_b)

            def term_fn(states, sc, est):
                return obj.negativity_dual_objective(rho, states[0], states[1], sc["alpha"], sc["beta"],
                                                     sc["lam"][0], sc["mu"][0], c, n_a, n_b, est)

            direction = "min"
        pen_obj = PenaltyObjective(f"negativity_{side}", direction, c,
                                   list(templates.values()), blocks, dense_fn, term_fn)
        value = orc.exact_negativity(rho.rho, 2**n_a, 2**n_b)
        return Problem(pen_obj.tag, pen_obj, orc.OracleResult(value, "pt-trace-norm"), n,
                       {"inputs": "one seeded random bipartite state"})
    return build


def _build_cham(side: str):
    def build(n, ansatz_type, layers, born_layers, n_reference, c, instance_seed, instance) -> Problem:
        inst = instance if instance is not None else default_cham_instance()
        h, a_list, b = pauli_instance_from_dict(n, inst)
        h_dense = h.dense()
        a_dense = [a.dense() for a in a_list]
        ell = len(a_list)
        if side == "primal":
            templates = {"rho": make_opt_template(ansatz_type, n, layers, born_layers, n_reference)}
            blocks = _angle_blocks(templates)
            if ell:
                blocks.append(_scalar("z", ell, _slack_init(ell)))

            def dense_fn(states, sc):
                z = sc.get("z", np.zeros(0))
                return obj.cham_primal_dense(states[0], h_dense, a_dense, b, z, c)

            def term_fn(states, sc, est):
                z = sc.get("z", np.zeros(0))
                return obj.cham_primal_objective(states[0], h, a_list, b, z, c, est)

            direction = "min"
        else:
            templates = {"omega": make_opt_template(ansatz_type, n, layers, born_layers, n_reference)}
            blocks = _angle_blocks(templates)
            if ell:
                blocks.append(_scalar("y", ell, 0.001))
            blocks += [_scalar("mu", 1, -0.005, nonneg=False, scale=MU_SCALE),
                       _scalar("nu", 1, 0.001, scale=NU_SCALE)]

            def dense_fn(states, sc):
                y = sc.get("y", np.zeros(0))
                return obj.cham_dual_dense(states[0], h_dense, a_dense, b, y, sc["mu"][0], sc["nu"][0], c)

            def term_fn(states, sc, est):
                y = sc.get("y", np.zeros(0))
                return obj.cham_dual_objective(states[0], h, a_list, b, y, sc["mu"][0], sc["nu"][0], c, est)

            direction = "max"
        pen_obj = PenaltyObjective(f"cham_{side}", direction, c,
                                   list(templates.values()), blocks, dense_fn, term_fn)
        value = orc.sdp_cham_value(h, a_list, b)
        return Problem(pen_obj.tag, pen_obj, value, n, {"instance": inst})
    return build


def _build_cham_interior(n, ansatz_type, layers, born_layers, n_reference, c, instance_seed, instance) -> Problem:
    inst = instance if instance is not None else default_cham_instance()
    eta = float(inst.get("eta", 0.1))
    h, a_list, b = pauli_instance_from_dict(n, inst)
    h_dense = h.dense()
    a_dense = [a.dense() for a in a_list]
    templates = {"rho": make_opt_template(ansatz_type, n, layers, born_layers, n_reference)}
    blocks = _angle_blocks(templates)

    def dense_fn(states, sc):
        energy = float(np.einsum("ij,ji->", h_dense, states[0]).real)
        barrier = 0.0
        for a, bi in zip(a_dense, b):
            slack = float(np.einsum("ij,ji->", a, states[0]).real) - bi
            if slack <= 0:
                raise obj.BarrierViolationError(f"constraint slack {slack:.3e} is not positive")
            barrier -= math.log(slack)
        return energy + eta * barrier, barrier

    def term_fn(states, sc, est):
        return obj.interior_point_cham(states[0], h, a_list, b, eta, est)

    pen_obj = PenaltyObjective("cham_interior_point", "min", c,
                               list(templates.values()), blocks, dense_fn, term_fn)
    value = orc.sdp_cham_value(h, a_list, b)
    return Problem(pen_obj.tag, pen_obj, value, n, {"instance": inst, "eta": eta})


def _build_tvd(side: str):
    def build(n, ansatz_type, layers, born_layers, n_reference, c, instance_seed, instance) -> Problem:
        p = frozen_born_input(n, [instance_seed, 1])
        q = frozen_born_input(n, [instance_seed, 2])
        templates = {
            "r": make_opt_template("born", n, layers, born_layers, None),
            "s": make_opt_template("born", n, layers, born_layers, None),
        }
        blocks = _angle_blocks(templates) + [_scalar("lam", 1, 1.0), _scalar("mu", 1, 1.0)]
        if side == "dual":
            def dense_fn(states, sc):
                return obj.tvd_dual_dense(p, q, states[0], states[1], sc["lam"][0], sc["mu"][0], c)

            def term_fn(states, sc, est):
                return obj.tvd_dual_objective(p, q, states[0], states[1], sc["lam"][0], sc["mu"][0], c, est)

            direction = "min"
        else:
            def dense_fn(states, sc):
                return obj.tvd_primal_dense(p, q, states[0], states[1], sc["lam"][0], sc["mu"][0], c)

            def term_fn(states, sc, est):
                return obj.tvd_primal_objective(p, q, states[0], states[1], sc["lam"][0], sc["mu"][0], c, est)

            direction = "max"
        pen_obj = PenaltyObjective(f"tvd_{side}", direction, c,
                                   list(templates.values()), blocks, dense_fn, term_fn)
        value = orc.exact_tvd(p, q)
        return Problem(pen_obj.tag, pen_obj, orc.OracleResult(value, "half-l1"), n,
                       {"inputs": "two seeded Born-machine distributions"})
    return build


def _build_classical_cham(side: str):
    def build(n, ansatz_type, layers, born_layers, n_reference, c, instance_seed, instance) -> Problem:
        inst = instance if instance is not None else default_classical_cham_instance()
        h, a_list, b = walsh_instance_from_dict(n, inst)
        h_dense = h.dense()
        a_dense = [a.dense() for a in a_list]
        ell = len(a_list)
        if side == "primal":
            templates = {"p": make_opt_template("born", n, layers, born_layers, None)}
            blocks = _angle_blocks(templates)
            if ell:
                blocks.append(_scalar("z", ell, 0.0))

            def dense_fn(states, sc):
                z = sc.get("z", np.zeros(0))
                return obj.classical_cham_primal_dense(states[0], h_dense, a_dense, b, z, c)

            def term_fn(states, sc, est):
                z = sc.get("z", np.zeros(0))
                return obj.classical_cham_primal_objective(states[0], h, a_list, b, z, c, est)

            direction = "min"
        else:
            templates = {"w": make_opt_template("born", n, layers, born_layers, None)}
            blocks = _angle_blocks(templates)
            if ell:
                blocks.append(_scalar("y", ell, 0.0))
            blocks += [_scalar("mu", 1, 0.0, nonneg=False), _scalar("nu", 1, 0.0)]

            def dense_fn(states, sc):
                y = sc.get("y", np.zeros(0))
                return obj.classical_cham_dual_dense(states[0], h_dense, a_dense, b, y, sc["mu"][0], sc["nu"][0], c)

            def term_fn(states, sc, est):
                y = sc.get("y", np.zeros(0))
                return obj.classical_cham_dual_objective(states[0], h, a_list, b, y, sc["mu"][0], sc["nu"][0], c, est)

            direction = "max"
        pen_obj = PenaltyObjective(f"classical_cham_{side}", direction, c,
                                   list(templates.values()), blocks, dense_fn, term_fn)
        value = orc.lp_classical_cham_value(h, a_list, b)
        return Problem(pen_obj.tag, pen_obj, value, n, {"instance": inst})
    return build


_BUILDERS: dict[str, Callable] = {
    "trace_distance_primal": _build_trace_distance("primal"),
    "trace_distance_dual": _build_trace_distance("dual"),
    "fidelity_primal": _build_fidelity("primal"),
    "fidelity_dual": _build_fidelity("dual"),
    "negativity_primal": _build_negativity("primal"),
    "negativity_dual": _build_negativity("dual"),
    "cham_primal": _build_cham("primal"),
    "cham_dual": _build_cham("dual"),
    "cham_interior_point": _build_cham_interior,
    "tvd_primal": _build_tvd("primal"),
    "tvd_dual": _build_tvd("dual"),
    "classical_cham_primal": _build_classical_cham("primal"),
    "classical_cham_dual": _build_classical_cham("dual"),
}
