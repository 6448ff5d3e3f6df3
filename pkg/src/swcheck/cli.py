"""Command-line front end: run named check suites, emit JSON reports.

Subcommands: clifford, selfdual, curvature, model, dirac, solution, all.
Exit code 0 means every check passed, 1 means a check failed, 2 means the
invocation or an input file was invalid.

Reports are JSON with one row per check (name, residual, tolerance, pass);
identical (suite, seed, samples) invocations produce byte-identical reports
except for the wall-time field.  Default tolerances: 0 for the exact
algebraic suites, 1e-12 for pointwise polynomial suites, 1e-6 for the
finite-difference comparison (1e-10 for the dbar identity).

Every suite accepts ``--perturb EPS``, a fault-injection knob that corrupts
one well-defined input of the suite before running, so that harnesses can
verify the checks are not vacuous; with a nonzero EPS the suite must fail.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import cliff5, curvature, extalg, models
from .cliff5 import GAMMA, PSI0
from .dirac_sw import (
    FormSpinorField,
    SpinConnection,
    SpinorField,
    SWPair,
    canonical_solution,
    dbar_identity_residual,
    derive_identification,
    form_clifford_action,
    full_dirac,
    full_dirac_fd,
    kohn_dirac,
    sw_residual,
)
from .extalg import (
    KForm,
    anti_self_dual_basis,
    basis_form,
    contact_star,
    deta,
    form_inner,
    hodge_star,
    sd_project,
    self_dual_basis,
    volume_form,
    wedge,
)
from .models import ModelFormatError, load_model, sample_points
from .poly import PolyExpr, PolySyntaxError

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _check(name: str, residual: float, tol: float) -> dict:
    return {
        "name": name,
        "residual": float(residual),
        "tolerance": float(tol),
        "pass": bool(float(residual) <= float(tol)),
    }


def _floor_check(name: str, value: float, floor: float) -> dict:
    """Check that a quantity stays above a floor (nondegeneracy)."""
    return {
        "name": name,
        "residual": float(max(0.0, floor - value)),
        "tolerance": 0.0,
        "pass": bool(value >= floor),
    }


# -- suites ----------------------------------------------------------------------


def _suite_clifford(ns) -> dict:
    perturb = ns.perturb
    gs = [np.array(g) for g in GAMMA]
    if perturb:
        gs[0][0, 0] += perturb

    checks = []
    r = 0.0
    for i in range(5):
        for j in range(5):
            ac = gs[i] @ gs[j] + gs[j] @ gs[i]
            target = -2 * np.eye(4) if i == j else np.zeros((4, 4))
            r = max(r, float(np.max(np.abs(ac - target))))
    checks.append(_check("anticommutation_relations", r, 0.0))

    r = max(
        float(np.max(np.abs(g.conj().T + g))) for g in gs
    )
    checks.append(_check("generators_skew_hermitian", r, 0.0))
    r = max(float(np.max(np.abs(g.conj().T @ g - np.eye(4)))) for g in gs)
    checks.append(_check("generators_unitary", r, 0.0))

    kd = gs[0] @ gs[1] + gs[2] @ gs[3]
    checks.append(
        _check(
            "deta_matrix_diagonal",
            float(np.max(np.abs(kd - np.diag([0, 2j, 0, -2j])))),
            0.0,
        )
    )
    checks.append(
        _check("deta_action_on_psi0", float(np.max(np.abs(kd @ PSI0 + 2j * PSI0))), 0.0)
    )

    eig = np.sort_complex(np.linalg.eigvals(cliff5.kappa_deta()))
    target = np.sort_complex(np.array([0, 0, 2j, -2j]))
    checks.append(_check("deta_spectrum", float(np.max(np.abs(eig - target))), 1e-14))
    p2, p0, pm = cliff5.deta_eigenprojectors()
    r = float(np.max(np.abs(p2 + p0 + pm - np.eye(4))))
    ranks = (
        int(round(np.trace(p2).real)),
        int(round(np.trace(p0).real)),
        int(round(np.trace(pm).real)),
    )
    r = max(r, float(abs(ranks != (1, 2, 1))))
    checks.append(_check("eigenprojectors_complete_ranks_121", r, 0.0))

    sig = cliff5.sigma_h(PSI0)
    checks.append(
        _check("sigma_h_psi0", (sig - (-1j) * deta()).norm_inf(), 0.0)
    )
    r = 0.0
    for s in (-1.0, -2.0, -4.0):
        scaled = (-s) * cliff5.sigma_h(PSI0)
        r = max(r, (scaled - (1j * s) * deta()).norm_inf())
    checks.append(_check("sigma_h_scaling_identity", r, 0.0))

    rng = np.random.default_rng(ns.seed)
    r = 0.0
    for _ in range(200):
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        sig = cliff5.sigma_full(psi)
        r = max(r, float(np.max(np.abs(sig.coeffs.real))))
    checks.append(_check("sigma_coefficients_imaginary", r, 1e-12))

    return _report("clifford", ns, checks)


def _suite_selfdual(ns) -> dict:
    perturb = ns.perturb
    checks = []

    r = 0.0
    for k in range(6):
        for idx in extalg.INDEX_TUPLES[k]:
            b = basis_form(*idx)
            r = max(r, (hodge_star(hodge_star(b)) - b).norm_inf())
    if perturb:
        r += perturb
    checks.append(_check("hodge_star_involution_32_basis_forms", r, 0.0))

    vol = volume_form()
    r = 0.0
    for k in range(6):
        for idx in extalg.INDEX_TUPLES[k]:
            b = basis_form(*idx)
            r = max(r, (wedge(b, hodge_star(b)) - vol).norm_inf())
    checks.append(_check("hodge_defining_property_basis", r, 0.0))

    rng = np.random.default_rng(ns.seed)
    r = 0.0
    for _ in range(100):
        c = rng.normal(size=10)
        a = KForm(2, c.astype(complex))
        norm2 = float(np.dot(c, c))
        r = max(r, (wedge(a, hodge_star(a)) - norm2 * vol).norm_inf())
    checks.append(_check("hodge_defining_property_random", r, 1e-13))

    r = 0.0
    for idx in extalg.INDEX_TUPLES[2]:
        if 5 in idx:
            continue
        b = basis_form(*idx)
        r = max(r, (contact_star(contact_star(b)) - b).norm_inf())
    checks.append(_check("contact_star_involution", r, 0.0))

    r = (contact_star(deta()) - deta()).norm_inf()
    checks.append(_check("deta_self_dual", r, 0.0))

    r = 0.0
    for b in self_dual_basis():
        r = max(r, (contact_star(b) - b).norm_inf())
    for b in anti_self_dual_basis():
        r = max(r, (contact_star(b) + b).norm_inf())
    checks.append(_check("sd_asd_eigenbases", r, 0.0))

    r = 0.0
    for _ in range(100):
        c = rng.normal(size=10).astype(complex)
        for pos, idx in enumerate(extalg.INDEX_TUPLES[2]):
            if 5 in idx:
                c[pos] = 0
        beta = KForm(2, c)
        plus, minus = sd_project(beta)
        r = max(r, abs(form_inner(plus, minus)))
        r = max(r, (plus + minus - beta).norm_inf())
    checks.append(_check("sd_projection_orthogonal", r, 1e-13))

    return _report("selfdual", ns, checks)


def _suite_curvature(ns) -> dict:
    perturb = ns.perturb
    n = ns.samples
    tol = ns.tol
    checks = []

    r = 0.0
    rj = 0.0
    rjj = 0.0
    for k in range(n):
        c = curvature.random_admissible_ricci(ns.seed + k)
        ric = np.array(c.ric)
        if perturb:
            ric[0, 0] += perturb
            c = curvature.CurvatureData(ric)
        rp = curvature.rho_plus(c, check=not perturb)
        r = max(r, (rp + (c.s / 4.0) * deta()).norm_inf())
        rj = max(rj, float(np.max(np.abs(curvature.J_FRAME @ ric - ric @ curvature.J_FRAME))))
        jh = curvature.J_FRAME[:4, :4]
        rjj = max(rjj, float(np.max(np.abs(jh.T @ ric[:4, :4] @ jh - ric[:4, :4]))))
    checks.append(_check("rho_plus_is_minus_quarter_s_deta", r, tol))
    checks.append(_check("J_commutes_with_ricci", rj, 0.0 if not perturb else tol))
    checks.append(_check("ricci_J_invariance", rjj, 1e-14))

    ei = np.eye(5)
    pairs = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    r = 0.0
    for k in range(n):
        tau = curvature.random_admissible_torsion(ns.seed + k)
        t = np.array(tau.tau)
        if perturb:
            t[0, 1] += perturb
            tau = curvature.TorsionEndomorphism(t)
        for i, j in pairs:
            r = max(r, abs(curvature.bianchi_b(tau, ei[i], ei[j])))
    checks.append(_check("bianchi_correction_vanishes", r, tol))

    r = 0.0
    for k in range(min(n, 2000)):
        c = curvature.random_admissible_ricci(ns.seed + k)
        if perturb:
            ric = np.array(c.ric)
            ric[0, 0] += perturb
            c = curvature.CurvatureData(ric)
        r = max(r, curvature.ric_identity_check(c))
    checks.append(_check("ricci_reconstruction_identity", r, tol))

    r = 0.0
    for k in range(10):
        c = curvature.random_admissible_ricci(ns.seed + 31 * k)
        t4 = curvature.curvature_tensor(c)
        rep = curvature.symmetry_check(t4)
        r = max(r, max(rep.values()))
        trace = t4.ricci_trace()
        rho = (curvature.J_FRAME @ c.ric).astype(complex)
        r = max(r, float(np.max(np.abs(trace - 1j * rho))))
    checks.append(_check("curvature_tensor_symmetries_and_trace", r, 1e-12))

    return _report("curvature", ns, checks)


def _suite_model(ns) -> dict:
    try:
        bundle = load_model(ns.model)
    except ModelFormatError as exc:
        raise ModelFormatError(f"{ns.model}: {exc}") from exc
    frame = bundle.frame
    if ns.perturb:
        y2 = PolyExpr.variable("y2")
        jrows = [list(row) for row in frame.jmat]
        jrows[0][2] = jrows[0][2] + ns.perturb * y2
        frame = models.FrameFieldSet(
            frame.name, frame.fields, frame.eta, tuple(tuple(r) for r in jrows)
        )
    points = sample_points(ns.samples, ns.seed)
    tol = ns.tol
    checks = []

    cc = models.contact_check(frame, points)
    vol_min = cc.pop("contact_volume_min")
    for name, residual in sorted(cc.items()):
        checks.append(_check(f"contact_{name}", residual, tol))
    checks.append(_floor_check("contact_volume_nondegenerate", vol_min, 1e-9))
    if ns.model == "heisenberg":
        vol = models.contact_volume(frame)
        r = max(abs(vol(p) - 2.0) for p in points)
        checks.append(_check("contact_volume_equals_2", r, tol))

    tw = models.tw_axiom_check(frame, bundle.connection, points)
    for name, residual in sorted(tw.items()):
        checks.append(_check(f"tw_{name}", residual, tol))

    cr = models.cr_check(frame, points)
    for name, residual in sorted(cr.items()):
        checks.append(_check(f"cr_{name}", residual, tol))

    return _report("model", ns, checks)


def _rand_component(rng, degree: int) -> PolyExpr:
    terms = {}
    for _ in range(4):
        exp = tuple(int(v) for v in rng.integers(0, degree + 1, size=5))
        if sum(exp) > degree:
            continue
        terms[exp] = complex(rng.normal(), rng.normal())
    return PolyExpr.from_dict(terms)


def _suite_dirac(ns) -> dict:
    checks = []
    s = SpinConnection.heisenberg()
    rng = np.random.default_rng(ns.seed)
    points = sample_points(20, ns.seed + 1)

    psi0 = SpinorField.psi0()
    if ns.perturb:
        psi0 = psi0 + SpinorField.make(ns.perturb * PolyExpr.variable("x1"), 0, 0, 0)
    r = 0.0
    rk = 0.0
    for p in points:
        r = max(r, float(np.max(np.abs(full_dirac(s, psi0, p)))))
        rk = max(rk, float(np.max(np.abs(kohn_dirac(s, psi0, p)))))
    checks.append(_check("full_dirac_psi0_zero", r, 0.0))
    checks.append(_check("kohn_dirac_psi0_zero", rk, 0.0))

    n_fields = ns.samples
    r = 0.0
    for _ in range(n_fields):
        psi = SpinorField(tuple(_rand_component(rng, 3) for _ in range(4)))
        for p in points:
            exact = full_dirac(s, psi, p)
            approx = full_dirac_fd(s, psi, p, h=ns.h)
            r = max(r, float(np.max(np.abs(exact - approx))))
    checks.append(_check("finite_difference_agreement", r, ns.tol))

    fields = [
        FormSpinorField(tuple(_rand_component(rng, 3) for _ in range(4))) for _ in range(20)
    ]
    r = dbar_identity_residual(fields, points[:10])
    checks.append(_check("dbar_identity", r, 1e-10))

    phi = derive_identification()
    r = float(np.max(np.abs(phi.conj().T @ phi - np.eye(4))))
    for i in range(1, 6):
        x = np.zeros(5)
        x[i - 1] = 1.0
        r = max(
            r,
            float(np.max(np.abs(phi @ form_clifford_action(x) - cliff5.gamma(i) @ phi))),
        )
    checks.append(_check("identification_unitary_intertwiner", r, 1e-12))

    psi = SpinorField(tuple(_rand_component(rng, 2) for _ in range(4)))
    phase = np.exp(1j * 0.7)
    psi_rot = psi.scale(phase)
    r = 0.0
    for p in points[:5]:
        r = max(
            r,
            float(
                np.max(
                    np.abs(
                        np.abs(full_dirac(s, psi_rot, p)) - np.abs(full_dirac(s, psi, p))
                    )
                )
            ),
        )
        r = max(
            r,
            (cliff5.sigma_full(psi_rot.evaluate(p)) - cliff5.sigma_full(psi.evaluate(p))).norm_inf(),
        )
    checks.append(_check("phase_invariance", r, 1e-12))

    return _report("dirac", ns, checks)


def _format_deta_multiple(form: KForm) -> str:
    """Render an exact multiple of deta like "i*deta"; fall back to repr."""
    target = deta()
    c12 = form.coefficient(1, 2)
    if (form - c12 * target).norm_inf() == 0:
        if c12 == 1j:
            return "i*deta"
        if c12 == -1j:
            return "-i*deta"
        if c12.real == 0:
            return f"{c12.imag:g}i*deta"
        return f"({c12:g})*deta"
    return repr(form)


def _suite_solution(ns) -> dict:
    s_val = ns.scalar
    if s_val >= 0:
        raise UsageError(f"--scalar must be negative, got {s_val}")
    checks = []
    sol = canonical_solution(s_val)

    psi = sol.pair.psi
    if ns.perturb:
        psi = psi.scale(1.0 + ns.perturb)
    pair = SWPair.on_synthetic(sol.model, psi)
    res = sw_residual(pair)

    checks.append(_check("dirac_residual", res.r_dirac, 0.0))
    checks.append(_check("curvature_residual_exact_chain", sol.r_curv, 0.0))
    checks.append(_check("curvature_residual_pointwise", res.r_curv, ns.tol))
    checks.append(_check("sigma_vertical_part", res.sigma_vertical, ns.tol))

    r = (sol.sigma_h_psi - (1j * s_val) * deta()).norm_inf()
    checks.append(_check("sigma_h_equals_i_s_deta", r, 0.0))
    r = (sol.rho_plus + (s_val / 4.0) * deta()).norm_inf()
    checks.append(_check("rho_plus_equals_minus_quarter_s_deta", r, 0.0))

    doubled = SWPair.on_synthetic(sol.model, SpinorField.psi0(2.0 * sol.amplitude))
    res2 = sw_residual(doubled)
    r = abs(res2.r_curv - abs(3.0 * s_val / 4.0))
    checks.append(_check("scaled_spinor_mismatch_closed_form", r, ns.tol))

    report = _report("solution", ns, checks)
    report["F_A_plus"] = _format_deta_multiple(sol.f_a_plus)
    report["sigma_h_psi"] = _format_deta_multiple(sol.sigma_h_psi)
    return report


def _suite_all(ns) -> dict:
    sub = {}
    ok = True
    for name in ("clifford", "selfdual", "curvature", "model", "dirac", "solution"):
        rep = SUITES[name](_SubNS(name, ns))
        sub[name] = rep
        ok = ok and rep["pass"]
    return {
        "suite": "all",
        "model": ns.model,
        "parameters": _parameters(ns),
        "suites": sub,
        "pass": ok,
    }


SUITES = {
    "clifford": _suite_clifford,
    "selfdual": _suite_selfdual,
    "curvature": _suite_curvature,
    "model": _suite_model,
    "dirac": _suite_dirac,
    "solution": _suite_solution,
    "all": _suite_all,
}

_DEFAULTS = {
    "clifford": dict(samples=200, tol=0.0),
    "selfdual": dict(samples=100, tol=0.0),
    "curvature": dict(samples=10000, tol=1e-12),
    "model": dict(samples=1000, tol=1e-12),
    "dirac": dict(samples=50, tol=1e-6),
    "solution": dict(samples=1, tol=1e-12),
    "all": dict(samples=None, tol=None),
}


def _parameters(ns) -> dict:
    out = {
        "samples": ns.samples,
        "seed": ns.seed,
        "tol": ns.tol,
        "h": ns.h,
        "perturb": ns.perturb,
        "model": ns.model,
    }
    if ns.command == "solution":
        out["scalar"] = ns.scalar
    return out


def _report(suite: str, ns, checks: list[dict]) -> dict:
    return {
        "suite": suite,
        "model": ns.model,
        "parameters": _parameters(ns),
        "checks": checks,
        "pass": all(c["pass"] for c in checks),
    }


class _SubNS:
    """View of the parsed namespace with suite-specific defaults filled in.

    ``all`` keeps samples/tol unset so every sub-suite resolves its own
    default unless the user overrode them explicitly.
    """

    def __init__(self, command, base):
        d = _DEFAULTS[command]
        self.command = command
        self.samples = base.samples if base.samples is not None else d["samples"]
        self.tol = base.tol if base.tol is not None else d["tol"]
        self.seed = base.seed
        self.h = base.h
        self.perturb = base.perturb
        self.model = base.model
        self.scalar = base.scalar
        self.output = base.output


def build_parser() -> _Parser:
    p = _Parser(
        prog="swcheck",
        description="Certify the identities of Seiberg-Witten like equations "
        "on contact metric 5-manifolds.",
    )
    p.add_argument(
        "command",
        choices=sorted(SUITES.keys()),
        help="check suite to run",
    )
    p.add_argument("--samples", type=int, default=None, help="sample count (suite-specific default)")
    p.add_argument("--seed", type=int, default=0, help="seed for all random draws")
    p.add_argument("--tol", type=float, default=None, help="pointwise tolerance override")
    p.add_argument("--h", type=float, default=1e-4, help="finite-difference step")
    p.add_argument("--scalar", type=float, default=-4.0, help="scalar curvature for the solution suite")
    p.add_argument("--model", default="heisenberg", help="builtin model name or JSON file path")
    p.add_argument("--output", default=None, help="write the JSON report to this path")
    p.add_argument(
        "--perturb",
        type=float,
        default=0.0,
        help="fault injection: corrupt one suite input by this amount (the suite must then fail)",
    )
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        base = parser.parse_args(argv)
    except UsageError as exc:
        print(f"swcheck: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if base.samples is not None and base.samples < 1:
        print("swcheck: error: --samples must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    if base.tol is not None and base.tol < 0:
        print("swcheck: error: --tol must be >= 0", file=sys.stderr)
        return EXIT_USAGE
    if base.h <= 0:
        print("swcheck: error: --h must be positive", file=sys.stderr)
        return EXIT_USAGE

    ns = _SubNS(base.command, base)
    start = time.perf_counter()
    try:
        report = SUITES[base.command](ns)
    except UsageError as exc:
        print(f"swcheck: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ModelFormatError, PolySyntaxError, FileNotFoundError) as exc:
        print(f"swcheck: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report["wall_time_s"] = time.perf_counter() - start

    text = json.dumps(report, indent=2, sort_keys=True)
    if ns.output:
        with open(ns.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_PASS if report["pass"] else EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
