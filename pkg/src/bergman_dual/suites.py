"""Verification suites.  Each suite turns a SuiteConfig into a VerificationReport."""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass, field

import numpy as np

from . import batteries
from .conformal import CAYLEY, DISK, HALFPLANE, sample_domain
from .errors import ConfigInvalid, UnknownSuite, VerificationError
from .fncore import AnalyticExpr, Const, MobiusComp, Prod, evaluate
from .opsemi import (
    KINDS,
    SCALING,
    apply_group,
    cayley_weighted,
    continuity_probe,
    disk_conjugate_pullback,
    embedding_T,
    fit_embedding_scalar,
    generator_fd,
    l1_group,
    predual_group,
)
from .parse import ParseError, load_battery, parse_expr, to_literal
from .quad import QuadSpec
from .report import Record, VerificationReport
from .spaces import (
    bloch_seminorm,
    growth_ratio,
    l1_norm,
    l1_norm_disk,
    membership,
    pairing,
    pulled_back,
)
from .spectral import (
    DEFAULT_PROBES,
    ResolventQuery,
    boundary_probe,
    eigen_candidate_check,
    resolvent_closed,
    resolvent_identity_residual,
    resolvent_laplace,
    resolvent_norm_probe,
    spectral_circle_check,
)

#: default tolerances; override any of them with SuiteConfig.tolerances
TOLERANCES = {
    "bloch_transport": 1e-6,
    "l1_transport": 1e-6,
    "isometry": 1e-6,
    "group_law": 1e-12,
    "commutation": 1e-10,
    "adjoint": 1e-5,
    "order_low": 0.9,
    "order_high": 1.1,
    "continuity_final": 1e-2,
    "embedding_spread": 1e-2,
    "embedding_constant": 1e-6,
    "embedding_scalar": 1e-6,
    "resolvent_identity": 1e-5,
    "resolvent_cross": 1e-8,
    "circle": 1e-12,
    "norm_bound": 1e-4,
    "eigen_residual": 1e-10,
    "pairing_oracle": 1e-6,
    "sesquilinear": 1e-10,
    "growth_refine": 1e-2,
    "growth_scale": 1e-10,
}

DEFAULT_T = {
    "isometry": (1.0, -1.0, 0.5, -0.5, 0.1, -0.1),
    "group-law": (0.5, -1.0, 2.0),
    "adjoint": (0.5, 1.0),
    "embedding": (1.0,),
}
DEFAULT_LAMBDAS = (2 + 0j, 1 + 1j, -2 + 0j)
N_EIGEN_CANDIDATES = 20
N_CIRCLE_SAMPLES = 1000


@dataclass
class SuiteConfig:
    suite: str
    alpha: float = 0.0
    t: tuple | None = None
    lambdas: tuple = DEFAULT_LAMBDAS
    quad: QuadSpec = field(default_factory=QuadSpec)
    battery: str | None = None
    probes: str | None = None
    tolerances: dict = field(default_factory=dict)
    out: str | None = None
    fmt: str = "json"
    seed: int = 0

    def validate(self) -> "SuiteConfig":
        if self.suite not in SUITES:
            raise UnknownSuite(f"unknown suite {self.suite!r}; choose from {', '.join(sorted(SUITES))}")
        if not self.alpha > -1:
            raise ConfigInvalid(f"alpha must exceed -1, got {self.alpha}")
        for path in (self.battery, self.probes):
            if path is not None and not os.path.isfile(path):
                raise ConfigInvalid(f"file not found: {path}")
        try:
            if self.battery is not None:
                load_battery(self.battery)
            if self.probes is not None:
                self.probe_points()
        except (ParseError, ValueError) as exc:
            raise ConfigInvalid(str(exc)) from exc
        if self.suite == "spectral":
            if not self.lambdas:
                raise ConfigInvalid("spectral suite needs at least one lambda")
            for lam in self.lambdas:
                if complex(lam).real == 0:
                    raise ConfigInvalid(f"lambda = {lam} lies on the imaginary axis, which is the spectrum")
        unknown = set(self.tolerances) - set(TOLERANCES)
        if unknown:
            raise ConfigInvalid(f"unknown tolerance keys: {sorted(unknown)}")
        if self.fmt not in ("json", "csv"):
            raise ConfigInvalid(f"unknown format {self.fmt!r}")
        try:
            self.quad.validate()
        except VerificationError as exc:
            raise ConfigInvalid(str(exc)) from exc
        return self

    def tol(self, key: str) -> float:
        return float(self.tolerances.get(key, TOLERANCES[key]))

    def t_values(self) -> tuple:
        return tuple(self.t) if self.t is not None else DEFAULT_T.get(self.suite, (1.0,))

    def functions(self, default):
        """Battery file contents if given, else ``default``."""
        if self.battery is None:
            return list(default)
        return [e.expr for e in load_battery(self.battery)]

    def probe_points(self):
        if self.probes is None:
            return DEFAULT_PROBES
        pts = []
        with open(self.probes) as fh:
            for line in fh:
                text = line.partition("#")[0].strip()
                if text:
                    pts.append(complex(evaluate(parse_expr(text), 0j)))
        if any(p.imag <= 0 for p in pts):
            raise ConfigInvalid("probe points must lie in the upper half-plane")
        return tuple(pts)


def _label(f: AnalyticExpr) -> str:
    return to_literal(f)


def _guard(report: VerificationReport, name: str, fn):
    """Run ``fn`` and add its records; numeric errors become failing records."""
    try:
        out = fn()
    except (VerificationError, ArithmeticError, ValueError) as exc:
        report.add(Record.failure(name, exc))
        return None
    if isinstance(out, Record):
        report.add(out)
    elif isinstance(out, list):
        for r in out:
            report.add(r)
    return out


# -- suites ----------------------------------------------------------------

def suite_transport(cfg: SuiteConfig, rep: VerificationReport):
    q, tol = cfg.quad, cfg.tol("bloch_transport")
    for f in cfg.functions(batteries.predual_battery()):
        def bloch(f=f):
            u = bloch_seminorm(f, HALFPLANE, q).value
            d = 0.5 * bloch_seminorm(pulled_back(f), DISK, q).value
            return Record.equal(f"bloch-transport {_label(f)}", d, u, tol * (1 + u))
        _guard(rep, f"bloch-transport {_label(f)}", bloch)
    ltol = cfg.tol("l1_transport")
    for f in cfg.functions(batteries.l1_battery()):
        def l1(f=f):
            u = l1_norm(f, cfg.alpha, q).value
            d = 2.0 ** -cfg.alpha * l1_norm_disk(cayley_weighted(f, cfg.alpha), cfg.alpha, q).value
            return Record.equal(f"l1-transport alpha={cfg.alpha} {_label(f)}", d, u, ltol * max(u, 1e-300))
        _guard(rep, f"l1-transport {_label(f)}", l1)


def suite_isometry(cfg: SuiteConfig, rep: VerificationReport):
    q, tol = cfg.quad, cfg.tol("isometry")
    for f in cfg.functions(batteries.predual_battery()):
        try:
            g0 = bloch_seminorm(f, HALFPLANE, q).value
        except VerificationError as exc:
            rep.add(Record.failure(f"isometry {_label(f)}", exc))
            continue
        for kind in KINDS:
            for t in cfg.t_values():
                name = f"isometry {kind} t={t:g} {_label(f)}"
                _guard(rep, name, lambda kind=kind, t=t, f=f: Record.equal(
                    name, g0, bloch_seminorm(apply_group(predual_group(kind, t), f), HALFPLANE, q).value,
                    tol * g0))


def suite_group_law(cfg: SuiteConfig, rep: VerificationReport):
    q = cfg.quad
    grid = sample_domain(HALFPLANE, q).points
    disk = sample_domain(DISK, q).points
    ts = cfg.t_values()
    for f in cfg.functions(batteries.predual_battery()):
        scale = 1 + float(np.max(np.abs(evaluate(f, grid))))
        for kind in KINDS:
            for t in ts:
                for s in ts:
                    name = f"group-law {kind} t={t:g} s={s:g} {_label(f)}"

                    def law(kind=kind, t=t, s=s, f=f, name=name):
                        lhs = apply_group(predual_group(kind, t), apply_group(predual_group(kind, s), f))
                        rhs = apply_group(predual_group(kind, t).compose(predual_group(kind, s)), f)
                        dev = float(np.max(np.abs(evaluate(lhs, grid) - evaluate(rhs, grid))))
                        return Record.equal(name, 0.0, dev, cfg.tol("group_law") * scale)
                    _guard(rep, name, law)
                name = f"commutation {kind} t={t:g} {_label(f)}"

                def comm(kind=kind, t=t, f=f, name=name):
                    lhs = MobiusComp(CAYLEY, apply_group(predual_group(kind, t), f))
                    rhs = disk_conjugate_pullback(kind, t, f)
                    dev = float(np.max(np.abs(evaluate(lhs, disk) - evaluate(rhs, disk))))
                    return Record.equal(name, 0.0, dev, cfg.tol("commutation") * scale)
                _guard(rep, name, comm)


def suite_adjoint(cfg: SuiteConfig, rep: VerificationReport):
    q, tol = cfg.quad, cfg.tol("adjoint")
    gs = batteries.smooth_battery()
    for f in cfg.functions(batteries.l1_battery()):
        for g in gs:
            base = abs(pairing(g, f, cfg.alpha, q))
            for kind in KINDS:
                for t in cfg.t_values():
                    name = f"adjoint {kind} t={t:g} g={_label(g)} f={_label(f)}"

                    def adj(kind=kind, t=t, f=f, g=g, name=name):
                        lhs = pairing(g, apply_group(l1_group(kind, t, cfg.alpha), f), cfg.alpha, q)
                        rhs = pairing(apply_group(predual_group(kind, t), g), f, cfg.alpha, q)
                        return Record.equal(name, 0.0, abs(lhs - rhs), tol * (1 + base))
                    _guard(rep, name, adj)


def suite_generator(cfg: SuiteConfig, rep: VerificationReport):
    q = cfg.quad
    lo, hi = cfg.tol("order_low"), cfg.tol("order_high")
    for f in cfg.functions(batteries.smooth_battery()):
        for kind in KINDS:
            name = f"generator-order {kind} {_label(f)}"

            def gen(kind=kind, f=f, name=name):
                probe = generator_fd(predual_group(kind, 0.0), f, q=q)
                dec = all(b < a for a, b in zip(probe.residuals, probe.residuals[1:]))
                note = "residuals " + " ".join(f"{r:.3e}" for r in probe.residuals)
                if not dec:
                    note += " (not decreasing)"
                rec = Record.within(name, lo, hi, probe.order, note)
                rec.passed = rec.passed and dec
                return rec
            _guard(rep, name, gen)


def suite_continuity(cfg: SuiteConfig, rep: VerificationReport):
    q, frac = cfg.quad, cfg.tol("continuity_final")
    for f in cfg.functions(batteries.smooth_battery()):
        norm = bloch_seminorm(f, HALFPLANE, q).value
        for kind in KINDS:
            name = f"continuity {kind} {_label(f)}"

            def cont(kind=kind, f=f, name=name):
                table = continuity_probe(predual_group(kind, 0.0), f, q=q)
                dec = all(b < a for a, b in zip(table, table[1:]))
                rec = Record.at_most(name, frac * norm, table[-1], 0.0,
                                     "table " + " ".join(f"{v:.3e}" for v in table))
                rec.passed = rec.passed and dec
                return rec
            _guard(rep, name, cont)


def embedding_probes(n: int = 10, radius: float = 0.6):
    """``n`` half-plane probes ``psi(z_k)`` with ``|z_k| <= radius``."""
    k = np.arange(n)
    z = radius * np.sqrt((k + 1) / n) * np.exp(2j * np.pi * 0.618033988749895 * k)
    return CAYLEY(z)


def suite_embedding(cfg: SuiteConfig, rep: VerificationReport):
    q = cfg.quad
    probes = embedding_probes()
    for t in cfg.t_values():
        name = f"embedding T(1)(0) alpha={cfg.alpha} t={t:g}"
        _guard(rep, name, lambda t=t, name=name: Record.equal(
            name, 1 / (cfg.alpha + 1), float(np.real(embedding_T(Const(1), t, cfg.alpha, q)(np.array([0j]))[0])),
            cfg.tol("embedding_constant")))
        for f in cfg.functions(batteries.embedding_battery()):
            def emb(t=t, f=f):
                fit = fit_embedding_scalar(f, t, cfg.alpha, probes, q)
                return [
                    Record.at_most(f"embedding spread t={t:g} {_label(f)}", 0.0, fit.spread,
                                   cfg.tol("embedding_spread")),
                    Record.equal(f"embedding scalar t={t:g} {_label(f)}", fit.claimed, fit.c_star.real,
                                 cfg.tol("embedding_scalar") * fit.claimed,
                                 f"c* = {fit.c_star.real:.12e}{fit.c_star.imag:+.3e}j"),
                ]
            _guard(rep, f"embedding t={t:g} {_label(f)}", emb)


def suite_spectral(cfg: SuiteConfig, rep: VerificationReport):
    q = cfg.quad
    rng = np.random.default_rng(cfg.seed)
    probes = cfg.probe_points()
    resolvent_battery = cfg.functions(batteries.smooth_battery())
    norm_battery = cfg.functions(batteries.predual_battery())
    for lam in cfg.lambdas:
        lam = complex(lam)
        tag = f"lambda={lam.real:g}{lam.imag:+g}i"
        for h in resolvent_battery:
            name = f"resolvent-identity {tag} {_label(h)}"
            _guard(rep, name, lambda h=h, name=name: Record.equal(
                name, 0.0, resolvent_identity_residual(ResolventQuery(lam, h, probes, q)),
                cfg.tol("resolvent_identity")))
            name = f"resolvent-cross {tag} {_label(h)}"

            def cross(h=h, name=name):
                c = resolvent_closed(ResolventQuery(lam, h, probes, q))
                lap = resolvent_laplace(h, lam, np.array(probes), q)
                return Record.equal(name, 0.0, float(np.max(np.abs(c - lap))), cfg.tol("resolvent_cross"))
            _guard(rep, name, cross)
        r = rng.normal(scale=10.0, size=N_CIRCLE_SAMPLES)
        name = f"circle {tag}"
        _guard(rep, name, lambda r=r, name=name: Record.equal(name, 0.0, spectral_circle_check(lam, r),
                                                              cfg.tol("circle")))

        def norms():
            srep = resolvent_norm_probe(lam, norm_battery, q)
            rep.notes[f"max-ratio {tag}"] = srep.max_ratio
            return [Record.at_most(f"resolvent-norm {tag} {_label(h)}", srep.norm_bound, ratio,
                                   cfg.tol("norm_bound"))
                    for h, ratio in zip(norm_battery, srep.ratios)]
        _guard(rep, f"resolvent-norm {tag}", norms)
        bp = boundary_probe(lam, q)
        rep.notes[f"boundary-probe {tag}"] = {
            "candidate_residual": bp.literal_residual,
            "candidate_relative": bp.literal_relative,
            "surrogate_identity_residual": bp.surrogate_residual,
        }
    for k in range(N_EIGEN_CANDIDATES):
        re = rng.uniform(0.2, 2.0) * rng.choice((-1.0, 1.0))
        lam = complex(re, rng.uniform(-2.0, 2.0))
        c = complex(rng.normal(), rng.normal())
        name = f"eigen-candidate {k} lambda={lam.real:.6f}{lam.imag:+.6f}i"

        def eig(lam=lam, c=c, name=name):
            resid, verdict = eigen_candidate_check(lam, c, q)
            ok = resid <= cfg.tol("eigen_residual") * (1 + abs(c)) and not verdict.in_space
            return Record(name, 0.0, float(verdict.in_space), 0.0, ok, "flag",
                          f"eigen residual {resid:.3e}; |g(i)| = {verdict.evidence['abs_f_i']:.6e}")
        _guard(rep, name, eig)


def _expect_flag(expect) -> float:
    if expect is None or expect == "in":
        return 1.0
    if expect == "out":
        return 0.0
    raise ConfigInvalid(f"unknown expectation {expect!r}")


def suite_membership(cfg: SuiteConfig, rep: VerificationReport):
    entries = load_battery(cfg.battery) if cfg.battery else batteries.membership_battery()
    for e in entries:
        name = f"membership {e.source}"

        def mem(e=e, name=name):
            v = membership(e.expr, cfg.quad)
            note = (f"bloch_finite={v.bloch_finite} little_bloch={v.little_bloch} "
                    f"vanishes_at_i={v.vanishes_at_i}")
            return Record.equal(name, _expect_flag(e.expect), float(v.in_space), 0.0, note)
        _guard(rep, name, mem)


def suite_pairing(cfg: SuiteConfig, rep: VerificationReport):
    q = cfg.quad
    fine = q.scaled(2)
    constants = []
    for f in cfg.functions(batteries.l1_battery()):
        fnorm = l1_norm(f, cfg.alpha, q).value
        for g in batteries.smooth_battery():
            tag = f"g={_label(g)} f={_label(f)}"

            def pair(f=f, g=g, tag=tag):
                val, err, _ = pairing(g, f, cfg.alpha, q, full_output=True)
                oracle = pairing(g, f, cfg.alpha, fine)
                a = 0.3 - 1.7j
                scaled = pairing(g, Prod((Const(a), f)), cfg.alpha, q)
                lin = pairing(Prod((Const(a), g)), f, cfg.alpha, q)
                C = abs(val) / (bloch_seminorm(g, HALFPLANE, q).value * fnorm)
                constants.append(C)
                return [
                    Record.equal(f"pairing-oracle {tag}", 0.0, abs(val - oracle),
                                 cfg.tol("pairing_oracle") * (1 + abs(oracle)), f"tail/err estimate {err:.3e}"),
                    Record.equal(f"pairing-conjugate-linear {tag}", 0.0, abs(scaled - np.conj(a) * val),
                                 cfg.tol("sesquilinear") * (1 + abs(val))),
                    Record.equal(f"pairing-linear {tag}", 0.0, abs(lin - a * val),
                                 cfg.tol("sesquilinear") * (1 + abs(val))),
                    Record.at_most(f"pairing-bounded {tag}", math.inf, C, 0.0, "empirical constant"),
                ]
            _guard(rep, f"pairing {tag}", pair)
    if constants:
        rep.notes["pairing-constant-max"] = max(constants)


def suite_growth(cfg: SuiteConfig, rep: VerificationReport):
    q = cfg.quad
    for f in cfg.functions(batteries.l1_battery()):
        tag = f"alpha={cfg.alpha} {_label(f)}"

        def growth(f=f, tag=tag):
            K = growth_ratio(f, cfg.alpha, q)
            K2 = growth_ratio(f, cfg.alpha, q.scaled(2))
            K10 = growth_ratio(Prod((Const(10), f)), cfg.alpha, q)
            return [
                Record.equal(f"growth-refine {tag}", K2, K, cfg.tol("growth_refine") * K2, f"K = {K:.12e}"),
                Record.equal(f"growth-scale {tag}", K, K10, cfg.tol("growth_scale") * K),
            ]
        _guard(rep, f"growth {tag}", growth)


SUITES = {
    "transport": suite_transport,
    "isometry": suite_isometry,
    "group-law": suite_group_law,
    "adjoint": suite_adjoint,
    "generator": suite_generator,
    "continuity": suite_continuity,
    "embedding": suite_embedding,
    "spectral": suite_spectral,
    "membership": suite_membership,
    "pairing": suite_pairing,
    "growth": suite_growth,
}


def run_suite(cfg: SuiteConfig) -> VerificationReport:
    """Validate ``cfg`` and run the named suite."""
    cfg.validate()
    q = cfg.quad
    rep = VerificationReport(cfg.suite, environment={
        "alpha": cfg.alpha,
        "radial_nodes": q.radial_nodes,
        "angular_nodes": q.angular_nodes,
        "eps": q.eps,
        "tol": q.tol,
        "max_depth": q.max_depth,
        "seed": cfg.seed,
        "battery": os.path.basename(cfg.battery) if cfg.battery else "default",
    })
    start = time.perf_counter()
    SUITES[cfg.suite](cfg, rep)
    rep.wall_time = time.perf_counter() - start
    if not rep.records:
        rep.warnings.append("no records: the battery is empty")
    return rep
