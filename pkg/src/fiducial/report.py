"""Verification suite: registry of checks, run configuration and reports.

Every check is seeded from ``SeedSequence([run_seed, crc32(check_name)])``
so results do not depend on which checks run or in which order.
"""

import json
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from . import axioms, classical, composition, measurement, quantum
from .config import DEFAULT
from .core import as_vector, probability, rank
from .errors import ConfigError
from .serialize import model_from_descriptor

DEFAULT_THEORIES = [{"kind": "quantum", "n": n} for n in (2, 3, 4)] + [
    {"kind": "classical", "n": n} for n in (2, 3, 4, 5, 6)
]


@dataclass(frozen=True)
class Check:
    name: str
    anchor: str
    tolerance: float
    run: object


@dataclass
class CheckRecord:
    name: str
    anchor: str
    passed: bool
    measured: object
    tolerance: float
    seed: int
    witness: object = None
    error: str = None
    runtime: float = 0.0

    def to_json(self, include_timing=False):
        d = {
            "name": self.name,
            "anchor": self.anchor,
            "status": "pass" if self.passed else "fail",
            "measured": self.measured,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "witness": self.witness,
            "error": self.error,
        }
        if include_timing:
            d["runtime"] = self.runtime
        return d


@dataclass
class VerificationReport:
    records: list
    seed: int
    tolerances: dict
    theories: list
    version: str = __version__
    timing: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(r.passed for r in self.records)

    @property
    def exit_code(self):
        return 0 if self.passed else 1

    def to_json(self, include_timing=False):
        d = {
            "tool": "fiducial",
            "version": self.version,
            "verdict": "pass" if self.passed else "fail",
            "seed": self.seed,
            "seeds": {r.name: r.seed for r in self.records},
            "theories": self.theories,
            "tolerances": self.tolerances,
            "checks": [r.to_json() for r in self.records],
        }
        if include_timing:
            d["timing"] = {r.name: r.runtime for r in self.records}
        return d

    def dumps(self, include_timing=False):
        return json.dumps(self.to_json(include_timing), indent=2, sort_keys=True) + "\n"

    def text(self):
        lines = []
        for r in self.records:
            status = "PASS" if r.passed else "FAIL"
            lines.append(f"{status}  {r.name:<26} measured={_short(r.measured)}  tol={r.tolerance:g}")
            if r.error:
                lines.append(f"      error: {r.error}")
        lines.append(f"verdict: {'pass' if self.passed else 'fail'} ({len(self.records)} checks)")
        return "\n".join(lines) + "\n"


def _short(x):
    s = json.dumps(x, sort_keys=True)
    return s if len(s) <= 60 else s[:57] + "..."


# --- checks -----------------------------------------------------------------
# Each check takes (models, rng, tol) and returns (passed, measured, witness).


def _quantum(models):
    return [m for m in models if m.kind == "quantum" and not m.parts]


def _classical(models):
    return [m for m in models if m.kind == "classical" and not m.parts]


PAULI_STATES = {
    "z+": [1, 0],
    "z-": [0, 1],
    "x+": [1 / np.sqrt(2), 1 / np.sqrt(2)],
    "x-": [1 / np.sqrt(2), -1 / np.sqrt(2)],
    "y+": [1 / np.sqrt(2), 1j / np.sqrt(2)],
    "y-": [1 / np.sqrt(2), -1j / np.sqrt(2)],
}


def check_roundtrip(models, rng, tol):
    frame = quantum.fiducial_frame(2)
    worst = 0.0
    for ket in PAULI_STATES.values():
        v = np.asarray(ket, dtype=complex)
        proj = np.outer(v, v.conj())
        p = quantum.rho_to_p(frame, proj)
        worst = max(worst, np.linalg.norm(quantum.p_to_rho(frame, p) - proj), np.linalg.norm(quantum.qubit_rho(p) - proj))
    for m in _quantum(models) or [quantum.QuantumModel(2)]:
        for _ in range(200):
            rho = quantum.random_density_matrix(m.n, rng)
            worst = max(worst, np.linalg.norm(m.rho(m.p(rho)) - rho))
    return worst <= tol, worst, None


def check_trace_formula(models, rng, tol):
    worst = 0.0
    for m in _quantum(models):
        for _ in range(200):
            a = quantum.random_effect_operator(m.n, rng)
            rho = quantum.random_density_matrix(m.n, rng)
            r = quantum.operator_to_effect(m.frame, a)
            worst = max(worst, abs(probability(r, m.p(rho)) - np.trace(a @ rho).real))
    return worst <= tol, worst, None


def check_k_rank(models, rng, tol):
    got = {}
    ok = True
    for m in models:
        rows = [m.random_state(rng) for _ in range(5 * m.k)]
        got[f"{m.kind}-{m.n}"] = rk = rank(rows, tol)
        ok &= rk == m.k
    return ok, got, None


def check_extreme_points(models, rng, tol):
    out = {}
    ok = True
    for m in _classical(models):
        verts = classical.extreme_points(m.n)
        extra = [m.random_state(rng) for _ in range(5)]
        keep = classical.extremal_subset(verts + extra, tol)
        inside = all(classical.in_convex_hull(verts, m.random_state(rng), tol) for _ in range(20))
        outside = np.full(m.n, 1.0 / m.n + 0.1)
        rejected = not classical.in_convex_hull(verts, outside, tol) and not m.contains_state(outside)
        good = keep == list(range(m.n + 1)) and inside and rejected
        out[f"classical-{m.n}"] = len(keep)
        ok &= good
    return ok, out, None


def check_ball(models, rng, tol):
    model = quantum.QuantumModel(2)
    worst = 0.0
    for _ in range(1000):
        worst = max(worst, abs(quantum.ball_radius(model.random_state(rng, pure=True)) - 0.5))
    max_mixed = max(quantum.ball_radius(model.random_state(rng)) for _ in range(1000))
    ok = worst <= tol and max_mixed < 0.5 - tol
    return ok, {"pure_radius_error": worst, "max_mixed_radius": max_mixed}, None


def check_composition(models, rng, tol):
    pairs = [(quantum.QuantumModel(2), quantum.QuantumModel(2)), (quantum.QuantumModel(2), quantum.QuantumModel(3)),
             (classical.ClassicalModel(2), classical.ClassicalModel(3))]
    got = {}
    ok = True
    for a, b in pairs:
        comp = composition.compose_models(a, b)
        rows = [comp.random_state(rng) for _ in range(5 * comp.k)]
        span = rank(rows, tol)
        sep = composition.separable_span_dim(a, b, comp.k + 20, seed=int(rng.integers(2**31)))
        got[f"{a.kind}-{a.n}x{b.n}"] = [span, sep]
        ok &= span == sep == a.k * b.k == comp.k
    return ok, got, None


def check_distinguishability(models, rng, tol):
    got = {}
    ok = True
    for m in models:
        if (m.kind == "classical" and m.n > 6) or (m.kind == "quantum" and m.n > 4):
            continue
        cands = m.pure_family()
        if m.kind == "classical":
            cands = cands + [as_vector(np.full(m.n, 1.0 / m.n))]
        cert = axioms.max_distinguishable(m, cands)
        got[f"{m.kind}-{m.n}"] = cert.size
        ok &= cert.size == m.n and axioms.verify_certificate(m, cert)
    q = quantum.QuantumModel(2)
    triple = [q.p(np.outer(v, np.conj(v))) for v in (PAULI_STATES["z+"], PAULI_STATES["z-"], PAULI_STATES["x+"])]
    got["qubit-triple"] = size = axioms.max_distinguishable(q, triple).size
    ok &= size == 2
    return ok, got, None


def check_discreteness(models, rng, tol):
    got = {n: classical.classical_discreteness_gap(n) for n in sorted({m.n for m in _classical(models)} | {2, 3, 4}) if 2 <= n <= 8}
    ok = all(abs(g - 2.0) <= tol for g in got.values())
    return ok, {str(k): v for k, v in got.items()}, None


def check_continuity(models, rng, tol):
    ratios = []
    all_pure = True
    for m in _quantum(models) or [quantum.QuantumModel(2)]:
        for _ in range(3):
            a, b = m.random_state(rng, pure=True), m.random_state(rng, pure=True)
            gaps = []
            for steps in (100, 1000):
                w = axioms.continuity_witness(m, a, b, steps)
                all_pure &= all(m.is_pure(p) for p in w.path[::10])
                gaps.append(max(np.linalg.norm(q - p) for p, q in zip(w.path, w.path[1:])))
            ratios.append(gaps[0] / gaps[1])
    c = axioms.continuity_witness(classical.ClassicalModel(2), [1, 0], [0, 1])
    ok = all_pure and all(5 <= x <= 20 for x in ratios) and c.gap is not None and abs(c.gap - 2.0) <= tol
    return ok, {"min_ratio": min(ratios), "max_ratio": max(ratios), "classical_gap": c.gap}, None


def check_power_law(models, rng, tol):
    tables = {
        "quantum": [(n, n * n) for n in (1, 2, 3, 4, 6)],
        "classical": [(n, n) for n in (1, 2, 3, 4)],
    }
    for m in models:
        tables[m.kind].append((m.n, m.k))
    got = {}
    ok = True
    for kind, rows in tables.items():
        rows = sorted(set(rows))
        res = axioms.verify_power_law(rows)
        got[kind] = res.r
        ok &= res.consistent and res.r == (2 if kind == "quantum" else 1)
        rejected = 0
        for _ in range(25):
            bad = list(rows)
            i = int(rng.integers(len(bad)))
            delta = int(rng.choice([-2, -1, 1, 2]))
            n, k = bad[i]
            bad[i] = (n, k + delta if k + delta >= 0 else k - delta)
            rejected += not axioms.verify_power_law(bad).consistent
        got[f"{kind}_rejected"] = rejected
        ok &= rejected == 25
    return ok, got, None


def check_instruments(models, rng, tol):
    got = {}
    ok = True
    for m in models:
        if m.kind == "quantum":
            projs = [np.diag(np.eye(m.n)[i]) for i in range(m.n)]
            ins = measurement.lueders_instrument(m, projs)
        else:
            ins = measurement.box_instrument(m)
        p = m.random_state(rng)
        total = sum(measurement.apply_update(ins, p, label)[1] for label in ins.labels)
        preserving = abs(total - m.normalization(p)) <= tol
        got[f"{m.kind}-{m.n}"] = len(ins)
        ok &= preserving and bool(m.validate_transform(ins.total()))
    return ok, got, None


def check_frequencies(models, rng, tol):
    q = quantum.QuantumModel(2)
    ins = measurement.lueders_instrument(q, [np.diag([1, 0]), np.diag([0, 1])], labels=["+", "-"])
    plus = q.p(np.full((2, 2), 0.5))
    base = int(rng.integers(2**31))
    dev = measurement.simulate_frequencies(q, plus, ins, 10**6, base).max_deviation
    ratio = measurement.convergence_ratio(q, plus, ins, 10**3, [base + i for i in range(20)])
    ok = dev <= tol and 5 <= ratio <= 20
    return ok, {"max_deviation": dev, "ratio": ratio}, None


def check_affinity(models, rng, tol):
    worst = 0.0
    ok = True
    for m in models:
        planted = m.random_state(rng)
        probes = axioms.default_affinity_probes(m, seed=int(rng.integers(2**31)))
        res = axioms.verify_affinity(lambda p: planted @ p, probes)
        ok &= res.affine and res.effect is not None
        if res.effect is not None:
            worst = max(worst, float(np.abs(res.effect - planted).max()))
    bad = axioms.verify_affinity(lambda p: p[0] ** 2, [([1.0, 0.0], [0.0, 1.0], 0.5)])
    ok &= not bad.affine and bad.witness["lhs"] == 0.25 and bad.witness["rhs"] == 0.5
    return ok and worst <= tol, {"max_effect_error": worst, "counterexample": [bad.witness["lhs"], bad.witness["rhs"]]}, None


REGISTRY = {
    c.name: c
    for c in [
        Check("roundtrip", "qubit density matrix rebuilt from z+, z-, x+, y+ probabilities", 1e-12, check_roundtrip),
        Check("trace_formula", "outcome probability r.p equals tr(A rho)", 1e-12, check_trace_formula),
        Check("k_rank", "K = N for classical and K = N^2 for quantum states", DEFAULT.rank, check_k_rank),
        Check("classical_extreme_points", "classical states: convex hull of basis states and the null state", DEFAULT.eigenvalue, check_extreme_points),
        Check("ball_geometry", "normalized qubit states fill a ball in the unit cube", DEFAULT.eigenvalue, check_ball),
        Check("composition", "composite systems: N = N_A N_B and K = K_A K_B, separable span K_A K_B", DEFAULT.rank, check_composition),
        Check("distinguishability", "N is the largest single-shot distinguishable set", DEFAULT.eigenvalue, check_distinguishability),
        Check("discreteness_gap", "classical pure states admit no continuous path", 0.0, check_discreteness),
        Check("continuity", "continuous reversible transformation between any two pure states", 0.0, check_continuity),
        Check("power_law", "K(N) completely multiplicative and increasing, so K = N^r", 0.0, check_power_law),
        Check("instrument_validation", "outcome maps Z_l with sum_l Z_l allowed", DEFAULT.dot, check_instruments),
        Check("frequency_convergence", "relative frequencies tend to the probability", 0.002, check_frequencies),
        Check("affinity", "mixing-affine measurement functionals are r.p", 1e-10, check_affinity),
    ]
}


# --- configuration ----------------------------------------------------------

CONFIG_KEYS = {"theories", "checks", "seed", "tolerances", "output", "jobs"}
OUTPUT_KEYS = {"report", "timing"}


@dataclass
class RunConfig:
    theories: list = field(default_factory=lambda: [dict(t) for t in DEFAULT_THEORIES])
    checks: list = field(default_factory=lambda: sorted(REGISTRY))
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)
    jobs: int = 1

    def models(self):
        return [model_from_descriptor(t, f"theories[{i}]") for i, t in enumerate(self.theories)]


def parse_config(obj):
    """Validate a config dict; unknown keys and check names are rejected."""
    if not isinstance(obj, dict):
        raise ConfigError("config must be a JSON object", "$")
    unknown = set(obj) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}", "$")
    cfg = RunConfig()
    if "theories" in obj:
        if not isinstance(obj["theories"], list):
            raise ConfigError("must be a list", "$.theories")
        cfg.theories = obj["theories"]
    if "checks" in obj:
        checks = obj["checks"]
        if not isinstance(checks, list):
            raise ConfigError("must be a list", "$.checks")
        for i, name in enumerate(checks):
            if name not in REGISTRY:
                raise ConfigError(f"unknown check {name!r}", f"$.checks[{i}]")
        cfg.checks = list(checks)
    if "seed" in obj:
        if not isinstance(obj["seed"], int) or isinstance(obj["seed"], bool) or obj["seed"] < 0:
            raise ConfigError("must be a non-negative integer", "$.seed")
        cfg.seed = obj["seed"]
    if "tolerances" in obj:
        tols = obj["tolerances"]
        if not isinstance(tols, dict):
            raise ConfigError("must be an object", "$.tolerances")
        for name, value in tols.items():
            if name not in REGISTRY:
                raise ConfigError(f"unknown check {name!r}", f"$.tolerances.{name}")
            if not isinstance(value, (int, float)) or isinstance(value, bool) or value < 0:
                raise ConfigError("must be a non-negative number", f"$.tolerances.{name}")
        cfg.tolerances = dict(tols)
    if "output" in obj:
        out = obj["output"]
        if not isinstance(out, dict) or set(out) - OUTPUT_KEYS:
            raise ConfigError(f"must be an object with keys from {sorted(OUTPUT_KEYS)}", "$.output")
        cfg.output = dict(out)
    if "jobs" in obj:
        if not isinstance(obj["jobs"], int) or obj["jobs"] < 1:
            raise ConfigError("must be a positive integer", "$.jobs")
        cfg.jobs = obj["jobs"]
    cfg.models()
    return cfg


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})", path) from None
    return parse_config(obj)


def check_seed(seed, name):
    return int(np.random.SeedSequence([seed, zlib.crc32(name.encode())]).generate_state(1)[0])


def _run_one(check, models, seed, tol):
    s = check_seed(seed, check.name)
    rng = np.random.default_rng(s)
    t0 = time.perf_counter()
    try:
        passed, measured, witness = check.run(models, rng, tol)
        error = None
    except Exception as exc:  # a crashing check is a failed check
        passed, measured, witness, error = False, None, None, f"{type(exc).__name__}: {exc}"
    runtime = time.perf_counter() - t0
    if not passed and witness is None:
        witness = measured
    return CheckRecord(check.name, check.anchor, bool(passed), _plain(measured), tol, s, _plain(witness), error, runtime)


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer, int)) and not isinstance(x, bool):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def run_verify(config=None):
    """Run the configured checks; records are ordered by check name."""
    config = config or RunConfig()
    models = config.models()
    checks = [REGISTRY[name] for name in sorted(set(config.checks))]
    tols = {c.name: float(config.tolerances.get(c.name, c.tolerance)) for c in checks}
    if config.jobs > 1:
        with ThreadPoolExecutor(config.jobs) as pool:
            records = list(pool.map(lambda c: _run_one(c, models, config.seed, tols[c.name]), checks))
    else:
        records = [_run_one(c, models, config.seed, tols[c.name]) for c in checks]
    return VerificationReport(
        records=records,
        seed=config.seed,
        tolerances={"central": DEFAULT.as_dict(), "checks": tols},
        theories=[m.descriptor() for m in models],
    )
