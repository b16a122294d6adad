"""Seeded random verification of the closed forms and singular-region probes."""

from __future__ import annotations

import json
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .gamma_kit import pole_distance
from .identities import REGISTRY, IdentityId, bc_lattice_distance, eval_a1_limit, zy_terms
from .numerics import DomainViolation, Hyp32Error, Status, Tolerance, rel_err
from .series import MIN_UNIT_DECAY, Params3F2NegDiff, sum_3f2_unit_oracle

__all__ = [
    "SampleConstraints",
    "VerifyReport",
    "Failure",
    "ProbePoint",
    "ORACLE",
    "sample_params",
    "satisfies",
    "check_identity",
    "probe_singular",
]

ORACLE = "oracle"
ORACLE_TOL = Tolerance(rel_tol=1e-12)


@dataclass(frozen=True)
class SampleConstraints:
    """Sampling region.  Boxes are (re_lo, re_hi, im_lo, im_hi); integer
    ranges are inclusive."""

    a_box: tuple[float, float, float, float] = (-2.0, 0.9, -1.0, 1.0)
    b_box: tuple[float, float, float, float] = (0.2, 4.0, -1.0, 1.0)
    c_box: tuple[float, float, float, float] = (0.2, 4.0, -1.0, 1.0)
    m_range: tuple[int, int] = (0, 6)
    n_range: tuple[int, int] = (0, 6)
    min_decay: float = 1.0
    lattice_margin: float = 0.05
    allow_complex: bool = True

    def __post_init__(self):
        for box in (self.a_box, self.b_box, self.c_box):
            if len(box) != 4 or box[0] > box[1] or box[2] > box[3]:
                raise DomainViolation(f"malformed box {box}")
        for lo, hi in (self.m_range, self.n_range):
            if lo < 0 or lo > hi:
                raise DomainViolation(f"malformed integer range {(lo, hi)}")
        if self.min_decay < MIN_UNIT_DECAY:
            raise DomainViolation(f"min_decay must be >= {MIN_UNIT_DECAY} for the oracle")
        if self.lattice_margin < 0:
            raise DomainViolation("lattice_margin must be >= 0")


def satisfies(p: Params3F2NegDiff, c: SampleConstraints) -> bool:
    """Decay and lattice-margin test used by the sampler."""
    if p.s < c.min_decay:
        return False
    if bc_lattice_distance(p) < c.lattice_margin:
        return False
    return all(pole_distance(x) >= c.lattice_margin for x in (1 - p.a, p.b, p.c))


def _draw(rng: np.random.Generator, box, allow_complex: bool) -> complex:
    re = rng.uniform(box[0], box[1])
    im = rng.uniform(box[2], box[3])
    return complex(re, im if allow_complex else 0.0)


def sample_params(c: SampleConstraints, seed: int, count: int) -> list[Params3F2NegDiff]:
    """Rejection-sample ``count`` parameter points; deterministic in ``seed``."""
    if count < 0:
        raise DomainViolation("count must be >= 0")
    rng = np.random.default_rng(seed)
    out: list[Params3F2NegDiff] = []
    attempts = 0
    cap = 1000 * count
    while len(out) < count:
        if attempts >= cap:
            raise DomainViolation(
                f"only {len(out)} of {count} samples after {cap} attempts; constraints infeasible")
        attempts += 1
        a = _draw(rng, c.a_box, c.allow_complex)
        b = _draw(rng, c.b_box, c.allow_complex)
        cc = _draw(rng, c.c_box, c.allow_complex)
        m = int(rng.integers(c.m_range[0], c.m_range[1] + 1))
        n = int(rng.integers(c.n_range[0], c.n_range[1] + 1))
        try:
            p = Params3F2NegDiff(a, b, cc, m, n)
        except DomainViolation:
            continue
        if satisfies(p, c):
            out.append(p)
    return out


@dataclass(frozen=True)
class Failure:
    params: dict
    lhs: complex | None
    rhs: complex
    rel_err: float

    def to_dict(self) -> dict:
        lhs = None if self.lhs is None else {"re": self.lhs.real, "im": self.lhs.imag}
        return {
            "params": self.params,
            "lhs": lhs,
            "rhs": {"re": self.rhs.real, "im": self.rhs.imag},
            "rel_err": self.rel_err,
        }


@dataclass(frozen=True)
class VerifyReport:
    identity: IdentityId
    samples: int
    seed: int
    tol: float
    max_rel_err: float
    median_rel_err: float
    excluded: int
    failures: list[Failure] = field(default_factory=list)
    reference: str = ORACLE

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "identity": self.identity.value,
            "samples": self.samples,
            "seed": self.seed,
            "tol": self.tol,
            "max_rel_err": self.max_rel_err,
            "median_rel_err": self.median_rel_err,
            "excluded": self.excluded,
            "failures": [f.to_dict() for f in self.failures],
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def _reference_value(reference: str | IdentityId, p: Params3F2NegDiff):
    if reference == ORACLE:
        return sum_3f2_unit_oracle(p, ORACLE_TOL)
    return REGISTRY[IdentityId(reference)].evaluate(p)


def _one_sample(job):
    """Returns (lhs or None, rhs or None, rel_err or None); None rhs means excluded."""
    tag, reference, p = job
    info = REGISTRY[tag]
    q = info.project(p)
    try:
        ref = _reference_value(reference, q)
    except Hyp32Error:
        return None, None, None
    if reference == ORACLE and ref.status is not Status.OK:
        return None, None, None
    try:
        lhs = info.evaluate(q).value
    except Hyp32Error:
        return None, ref.value, math.inf
    return lhs, ref.value, rel_err(lhs, ref.value)


def check_identity(tag: IdentityId | str, c: SampleConstraints | None = None, seed: int = 42,
                   count: int = 200, tol: float = 1e-8,
                   reference: IdentityId | str | None = None,
                   workers: int = 1) -> VerifyReport:
    """Compare an identity with the oracle (default) or another closed form.

    Each sample is first projected onto the identity's domain (for example
    m := n for the equal-enhancement forms).  Samples whose reference
    cannot be computed are excluded and counted.
    """
    tag = IdentityId(tag.upper() if isinstance(tag, str) else tag)
    c = c or SampleConstraints()
    ref = ORACLE if reference in (None, ORACLE) else IdentityId(
        reference.upper() if isinstance(reference, str) else reference)
    params = sample_params(c, seed, count)
    jobs = [(tag, ref, p) for p in params]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_one_sample, jobs, chunksize=8))
    else:
        results = [_one_sample(j) for j in jobs]

    errs: list[float] = []
    failures: list[Failure] = []
    excluded = 0
    for p, (lhs, rhs, e) in zip(params, results):
        if rhs is None:
            excluded += 1
            continue
        errs.append(e)
        if e > tol:
            failures.append(Failure(REGISTRY[tag].project(p).as_dict(), lhs, rhs, e))
    errs.sort()
    return VerifyReport(
        identity=tag,
        samples=count,
        seed=seed,
        tol=tol,
        max_rel_err=errs[-1] if errs else 0.0,
        median_rel_err=statistics.median(errs) if errs else 0.0,
        excluded=excluded,
        failures=failures,
        reference=ref if isinstance(ref, str) else ref.value,
    )


@dataclass(frozen=True)
class ProbePoint:
    """One step of an approach path.

    ``value`` is the identity's value (for ``a_to_1`` the mean of the two
    sides a = 1 +- offset); ``terms`` are the two single terms of the
    three-term formula at the same point; ``reference`` is the oracle.
    """

    offset: float
    value: complex
    status: Status
    terms: tuple[complex, complex]
    reference: complex | None = None


def _probe_eval(info, p: Params3F2NegDiff):
    try:
        out = info.evaluate(p)
        return out.value, out.status
    except Hyp32Error as exc:
        return complex(math.nan, math.nan), exc.status


def probe_singular(tag: IdentityId | str, path: str, steps: int = 6,
                   base: Params3F2NegDiff | None = None,
                   offsets: list[float] | None = None,
                   with_reference: bool = False) -> list[ProbePoint]:
    """Walk towards a singular set of the closed forms.

    ``a_to_1`` approaches a = 1 from both sides (default base point
    b=0.6, c=2.3, m=n=1); ``b_to_c_integer`` moves c so that b - c -> 1
    (default base a=0.3, b=1.7, m=n=1).  Offsets default to a geometric
    sequence from 1e-2 to 1e-7.
    """
    tag = IdentityId(tag.upper() if isinstance(tag, str) else tag)
    info = REGISTRY[tag]
    if offsets is None:
        offsets = [float(h) for h in np.geomspace(1e-2, 1e-7, steps)]
    points = []
    if path == "a_to_1":
        base = base or Params3F2NegDiff(1.0, 0.6, 2.3, 1, 1)
        for h in offsets:
            up, down = base.replace(a=1 + h), base.replace(a=1 - h)
            v1, s1 = _probe_eval(info, up)
            v2, s2 = _probe_eval(info, down)
            t = zy_terms(up)
            ref = None
            if with_reference:
                ref = eval_a1_limit(base.replace(a=1.0)).value
            points.append(ProbePoint(h, 0.5 * (v1 + v2), s1.worst(s2),
                                     (t[0].value, t[1].value), ref))
    elif path == "b_to_c_integer":
        base = base or Params3F2NegDiff(0.3, 1.7, 0.7, 1, 1)
        for h in offsets:
            q = base.replace(c=base.b - 1 - h)
            v, s = _probe_eval(info, q)
            t = zy_terms(q)
            ref = sum_3f2_unit_oracle(q, ORACLE_TOL).value if with_reference else None
            points.append(ProbePoint(h, v, s, (t[0].value, t[1].value), ref))
    else:
        raise DomainViolation(f"unknown path {path!r}")
    return points
