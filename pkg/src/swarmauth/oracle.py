"""Cross-check the curve against the transparent toy group.

The toy group of the same order as the curve is Z_q itself, so every
contribution computed there is a plain scalar ``c``.  The same computation on
the curve must give ``c * G``.  Nothing here reuses the curve code path being
checked except the final ``c * G`` used to transcribe the toy answer.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .algebra import CurveGroup, ToyGroup, default_curve
from .groupauth import (
    GroupParams,
    Polynomial,
    compute_contribution,
    contribution_from_public,
    issue_credential,
    make_params,
    recover_group_key,
    verify_group,
)

# worked examples over GF(31): (shares, group key)
GF31_EXAMPLES = [
    ([(1, 10), (2, 13)], 7),
    ([(1, 11), (2, 25), (3, 16)], 5),
]


@dataclass
class OracleReport:
    instances: int = 0
    checks: int = 0
    mismatches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def expect(self, cond: bool, what: str) -> None:
        self.checks += 1
        if not cond:
            self.mismatches.append(what)


def toy_contribution(poly: Polynomial, x: int, indices: list[int]) -> int:
    """Lagrange-weighted share as a bare scalar, by direct formula."""
    q = poly.order
    share = sum(c * pow(x, k, q) for k, c in enumerate(poly.coefficients)) % q
    weight = 1
    for xr in indices:
        if xr != x:
            weight = weight * (-xr) * pow(x - xr, -1, q) % q
    return weight * share % q


def check_instance(
    curve: CurveGroup, toy: ToyGroup, rng: random.Random, report: OracleReport, m: int | None = None
) -> None:
    q = curve.order
    m = m if m is not None else rng.randint(1, 8)
    poly = Polynomial(tuple(rng.randrange(q) for _ in range(m)), q)
    indices = rng.sample(range(1, 1 << 16), m)
    curve_params = make_params(poly, curve)
    toy_params = make_params(poly, toy)
    tag = f"m={m} a0={poly.group_key:#x}"

    sum_scalar = 0
    curve_contribs = []
    for x in indices:
        expected = toy_contribution(poly, x, indices)
        sum_scalar = (sum_scalar + expected) % q
        cred = issue_credential(poly, x, curve_params)
        c_priv = compute_contribution(cred, indices, curve_params)
        c_pub = contribution_from_public(cred.public, indices, curve_params)
        toy_c = compute_contribution(issue_credential(poly, x, toy_params), indices, toy_params)
        report.expect(toy_c.value == expected, f"{tag}: toy contribution at x={x}")
        report.expect(c_priv == curve.mul(expected, curve.generator), f"{tag}: curve contribution at x={x}")
        report.expect(c_pub == c_priv, f"{tag}: public-path contribution at x={x}")
        curve_contribs.append(c_priv)

    report.expect(sum_scalar == poly.group_key, f"{tag}: toy contributions do not sum to a0")
    report.expect(verify_group(curve_contribs, curve_params), f"{tag}: curve sum check failed")
    shares = [(x, poly(x)) for x in indices]
    report.expect(recover_group_key(shares, q) == poly.group_key, f"{tag}: recovery")
    report.instances += 1


def run_selftest(trials: int = 1000, seed: int = 0, curve: CurveGroup | None = None) -> OracleReport:
    curve = curve or default_curve()
    toy = ToyGroup(curve.order)
    rng = random.Random(seed)
    report = OracleReport()
    for shares, key in GF31_EXAMPLES:
        report.expect(recover_group_key(shares, 31) == key, f"GF(31) example {shares}")
    for _ in range(trials):
        check_instance(curve, toy, rng, report)
    return report


def params_pair(poly: Polynomial, curve: CurveGroup) -> tuple[GroupParams, GroupParams]:
    return make_params(poly, curve), make_params(poly, ToyGroup(curve.order))
