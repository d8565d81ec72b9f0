"""Registry of worked short-sum examples with their hypothesis data.

Each entry packages a target function F, its transform f = F * mu, the prefix
hypothesis data, and the leading constant of the predicted window sum.  Entry
id strings (cor2_tau_k, cor3_tau_sq, ...) are the stable tokens the CLI and
the reports use.

F and f are always expressed through the spec algebra, so the registry
consistency test (f convolved with `one` reproduces F) exercises genuine
identities, for example tau(n^2) = sum over d | n of 2^omega(d) behind the
cor3_tau_sq entry, and the attached von Mangoldt construction behind
cor7_lambda_g.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

from .asymptotics import HypothesisData, euler_product, zeta_int
from .errors import PreconditionError
from .specs import (
    FuncSpec,
    convolve,
    identity_at_1,
    lambda_attached,
    lambda_k,
    log_pow,
    mobius,
    mu_k,
    one,
    pointwise,
    tau_kfree,
    tau_m,
    three_pow_omega,
    two_pow_omega,
)

__all__ = [
    "RegistryEntry",
    "make_entry",
    "make_attached_entry",
    "default_entries",
    "entry_ids",
    "base_specs",
    "hyperbola_pairs",
]

#: Prime cutoff used when Euler-product constants are materialized.
_EULER_P = 1_000_000


@dataclass(frozen=True)
class RegistryEntry:
    entry_id: str
    param: int | None
    label: str
    F_spec: FuncSpec
    f_spec: FuncSpec
    hypothesis: HypothesisData
    kappa_carries_eps: bool = False
    emit_both_error_forms: bool = False

    @property
    def instance_id(self) -> str:
        if self.param is None:
            return self.entry_id
        return f"{self.entry_id}({self.param})"

    @property
    def main_constant(self) -> float:
        return self.hypothesis.leading / (self.hypothesis.s + 1)


@functools.lru_cache(maxsize=None)
def _three_omega_A() -> float:
    return euler_product("three_omega_A", _EULER_P)[0]


@functools.lru_cache(maxsize=None)
def _three_omega_B() -> float:
    return euler_product("three_omega_B", _EULER_P)[0]


def _cor2(k: int) -> RegistryEntry:
    if k < 2:
        raise PreconditionError(f"cor2_tau_k requires k >= 2, got {k}")
    s = k - 2
    coeffs = (None,) * s + (1.0 / math.factorial(s),)
    h = HypothesisData(
        s=s,
        m=k - 1,
        kappa=1.0 - 2.0 / k,
        beta=0.0,
        delta=0.0,
        bound_A=1.0,
        coefficients=coeffs,
    )
    return RegistryEntry(
        entry_id="cor2_tau_k",
        param=k,
        label=f"{k}-fold divisor function",
        F_spec=tau_m(k),
        f_spec=tau_m(k - 1),
        hypothesis=h,
        kappa_carries_eps=(k > 2),
        emit_both_error_forms=(k > 2),
    )


def _cor3_tau_sq() -> RegistryEntry:
    a2 = 1.0 / (2.0 * zeta_int(2))
    h = HypothesisData(2, 3, 0.5, 4.0, 0.0, 1.0, (None, None, a2))
    return RegistryEntry(
        "cor3_tau_sq",
        None,
        "square of the divisor count",
        convolve(convolve(two_pow_omega(), one()), one()),
        convolve(two_pow_omega(), one()),
        h,
    )


def _cor3_tau_cube() -> RegistryEntry:
    a2 = 0.5 * _three_omega_A()
    h = HypothesisData(2, 3, 0.5, 4.0, 0.0, 1.0, (None, None, a2))
    return RegistryEntry(
        "cor3_tau_cube",
        None,
        "divisor count of the cube",
        convolve(three_pow_omega(), one()),
        three_pow_omega(),
        h,
    )


def _cor4(k: int) -> RegistryEntry:
    if k < 2:
        raise PreconditionError(f"cor4_tau_paren_k requires k >= 2, got {k}")
    h = HypothesisData(0, 1, 1.0 / k, 0.0, 0.0, 1.0, (1.0 / zeta_int(k),))
    return RegistryEntry(
        "cor4_tau_paren_k",
        k,
        f"number of {k}-free divisors",
        tau_kfree(k),
        mu_k(k),
        h,
    )


def _cor5(k: int) -> RegistryEntry:
    if k < 2:
        raise PreconditionError(f"cor5_tau_star_mu_k requires k >= 2, got {k}")
    kappa = 1.0 / k if k <= 3 else 131.0 / 416.0
    h = HypothesisData(1, 2, kappa, 0.0, 0.0, 1.0, (None, 1.0 / zeta_int(k)))
    return RegistryEntry(
        "cor5_tau_star_mu_k",
        k,
        f"divisor count convolved with the {k}-free indicator",
        convolve(tau_m(2), mu_k(k)),
        tau_kfree(k),
        h,
        kappa_carries_eps=(k >= 4),
    )


def _cor6() -> RegistryEntry:
    h = HypothesisData(
        1, 2, 0.5, 6.0, 0.0, 1.0, (_three_omega_B(), _three_omega_A())
    )
    return RegistryEntry(
        "cor6_three_omega",
        None,
        "3^omega",
        three_pow_omega(),
        pointwise(mu_k(2), two_pow_omega()),
        h,
    )


def make_attached_entry(
    g: FuncSpec, a: float, kappa: float, beta: float, bound_A: float
) -> RegistryEntry:
    """Entry for the attached von Mangoldt sum driven by a bounded g.

    ``a``, ``kappa``, ``beta`` describe the prefix behaviour of g itself:
    sum_{n<=z} g(n) = a z + O(z^kappa (log z)^beta).  The transform is
    f = g x log, whose prefix picks up one extra log power.
    """
    h = HypothesisData(1, 1, kappa, beta + 1.0, 1.0, bound_A, (-a, a))
    return RegistryEntry(
        "cor7_lambda_g",
        None,
        f"attached von Mangoldt sum for g = {g.key}",
        convolve(lambda_attached(g), convolve(g, one())),
        pointwise(g, log_pow(1)),
        h,
    )


def _cor7() -> RegistryEntry:
    return make_attached_entry(mu_k(2), 1.0 / zeta_int(2), 0.5, 0.0, 1.0)


def _cor8(k: int) -> RegistryEntry:
    if k < 1:
        raise PreconditionError(f"cor8_log_k requires k >= 1, got {k}")
    s = 2 * k + 1
    a_s = math.factorial(k) ** 2 / math.factorial(2 * k + 1)
    h = HypothesisData(
        s, 2, 1.0 / 3.0, 0.0, 2.0 * k, 4.0**-k, (None,) * s + (a_s,)
    )
    return RegistryEntry(
        "cor8_log_k",
        k,
        f"log^{k} convolution square pushed through the divisor count",
        convolve(lambda_k(k), convolve(tau_m(2), log_pow(k))),
        convolve(log_pow(k), log_pow(k)),
        h,
        kappa_carries_eps=True,
    )


_PARAMETRIC = {
    "cor2_tau_k": _cor2,
    "cor4_tau_paren_k": _cor4,
    "cor5_tau_star_mu_k": _cor5,
    "cor8_log_k": _cor8,
}
_FIXED = {
    "cor3_tau_sq": _cor3_tau_sq,
    "cor3_tau_cube": _cor3_tau_cube,
    "cor6_three_omega": _cor6,
    "cor7_lambda_g": _cor7,
}


def entry_ids() -> list[str]:
    return sorted(_PARAMETRIC) + sorted(_FIXED)


def make_entry(entry_id: str, k: int | None = None) -> RegistryEntry:
    """Build a registry entry by id; parametric families require k."""
    if entry_id in _PARAMETRIC:
        if k is None:
            raise PreconditionError(f"entry {entry_id} requires a k parameter")
        return _PARAMETRIC[entry_id](k)
    if entry_id in _FIXED:
        if k is not None:
            raise PreconditionError(f"entry {entry_id} takes no k parameter")
        return _FIXED[entry_id]()
    raise KeyError(entry_id)


@functools.lru_cache(maxsize=1)
def default_entries() -> tuple[RegistryEntry, ...]:
    """The standard desk-scale instantiations of every entry family."""
    return (
        _cor2(2),
        _cor2(3),
        _cor2(4),
        _cor2(5),
        _cor3_tau_sq(),
        _cor3_tau_cube(),
        _cor4(2),
        _cor4(3),
        _cor5(2),
        _cor5(3),
        _cor5(4),
        _cor6(),
        _cor7(),
        _cor8(1),
    )


def base_specs() -> dict[str, FuncSpec]:
    """Named base functions for the identity and sieve-vs-point test suites."""
    return {
        "one": one(),
        "identity_at_1": identity_at_1(),
        "mobius": mobius(),
        "mu_2": mu_k(2),
        "mu_3": mu_k(3),
        "tau_2": tau_m(2),
        "tau_3": tau_m(3),
        "tau_kfree_2": tau_kfree(2),
        "tau_kfree_3": tau_kfree(3),
        "two_pow_omega": two_pow_omega(),
        "three_pow_omega": three_pow_omega(),
        "tau_sq_transform": convolve(two_pow_omega(), one()),
        "squarefree_two_omega": pointwise(mu_k(2), two_pow_omega()),
        "log": log_pow(1),
        "lambda_1": lambda_k(1),
        "lambda_2": lambda_k(2),
        "lambda_mu2": lambda_attached(mu_k(2)),
        "squarefree_log": pointwise(mu_k(2), log_pow(1)),
        "log_star_log": convolve(log_pow(1), log_pow(1)),
    }


def hyperbola_pairs() -> list[tuple[str, FuncSpec, FuncSpec]]:
    """The (f, g) pairs the exactness suite drives through the hyperbola split.

    One pair per distinct registry transform against the all-ones function
    (the harness configuration), plus mixed pairs that exercise a nontrivial
    g-leg and the real-valued path.
    """
    seen: dict[str, tuple[str, FuncSpec, FuncSpec]] = {}
    for entry in default_entries():
        f = entry.f_spec
        if f.key not in seen:
            seen[f.key] = (f"{entry.instance_id}:f*1", f, one())
    pairs = list(seen.values())
    pairs.append(("mobius*1", mobius(), one()))
    pairs.append(("mobius*tau", mobius(), tau_m(2)))
    pairs.append(("one*two_pow_omega", one(), two_pow_omega()))
    pairs.append(("log*log", log_pow(1), log_pow(1)))
    return pairs
