import math

import numpy as np
import pytest

from hyplab import arith, registry, specs
from hyplab.asymptotics import zeta_int
from hyplab.errors import PreconditionError


def test_transform_consistency_all_entries():
    N = 1000
    ones = arith.prefix_values(specs.one(), N)
    for e in registry.default_entries():
        fv = arith.prefix_values(e.f_spec, N)
        Fv = arith.prefix_values(e.F_spec, N)
        conv = arith._conv_prefix_values(fv, ones.astype(fv.dtype), N)
        if e.F_spec.integer_valued:
            assert np.array_equal(conv, Fv), e.instance_id
        else:
            assert np.allclose(conv[1:], Fv[1:], rtol=1e-9, atol=1e-9), e.instance_id


def test_main_constants_closed_forms():
    for k in (2, 3, 4, 5):
        e = registry.make_entry("cor2_tau_k", k)
        assert e.main_constant == pytest.approx(1 / math.factorial(k - 1), rel=1e-12)
    assert registry.make_entry("cor3_tau_sq").main_constant == pytest.approx(
        1 / (6 * zeta_int(2)), rel=1e-12
    )
    assert registry.make_entry("cor4_tau_paren_k", 2).main_constant == pytest.approx(
        6 / math.pi**2, rel=1e-9
    )
    for k in (2, 3):
        assert registry.make_entry("cor5_tau_star_mu_k", k).main_constant == (
            pytest.approx(1 / (2 * zeta_int(k)), rel=1e-12)
        )
    assert registry.make_entry("cor7_lambda_g").main_constant == pytest.approx(
        1 / (2 * zeta_int(2)), rel=1e-12
    )
    assert registry.make_entry("cor8_log_k", 1).main_constant == pytest.approx(
        1 / 24, rel=1e-12
    )


def test_main_constant_is_leading_over_s_plus_1():
    for e in registry.default_entries():
        assert e.main_constant == pytest.approx(
            e.hypothesis.leading / (e.hypothesis.s + 1), rel=1e-12
        )


def test_leading_coefficients_match_exact_prefixes():
    # subtracting a_s z (log z)^s from the exact transform prefix must leave
    # a residual bounded on the z (log z)^(s-1) scale; a wrong a_s would make
    # the scaled residual blow up with log z
    cases = [
        registry.make_entry("cor3_tau_sq"),
        registry.make_entry("cor3_tau_cube"),
        registry.make_entry("cor5_tau_star_mu_k", 2),
        registry.make_entry("cor8_log_k", 1),
    ]
    for e in cases:
        s, a_s = e.hypothesis.s, e.hypothesis.leading
        scaled = []
        for z in (10**5, 10**6):
            exact = float(arith.prefix_sums(e.f_spec, z)[z])
            lead = a_s * z * math.log(z) ** s
            scaled.append((exact - lead) / (z * math.log(z) ** (s - 1)))
        assert all(abs(q) < 2.0 for q in scaled), (e.instance_id, scaled)
        assert abs(scaled[1] - scaled[0]) < 0.05, (e.instance_id, scaled)


def test_hypothesis_parameters():
    e = registry.make_entry("cor2_tau_k", 4)
    h = e.hypothesis
    assert (h.s, h.m, h.delta) == (2, 3, 0.0)
    assert h.kappa == pytest.approx(0.5)
    e = registry.make_entry("cor5_tau_star_mu_k", 4)
    assert e.hypothesis.kappa == pytest.approx(131 / 416)
    assert e.kappa_carries_eps
    e = registry.make_entry("cor6_three_omega")
    assert (e.hypothesis.s, e.hypothesis.m, e.hypothesis.beta) == (1, 2, 6.0)
    e = registry.make_entry("cor7_lambda_g")
    assert (e.hypothesis.s, e.hypothesis.m, e.hypothesis.delta) == (1, 1, 1.0)
    e = registry.make_entry("cor8_log_k", 2)
    assert (e.hypothesis.s, e.hypothesis.delta) == (5, 4.0)
    assert e.hypothesis.kappa == pytest.approx(1 / 3)


def test_entry_lookup_errors():
    with pytest.raises(KeyError):
        registry.make_entry("cor9_unknown")
    with pytest.raises(PreconditionError):
        registry.make_entry("cor2_tau_k")  # needs k
    with pytest.raises(PreconditionError):
        registry.make_entry("cor6_three_omega", 3)  # takes none
    with pytest.raises(PreconditionError):
        registry.make_entry("cor2_tau_k", 1)


def test_instance_ids():
    assert registry.make_entry("cor2_tau_k", 4).instance_id == "cor2_tau_k(4)"
    assert registry.make_entry("cor3_tau_sq").instance_id == "cor3_tau_sq"
    ids = registry.entry_ids()
    assert "cor2_tau_k" in ids and "cor7_lambda_g" in ids


def test_attached_entry_builder():
    e = registry.make_attached_entry(specs.one(), 1.0, 0.0, 0.0, 1.0)
    assert e.hypothesis.coefficients == (-1.0, 1.0)
    assert e.hypothesis.beta == 1.0


def test_hyperbola_pairs_cover_registry():
    pairs = registry.hyperbola_pairs()
    keys = {f.key for _, f, g in pairs}
    for e in registry.default_entries():
        assert e.f_spec.key in keys
    assert any(g.kind != "one" for _, f, g in pairs)
    assert any(not f.integer_valued for _, f, g in pairs)
