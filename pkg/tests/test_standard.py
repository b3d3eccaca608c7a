import math

import pytest

from esc_standard.errors import ConfigError, InsufficientDataError
from esc_standard.series import CapacitySeries
from esc_standard.standard import (
    EnergyMatrix,
    SourceSpec,
    check_snapshot,
    growth_condition,
    money_supply,
    total_abundance,
)

from helpers import YEAR, constant_series, random_linear_matrix, random_matrix


def yearly(sid, values):
    return CapacitySeries(sid, [k * YEAR for k in range(len(values))], [float(v) for v in values])


def matrix(*entries):
    """entries: (sid, c, series[, window])"""
    specs, series = [], {}
    for sid, c, s, *rest in entries:
        specs.append(SourceSpec(sid, c, rest[0] if rest else YEAR))
        series[sid] = s
    return EnergyMatrix(specs, series)


class TestMoneySupply:
    def test_identity_case(self):
        m = matrix(("h", 1.0, constant_series("h", 1.0, span_years=3)))
        snap = money_supply(m, 2 * YEAR)
        assert snap.M == pytest.approx(1.0, rel=1e-15)
        assert snap.A_total == pytest.approx(1.0, rel=1e-15)
        assert snap.money.unit == "a.m.u."

    def test_two_sources(self):
        m = matrix(
            ("a", 2.0, constant_series("a", 3.0, span_years=3)),
            ("b", 0.5, constant_series("b", 4.0, span_years=3)),
        )
        snap = money_supply(m, 2 * YEAR)
        assert snap.M == pytest.approx(8.0, rel=1e-12)
        assert snap.A_total == pytest.approx(7.0, rel=1e-12)
        assert [p.source_id for p in snap.per_source] == ["a", "b"]
        assert snap.per_source[0].contribution == pytest.approx(6.0, rel=1e-12)
        assert total_abundance(m, 2 * YEAR).magnitude == pytest.approx(7.0, rel=1e-12)
        check_snapshot(snap)

    def test_empty_matrix(self):
        snap = money_supply(EnergyMatrix(), 0)
        assert (snap.M, snap.A_total, snap.per_source) == (0.0, 0.0, ())

    def test_no_partial_snapshot(self):
        m = matrix(
            ("old", 1.0, constant_series("old", 3.0, span_years=4)),
            ("new", 1.0, CapacitySeries("new", [3 * YEAR, 4 * YEAR], [1.0, 1.0])),
        )
        with pytest.raises(InsufficientDataError, match="new"):
            money_supply(m, int(3.5 * YEAR))

    def test_abundance_ignores_coefficients(self):
        m = random_matrix(7)
        t = 5 * YEAR
        assert total_abundance(m.scaled(10.0), t) == total_abundance(m, t)

    def test_sinusoid_abundance(self):
        from helpers import sinusoid_series

        s = sinusoid_series("s", 10.0, 3.0, YEAR, span_years=2)
        m = matrix(("s", 1.0, s, 2 * YEAR))
        assert total_abundance(m, 2 * YEAR).magnitude == pytest.approx(10.0, rel=1e-6)


class TestGrowthCondition:
    def test_lone_decline(self):
        m = matrix(("a", 1.0, yearly("a", [20 - k for k in range(8)])))
        g = growth_condition(m, 4 * YEAR)
        assert g.declining == ("a",)
        (comp,) = g.compensation
        assert comp.lhs == 0.0
        assert comp.rhs == pytest.approx(1.0, rel=1e-9)
        assert comp.satisfied is False
        assert g.overall_growth is False
        assert g.violations == ("a",)

    def test_compensated_pair(self):
        m = matrix(
            ("a", 1.0, yearly("a", [20 - k for k in range(8)])),
            ("b", 1.0, yearly("b", [5 + 2 * k for k in range(8)])),
        )
        g = growth_condition(m, 4 * YEAR)
        (comp,) = g.compensation
        assert comp.source_id == "a"
        assert comp.lhs == pytest.approx(2.0, rel=1e-9)
        assert comp.rhs == pytest.approx(1.0, rel=1e-9)
        assert comp.satisfied
        assert g.dM_dt == pytest.approx(1.0, rel=1e-9)
        assert g.overall_growth

    def test_tie_is_not_growth(self):
        # dyadic step keeps every intermediate exact, so the tie is exact
        m = matrix(
            ("a", 1.0, yearly("a", [20 - k for k in range(8)])),
            ("b", 1.0, yearly("b", [5 + k for k in range(8)])),
        )
        g = growth_condition(m, 5 * YEAR, h=YEAR // 2)
        assert dict(g.per_source_rate) == {"a": -1.0, "b": 1.0}
        (comp,) = g.compensation
        assert (comp.lhs, comp.rhs, comp.satisfied) == (1.0, 1.0, False)
        assert g.dM_dt == 0.0
        assert g.overall_growth is False

    def test_every_declining_source_gets_an_entry(self):
        m = matrix(
            ("a", 1.0, yearly("a", [20 - k for k in range(8)])),
            ("b", 2.0, yearly("b", [30 - 3 * k for k in range(8)])),
            ("c", 1.0, yearly("c", [1 + 10 * k for k in range(8)])),
        )
        g = growth_condition(m, 4 * YEAR)
        assert g.declining == ("a", "b")
        assert [c.source_id for c in g.compensation] == ["a", "b"]
        lhs_a = 2.0 * -3 + 10
        assert g.compensation[0].lhs == pytest.approx(lhs_a, rel=1e-9)
        assert g.dM_dt == pytest.approx(-1 - 6 + 10, rel=1e-9)

    def test_insufficient_data_names_source(self):
        m = matrix(("late", 1.0, yearly("late", [1, 2, 3])))
        with pytest.raises(InsufficientDataError, match="late"):
            growth_condition(m, YEAR)


class TestSourceSpec:
    @pytest.mark.parametrize("c", [-1.0, math.nan, math.inf])
    def test_bad_coefficient(self, c):
        with pytest.raises(ConfigError, match="c out of range"):
            SourceSpec("x", c, YEAR)

    @pytest.mark.parametrize("w", [0, -5, 1.5])
    def test_bad_window(self, w):
        with pytest.raises(ConfigError):
            SourceSpec("x", 1.0, w)

    def test_label_defaults_to_id(self):
        assert SourceSpec("x", 1.0, YEAR).label == "x"


class TestEnergyMatrix:
    def test_duplicate_id(self):
        s = constant_series("h", 1.0)
        with pytest.raises(ConfigError, match="duplicate id 'h'"):
            EnergyMatrix([SourceSpec("h", 1, YEAR), SourceSpec("h", 2, YEAR)], {"h": s})

    def test_missing_series(self):
        with pytest.raises(ConfigError, match="no series"):
            EnergyMatrix([SourceSpec("h", 1, YEAR)], {})

    def test_orphan_series(self):
        with pytest.raises(ConfigError, match="without a source spec"):
            EnergyMatrix([], {"h": constant_series("h", 1.0)})

    def test_operations_return_new_matrices(self):
        m = matrix(("a", 1.0, constant_series("a", 1.0)), ("b", 1.0, constant_series("b", 2.0)))
        assert m.without("a").describe() == (("b", 1.0),)
        assert m.with_coefficient("b", 3.0).describe() == (("a", 1.0), ("b", 3.0))
        assert m.describe() == (("a", 1.0), ("b", 1.0))


@pytest.mark.parametrize("seed", range(20))
def test_coefficient_scaling(seed):
    m = random_matrix(seed)
    t = 5 * YEAR
    k = 1.0 + seed / 7
    base, scaled = money_supply(m, t), money_supply(m.scaled(k), t)
    assert scaled.M == pytest.approx(k * base.M, rel=1e-12)
    assert scaled.A_total == base.A_total
    g0, g1 = growth_condition(m, t), growth_condition(m.scaled(k), t)
    assert g1.dM_dt == pytest.approx(k * g0.dM_dt, rel=1e-12, abs=1e-300)
    assert [c.satisfied for c in g1.compensation] == [c.satisfied for c in g0.compensation]


@pytest.mark.parametrize("seed", range(20))
def test_additivity(seed):
    m = random_matrix(seed)
    t = 5 * YEAR
    parts = [money_supply(EnergyMatrix([spec], {spec.source_id: s}), t).M for spec, s in m]
    assert money_supply(m, t).M == pytest.approx(math.fsum(parts), rel=1e-12)


@pytest.mark.parametrize("seed", range(20))
def test_compensation_identity(seed):
    m, _ = random_linear_matrix(seed)
    g = growth_condition(m, 10 * YEAR)
    for comp in g.compensation:
        assert comp.lhs - comp.rhs == pytest.approx(g.dM_dt, rel=1e-12)
    assert g.dM_dt == pytest.approx(
        math.fsum(spec.c * dict(g.per_source_rate)[spec.source_id] for spec in m.sources), rel=1e-12
    )
