"""Spectral sequence engine: pages, differentials, evenness, Tate check."""

import pytest

from mu_orient.cpmod import standard_module, tate_cohomology
from mu_orient.errors import EvennessViolation, WindowTooSmall
from mu_orient.hfpss import (SSClass, Window, e2_page, evenness_report,
                             reduced_monomial_counts, round_lengths,
                             run_differentials, tate_cross_check)


def test_round_lengths():
    assert round_lengths(3) == (5, 9)
    assert round_lengths(5) == (9, 33)


def test_bidegrees_p3():
    alpha = SSClass(3, 1, 0, 0)
    beta = SSClass(3, 0, 1, 0)
    delta = SSClass(3, 0, 0, 1)
    assert (alpha.s, alpha.t, alpha.stem) == (1, 4, 3)
    assert (beta.s, beta.t, beta.stem) == (2, 12, 10)
    assert (delta.s, delta.t, delta.stem) == (0, 6, 6)


def test_e2_window_contents():
    page = e2_page(3, Window(0, 12, 0, 4))
    found = {(r.cls.label(), r.cls.stem, r.cls.s) for r in page.alive()}
    assert ("d", 6, 0) in found
    assert ("a", 3, 1) in found
    assert ("b", 10, 2) in found
    assert ("1", 0, 0) in found


def test_transfer_markers_even_stems():
    page = e2_page(3, Window(-6, 6, 0, 4))
    marked = [s for s in page.transfer_stems if -6 <= s <= 6]
    assert marked == [-6, -4, -2, 0, 2, 4, 6]


def test_d5_on_delta():
    final = run_differentials(e2_page(3, Window(-20, 20, 0, 12)))
    hits = [a for a in final.arrows if a[0] == (0, 0, 1)]
    assert hits == [((0, 0, 1), (1, 2, -3), 5, 1)]
    assert final.record((0, 0, 1)).status == "source"
    assert final.record((1, 2, -3)).status == "target"


def test_delta_cubed_survives_round_one():
    # Leibniz scalar 3 = 0 mod 3, so delta^3 supports no differential
    final = run_differentials(e2_page(3, Window(0, 40, 0, 12)))
    assert final.record((0, 0, 3)).status == "alive"


def test_unit_is_permanent():
    final = run_differentials(e2_page(3, Window(-10, 10, 0, 10)))
    assert final.record((0, 0, 0)).status == "alive"


def test_d9_generator_relation():
    # alpha * delta^8 kills beta^5 in round two
    final = run_differentials(e2_page(3, Window(30, 60, 0, 14)))
    hits = [a for a in final.arrows if a[0] == (1, 0, 8)]
    assert hits == [((1, 0, 8), (0, 5, 0), 9, 1)]
    assert final.record((0, 5, 0)).status == "target"


def test_einf_survivor_shape_p3():
    # epsilon=0 survivors: beta^B delta^(3k) with B <= 4;
    # epsilon=1 survivors: alpha beta^b delta^d with b <= 1 and d != 2 mod 3
    final = run_differentials(e2_page(3, Window(-40, 40, 0, 16)))
    for rec in final.alive():
        eps, b, d = rec.cls.eps, rec.cls.b, rec.cls.d
        if eps == 0:
            assert d % 3 == 0 and b <= 4, rec.cls
        else:
            assert b <= 1 and d % 3 != 2, rec.cls


def test_bidegree_bookkeeping_of_arrows():
    final = run_differentials(e2_page(3, Window(-30, 30, 0, 14)))
    assert final.arrows, "expected differentials in this window"
    for source, target, r, scalar in final.arrows:
        assert scalar % 3 != 0
        if target is None:
            continue
        src = final.record(source).cls
        tgt = final.record(target).cls
        assert tgt.stem == src.stem - 1
        assert tgt.s == src.s + r


def test_sources_never_targets_same_round():
    final = run_differentials(e2_page(3, Window(-30, 30, 0, 14)))
    for r in (5, 9):
        sources = {a[0] for a in final.arrows if a[2] == r}
        targets = {a[1] for a in final.arrows if a[2] == r and a[1] is not None}
        assert not (sources & targets)


def test_euler_conservation_per_round():
    # inside the user window every kill pairs one source with one target
    final = run_differentials(e2_page(3, Window(-20, 20, 0, 10)))
    for r in (5, 9):
        killed_src = [k for k, rec in final.records.items()
                      if rec.status == "source" and rec.killed_round == r
                      and rec.partner is not None]
        killed_tgt = [k for k, rec in final.records.items()
                      if rec.status == "target" and rec.killed_round == r]
        assert len(killed_src) == len(killed_tgt)
        for k in killed_src:
            partner = final.record(k).partner
            assert final.record(partner).partner == k


def test_transfer_markers_unchanged_by_differentials():
    start = e2_page(3, Window(-10, 10, 0, 8))
    final = run_differentials(start)
    assert final.transfer_stems == start.transfer_stems


@pytest.mark.parametrize("p,window", [
    (3, Window(-80, 80, 0, 12)),
    (5, Window(-60, 60, 0, 36)),
])
def test_evenness(p, window):
    rep = evenness_report(p, window)
    assert rep.passed()
    assert rep.einf_odd_negative_stem_empty
    assert rep.einf_zero_stem_positive_filtration_empty
    assert rep.einf_minus_two_stem_positive_filtration_empty


def test_evenness_records_high_filtration_e2_classes():
    # the starting page does contain stem -1 classes, all in filtration
    # >= 2p-1; they must all die, and the report keeps the honest list
    rep = evenness_report(3, Window(-80, 80, 0, 12))
    assert rep.e2_stem_minus_one_classes
    assert all(c["s"] >= 5 for c in rep.e2_stem_minus_one_classes)
    assert rep.e2_low_filtration_minus_one_empty


def test_evenness_window_too_small():
    with pytest.raises(WindowTooSmall):
        evenness_report(3, Window(3, 12, 0, 8))


def test_einf_chart_72_periodicity_p3():
    final = run_differentials(e2_page(3, Window(0, 146, 0, 12)))
    def chart(lo, hi):
        cells = set()
        for rec in final.alive(in_window_only=False):
            cls = rec.cls
            if lo <= cls.stem < hi and cls.s > 0 and cls.s <= 12:
                cells.add((cls.stem - lo, cls.s, cls.eps, cls.b))
        return cells
    assert chart(0, 72) == chart(72, 144)


def test_chart_rendering():
    final = run_differentials(e2_page(3, Window(0, 12, 0, 4)))
    text = final.chart()
    lines = text.splitlines()
    assert len(lines) == 5 + 2  # filtrations 4..0 plus axis rows
    assert "t" in lines[4] or "T" in lines[4]  # transfer markers at filt 0


def test_page_json_shape():
    final = run_differentials(e2_page(3, Window(0, 12, 0, 4)))
    data = final.to_json()
    assert data["p"] == 3 and data["round"] == "Einf"
    assert all(c["stem"] <= 12 for c in data["classes"])


# --------------------------------------------------------- Tate comparison

def test_reduced_monomial_counts():
    assert reduced_monomial_counts(3, 0) == (1, 0)
    assert reduced_monomial_counts(3, 6) == (1, 0)
    assert reduced_monomial_counts(3, 4) == (0, 1)   # t = -2 mod 6
    assert reduced_monomial_counts(3, 2) == (0, 0)


@pytest.mark.parametrize("t,even,odd", [(0, 1, 0), (6, 1, 0), (4, 0, 1), (2, 0, 0), (-2, 0, 1), (-6, 1, 0)])
def test_tate_cross_check_p3(t, even, odd):
    rep = tate_cross_check(3, t, exponent=2, cutoff=12)
    assert rep.passed()
    assert (rep.lattice_even, rep.lattice_odd) == (even, odd)
    assert rep.mod_pn_consistent


def test_tate_cross_check_galois_scaling():
    rep = tate_cross_check(3, 0)
    data = rep.to_json()
    assert data["true_even_dim_over_w"] == 2 * rep.lattice_even


def test_tate_free_module_sanity():
    # a free module has vanishing Tate cohomology in both parities
    m = standard_module(3, "regular")
    assert tate_cohomology(m, "even").dimension == 0
    assert tate_cohomology(m, "odd").dimension == 0
