"""Monomial-level engine for the height p-1 fixed point spectral sequence.

The reduced part of the starting page is the Laurent monomial algebra on
alpha (bidegree (1, 2p-2), square zero), beta (2, 2p^2-2p) and an
invertible delta (0, 2p), together with opaque permanent transfer markers
in filtration 0 at every even stem.  Two multiplicative differentials run
the show:

    round 1, length 2(p-1)+1:      d(delta) = alpha beta^(p-1) delta^(1-(p-1)^2)
    round 2, length 2(p-1)^2+1:    d(alpha delta^((p-1)^3)) = beta^((p-1)^2+1)

extended by Leibniz over the surviving subalgebra; scalars are tracked in
F_p up to one global unit, so only the integer Leibniz factors (the delta
exponent mod p in round 1) decide vanishing.  Windows are stem x
filtration rectangles, auto-expanded by the longest differential so the
user's rectangle is boundary-safe.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import plocal
from .errors import (DimensionMismatch, EvennessViolation, NotStabilized,
                     WindowTooSmall)
from .symdecomp import _sym_gamma_int, sym_basis


@dataclass(frozen=True)
class SSClass:
    """Reduced monomial alpha^eps beta^b delta^d at prime p."""

    p: int
    eps: int
    b: int
    d: int

    @property
    def s(self) -> int:
        return self.eps + 2 * self.b

    @property
    def t(self) -> int:
        p = self.p
        return (2 * p - 2) * self.eps + (2 * p * p - 2 * p) * self.b + 2 * p * self.d

    @property
    def stem(self) -> int:
        return self.t - self.s

    def label(self) -> str:
        parts = []
        if self.eps:
            parts.append("a")
        if self.b:
            parts.append(f"b^{self.b}" if self.b != 1 else "b")
        if self.d:
            parts.append(f"d^{self.d}" if self.d != 1 else "d")
        return "*".join(parts) if parts else "1"


@dataclass
class ClassRecord:
    cls: SSClass
    scalar: int
    status: str = "alive"       # alive | source | target
    killed_round: int | None = None
    partner: tuple | None = None


@dataclass(frozen=True)
class Window:
    stem_lo: int
    stem_hi: int
    filt_lo: int = 0
    filt_hi: int = 40

    def contains(self, stem: int, filt: int) -> bool:
        return (self.stem_lo <= stem <= self.stem_hi
                and self.filt_lo <= filt <= self.filt_hi)


class SSPage:
    """One page of the spectral sequence restricted to a safe window."""

    def __init__(self, p: int, window: Window, round_label: str,
                 records: dict, transfer_stems: tuple, margin: int,
                 arrows: tuple = ()):
        self.p = p
        self.window = window
        self.round_label = round_label
        self.records = records
        self.transfer_stems = transfer_stems
        self.margin = margin
        self.arrows = arrows

    def record(self, key) -> ClassRecord:
        return self.records[key]

    def alive(self, in_window_only: bool = True):
        for rec in self.records.values():
            if rec.status != "alive":
                continue
            if in_window_only and not self.window.contains(rec.cls.stem, rec.cls.s):
                continue
            yield rec

    def classes_at(self, stem: int, filt: int | None = None,
                   in_window_only: bool = False):
        out = []
        for rec in self.records.values():
            if rec.status != "alive":
                continue
            if rec.cls.stem != stem:
                continue
            if filt is not None and rec.cls.s != filt:
                continue
            if in_window_only and not self.window.contains(rec.cls.stem, rec.cls.s):
                continue
            out.append(rec)
        return out

    def copy(self, round_label: str) -> "SSPage":
        recs = {k: ClassRecord(r.cls, r.scalar, r.status, r.killed_round, r.partner)
                for k, r in self.records.items()}
        return SSPage(self.p, self.window, round_label, recs,
                      self.transfer_stems, self.margin, self.arrows)

    def to_json(self) -> dict:
        classes = []
        for rec in sorted(self.records.values(),
                          key=lambda r: (r.cls.stem, r.cls.s, r.cls.eps, r.cls.b, r.cls.d)):
            if not self.window.contains(rec.cls.stem, rec.cls.s):
                continue
            classes.append({
                "label": rec.cls.label(),
                "eps": rec.cls.eps, "b": rec.cls.b, "d": rec.cls.d,
                "s": rec.cls.s, "t": rec.cls.t, "stem": rec.cls.stem,
                "status": rec.status,
                "killed_round": rec.killed_round,
            })
        return {
            "p": self.p,
            "round": self.round_label,
            "window": {"stem_lo": self.window.stem_lo, "stem_hi": self.window.stem_hi,
                       "filt_lo": self.window.filt_lo, "filt_hi": self.window.filt_hi},
            "classes": classes,
            "transfer_stems": [s for s in self.transfer_stems
                               if self.window.stem_lo <= s <= self.window.stem_hi],
        }

    def chart(self) -> str:
        """Plain-text grid: stems across, filtration up; 'o' one class,
        digits for multiplicity, 't'/'T' mark transfer stems."""
        w = self.window
        grid = {}
        for rec in self.alive():
            key = (rec.cls.stem, rec.cls.s)
            grid[key] = grid.get(key, 0) + 1
        lines = []
        for filt in range(w.filt_hi, w.filt_lo - 1, -1):
            row = [f"{filt:3d} "]
            for stem in range(w.stem_lo, w.stem_hi + 1):
                n = grid.get((stem, filt), 0)
                ch = "·"
                if filt == 0 and stem % 2 == 0 and stem in self.transfer_stems:
                    ch = "T" if n else "t"
                elif n == 1:
                    ch = "o"
                elif 1 < n <= 9:
                    ch = str(n)
                elif n > 9:
                    ch = "*"
                row.append(ch)
            lines.append("".join(row))
        width = w.stem_hi - w.stem_lo + 1
        axis = "    " + "".join("|" if s % 10 == 0 else " "
                                for s in range(w.stem_lo, w.stem_hi + 1))
        labels = [" "] * (4 + width)
        for stem in range(w.stem_lo, w.stem_hi + 1):
            if stem % 10 == 0:
                tag = str(stem)
                pos = 4 + stem - w.stem_lo
                for i, ch in enumerate(tag):
                    if pos + i < len(labels):
                        labels[pos + i] = ch
        lines.append(axis)
        lines.append("".join(labels).rstrip())
        return "\n".join(lines)


def round_lengths(p: int) -> tuple[int, int]:
    return 2 * (p - 1) + 1, 2 * (p - 1) ** 2 + 1


def e2_page(p: int, window: Window) -> SSPage:
    """All reduced monomials with bidegree in the margin-expanded window,
    plus permanent transfer markers at every even stem."""
    r1, r2 = round_lengths(p)
    margin = max(r1, r2)
    stem_lo = window.stem_lo - margin
    stem_hi = window.stem_hi + margin
    filt_lo = max(0, window.filt_lo - margin)
    filt_hi = window.filt_hi + margin
    records = {}
    for eps in (0, 1):
        b = 0
        while eps + 2 * b <= filt_hi:
            base = (2 * p - 3) * eps + (2 * p * p - 2 * p - 2) * b
            d_lo = -((base - stem_lo) // (2 * p))  # ceil((stem_lo - base)/2p)
            d_hi = (stem_hi - base) // (2 * p)
            for d in range(d_lo, d_hi + 1):
                cls = SSClass(p, eps, b, d)
                if stem_lo <= cls.stem <= stem_hi and filt_lo <= cls.s <= filt_hi:
                    records[(eps, b, d)] = ClassRecord(cls, 1)
            b += 1
    transfer = tuple(s for s in range(stem_lo, stem_hi + 1) if s % 2 == 0)
    return SSPage(p, window, "E2", records, transfer, margin)


def _round_one_arrows(page: SSPage):
    """d(alpha^eps beta^b delta^d) = d * alpha^(eps+1) beta^(b+p-1)
    delta^(d-(p-1)^2); zero when eps = 1 or p | d."""
    p = page.p
    arrows = []
    for key, rec in page.records.items():
        if rec.status != "alive":
            continue
        eps, b, d = key
        if eps == 1:
            continue
        scalar = (rec.scalar * d) % p
        if scalar == 0:
            continue
        target = (1, b + p - 1, d - (p - 1) ** 2)
        arrows.append((key, target, scalar))
    return arrows


def _round_two_arrows(page: SSPage):
    """Leibniz extension of d(alpha delta^((p-1)^3)) = beta^((p-1)^2+1)
    over the round-one survivors: sources are the surviving alpha-classes
    with delta exponent congruent to (p-1)^3 mod p."""
    p = page.p
    gen_d = (p - 1) ** 3
    arrows = []
    for key, rec in page.records.items():
        if rec.status != "alive":
            continue
        eps, b, d = key
        if eps != 1 or (d - gen_d) % p != 0:
            continue
        target = (0, b + (p - 1) ** 2 + 1, d - gen_d)
        arrows.append((key, target, rec.scalar % p))
    return arrows


def run_differentials(page: SSPage) -> SSPage:
    """Execute both rounds; returns the final page (value semantics)."""
    p = page.p
    r1, r2 = round_lengths(p)
    cur = page
    all_arrows = list(page.arrows)
    for r, producer in ((r1, _round_one_arrows), (r2, _round_two_arrows)):
        nxt = cur.copy(f"E{r + 1}")
        arrows = producer(nxt)
        for source, target, scalar in arrows:
            src = nxt.records[source]
            if target not in nxt.records:
                # sources with untracked targets must lie in the margin
                if nxt.window.contains(src.cls.stem, src.cls.s):
                    raise WindowTooSmall(
                        f"differential from {source} leaves the tracked region")
                src.status = "source"
                src.killed_round = r
                all_arrows.append((source, None, r, scalar))
                continue
            tgt = nxt.records[target]
            if tgt.status != "alive":
                raise WindowTooSmall(f"target {target} already dead in round {r}")
            src.status, tgt.status = "source", "target"
            src.killed_round = tgt.killed_round = r
            src.partner, tgt.partner = target, source
            all_arrows.append((source, target, r, scalar))
        nxt.arrows = tuple(all_arrows)
        cur = nxt
    cur.round_label = "Einf"
    return cur


@dataclass
class EvennessReport:
    p: int
    window: Window
    einf_odd_negative_stem_empty: bool     # stems = -1 mod 2p at E_inf
    einf_zero_stem_positive_filtration_empty: bool
    einf_minus_two_stem_positive_filtration_empty: bool
    e2_low_filtration_minus_one_empty: bool
    e2_stem_minus_one_classes: list = field(default_factory=list)
    surviving_chart: dict | None = None

    def passed(self) -> bool:
        return (self.einf_odd_negative_stem_empty
                and self.einf_zero_stem_positive_filtration_empty
                and self.einf_minus_two_stem_positive_filtration_empty
                and self.e2_low_filtration_minus_one_empty)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "window": {"stem_lo": self.window.stem_lo, "stem_hi": self.window.stem_hi,
                       "filt_lo": self.window.filt_lo, "filt_hi": self.window.filt_hi},
            "einf_odd_negative_stem_empty": self.einf_odd_negative_stem_empty,
            "einf_zero_stem_positive_filtration_empty":
                self.einf_zero_stem_positive_filtration_empty,
            "einf_minus_two_stem_positive_filtration_empty":
                self.einf_minus_two_stem_positive_filtration_empty,
            "e2_low_filtration_minus_one_empty": self.e2_low_filtration_minus_one_empty,
            "e2_stem_minus_one_classes": self.e2_stem_minus_one_classes,
        }


def evenness_report(p: int, window: Window, include_chart: bool = False) -> EvennessReport:
    """Certify the evenness consequences on the final page.

    (a) stems congruent to -1 mod 2p carry no surviving classes at all
        (and no transfer markers, which sit in even stems);
    (b) stems congruent to 0 mod 2p^2 have no positive-filtration
        survivors;
    (c) likewise stems congruent to -2 mod 2p^2.

    The starting page itself is also checked to be empty in stems
    congruent to -1 mod 2p below filtration 2p-1 (the first differential
    length); in higher filtrations such classes exist on the starting
    page and must die, which is re-derived rather than assumed.
    """
    for stem in (-2, -1, 0):
        if not (window.stem_lo <= stem <= window.stem_hi):
            raise WindowTooSmall(f"window must contain stem {stem}")
    start = e2_page(p, window)
    r1, _ = round_lengths(p)
    minus_one_e2 = []
    low_filtration_ok = True
    for rec in start.records.values():
        cls = rec.cls
        if (cls.stem + 1) % (2 * p) == 0 and window.contains(cls.stem, cls.s):
            minus_one_e2.append({"label": cls.label(), "stem": cls.stem, "s": cls.s})
            if cls.s < r1:
                low_filtration_ok = False
    final = run_differentials(start)

    odd_ok = True
    zero_ok = True
    minus2_ok = True
    offender = None
    for rec in final.alive():
        cls = rec.cls
        if (cls.stem + 1) % (2 * p) == 0:
            odd_ok = False
            offender = offender or cls
        if cls.s > 0 and cls.stem % (2 * p * p) == 0:
            zero_ok = False
            offender = offender or cls
        if cls.s > 0 and (cls.stem + 2) % (2 * p * p) == 0:
            minus2_ok = False
            offender = offender or cls
    for s in final.transfer_stems:
        if window.stem_lo <= s <= window.stem_hi and (s + 1) % (2 * p) == 0:
            odd_ok = False
    report = EvennessReport(
        p=p, window=window,
        einf_odd_negative_stem_empty=odd_ok,
        einf_zero_stem_positive_filtration_empty=zero_ok,
        einf_minus_two_stem_positive_filtration_empty=minus2_ok,
        e2_low_filtration_minus_one_empty=low_filtration_ok,
        e2_stem_minus_one_classes=minus_one_e2,
        surviving_chart=final.to_json() if include_chart else None,
    )
    if not report.passed():
        raise EvennessViolation(
            f"evenness fails at p={p}: offending class "
            f"{offender.label() if offender else '<transfer marker>'} "
            f"stem={offender.stem if offender else '?'} s={offender.s if offender else '?'}")
    return report


# ------------------------------------------------------- Tate cross-check

@dataclass
class TateCrossReport:
    p: int
    t: int
    exponent: int
    cutoff: int
    stages: tuple
    lattice_even: int
    lattice_odd: int
    expected_even: int
    expected_odd: int
    galois_multiplicity: int
    mod_pn_even: int
    mod_pn_odd: int
    mod_pn_consistent: bool
    stabilized: bool

    def passed(self) -> bool:
        return (self.stabilized
                and self.lattice_even == self.expected_even
                and self.lattice_odd == self.expected_odd
                and self.mod_pn_consistent)

    def to_json(self) -> dict:
        return {
            "p": self.p, "t": self.t, "exponent": self.exponent,
            "cutoff": self.cutoff, "stages": list(self.stages),
            "lattice_even": self.lattice_even, "lattice_odd": self.lattice_odd,
            "expected_even": self.expected_even, "expected_odd": self.expected_odd,
            "true_even_dim_over_w": self.expected_even * self.galois_multiplicity,
            "true_odd_dim_over_w": self.expected_odd * self.galois_multiplicity,
            "galois_multiplicity": self.galois_multiplicity,
            "mod_pn_even": self.mod_pn_even, "mod_pn_odd": self.mod_pn_odd,
            "mod_pn_consistent": self.mod_pn_consistent,
            "stabilized": self.stabilized,
        }


def reduced_monomial_counts(p: int, t: int) -> tuple[int, int]:
    """Number of reduced monomials of internal degree t in each parity,
    constant across the periodic rows (checked on rows s = 0..5)."""
    per_row = {}
    for s in range(0, 6):
        eps = s % 2
        b = (s - eps) // 2
        base = (2 * p - 2) * eps + (2 * p * p - 2 * p) * b
        per_row[s] = 1 if (t - base) % (2 * p) == 0 else 0
    even_rows = {per_row[s] for s in (0, 2, 4)}
    odd_rows = {per_row[s] for s in (1, 3, 5)}
    if len(even_rows) != 1 or len(odd_rows) != 1:
        raise DimensionMismatch("row counts are not 2-periodic")
    return even_rows.pop(), odd_rows.pop()


def tate_cross_check(p: int, t: int, exponent: int = 2, cutoff: int = 12) -> TateCrossReport:
    """Compare Tate cohomology of the symmetric-algebra model of the
    degree-t homotopy against the reduced monomial counts.

    The degree-t component of Sym^*(rhobar)[Nm^-1] (rhobar in degree -2,
    Nm invertible of degree -2p) is the union of the stages
    Sym^(pm - t/2) * Nm^(-m); Tate cohomology is computed exactly on the
    integer lattice of the two largest stages with symmetric degree <=
    cutoff, which must agree (NotStabilized otherwise).  The same stages
    over Z/p^exponent are reported too: finite coefficients symmetrise
    the parities (each parity sees even+odd of the lattice), which is
    recorded as a consistency condition rather than the comparison.
    """
    if t % 2 != 0:
        raise ValueError("internal degree must be even")
    k0 = (-(t // 2)) % p
    stages = [k for k in range(k0, cutoff + 1, p)]
    if len(stages) < 2:
        raise NotStabilized(f"cutoff {cutoff} allows fewer than two stages")
    k_lo, k_hi = stages[-2], stages[-1]
    dims = []
    moddims = []
    for k in (k_lo, k_hi):
        gamma = [[int(x) for x in row] for row in _sym_gamma_int(p, k)]
        dims.append(plocal.tate_lattice(gamma, p))
        moddims.append(plocal.tate_mod_pn(gamma, p, exponent))
    stable = (dims[0].even_dim == dims[1].even_dim
              and dims[0].odd_dim == dims[1].odd_dim
              and moddims[0].even_dim == moddims[1].even_dim
              and moddims[0].odd_dim == moddims[1].odd_dim)
    if not stable:
        raise NotStabilized(
            f"stages {k_lo} and {k_hi} disagree; increase the cutoff")
    even_count, odd_count = reduced_monomial_counts(p, t)
    lat = dims[1]
    mod = moddims[1]
    consistent = (mod.even_dim == lat.even_dim + lat.odd_dim
                  and mod.odd_dim == lat.even_dim + lat.odd_dim)
    report = TateCrossReport(
        p=p, t=t, exponent=exponent, cutoff=cutoff, stages=(k_lo, k_hi),
        lattice_even=lat.even_dim, lattice_odd=lat.odd_dim,
        expected_even=even_count, expected_odd=odd_count,
        galois_multiplicity=p - 1,
        mod_pn_even=mod.even_dim, mod_pn_odd=mod.odd_dim,
        mod_pn_consistent=consistent,
        stabilized=stable,
    )
    if lat.even_dim != even_count or lat.odd_dim != odd_count:
        raise DimensionMismatch(
            f"Tate dims ({lat.even_dim}, {lat.odd_dim}) != expected "
            f"({even_count}, {odd_count}) at t={t}")
    return report
