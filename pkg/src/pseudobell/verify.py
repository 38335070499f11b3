"""One-shot verification suite behind ``pseudobell verify``.

Each check prints a single line with its worst residual; degenerate grid
points are skipped with a printed reason.  Returns a process exit code
(0 all green, 1 otherwise).
"""

from __future__ import annotations

import itertools
import math
import random

import numpy as np

from .biortho import (
    SystemParams,
    basis_from_alpha,
    check_pseudo_hermiticity,
    eigenbasis,
    ladder_ops,
)
from .constructor import (
    CatalogEntry,
    all_biseparable,
    build_state,
    catalog,
    catalog_entries,
    solve_weight,
)
from .entanglement import (
    average_entropy,
    average_entropy_closed_form,
    average_entropy_equal_alpha,
    case_b_alpha,
    case_b_concurrence,
    concurrence,
    concurrence_closed_form,
    dominant_pair_state,
    embed,
    normalize,
    schmidt_ratio,
)
from .graded_states import bi_overcompleteness, coherent_state, same_family_resolution_residual
from .grassmann import GrassmannElement, theta, theta_bar


class _Report:
    def __init__(self):
        self.failures = 0

    def check(self, name: str, ok: bool, detail: str) -> None:
        status = " ok " if ok else "FAIL"
        if not ok:
            self.failures += 1
        print(f"[{status}] {name:<28} {detail}")

    def skip(self, name: str, reason: str) -> None:
        print(f"[skip] {name:<28} {reason}")


def _table_fidelity(report: _Report, entries: list[CatalogEntry]) -> None:
    bad = [e.name for e in entries if build_state(e.weight, e.spec) != e.expected]
    report.check("table-fidelity", not bad,
                 f"{len(entries)} entries exact" if not bad else f"mismatch: {bad}")


def _round_trip(report: _Report, entries: list[CatalogEntry]) -> None:
    bad = [e.name for e in entries if solve_weight(e.expected, e.spec) != e.weight]
    report.check("round-trip", not bad,
                 f"{len(entries)} weights recovered" if not bad else f"mismatch: {bad}")


def _biorthonormality(report: _Report) -> None:
    worst = 0.0
    count = 0
    for r in (0.5, 1.0, 2.0):
        for s in (0.5, 1.0, 2.0):
            for t in (0.5, 1.0, 2.0):
                for beta in (0.0, 0.3, -0.3, 1.0, -1.0):
                    if abs(r * math.sin(beta)) >= math.sqrt(s * t) - 1e-9:
                        report.skip("biorthonormality",
                                    f"r={r} s={s} t={t} beta={beta}: at/beyond degeneracy")
                        continue
                    b = eigenbasis(SystemParams(r, s, t, beta))
                    psis, phis = (b.psi0, b.psi1), (b.phi0, b.phi1)
                    for i in range(2):
                        for j in range(2):
                            worst = max(worst, abs(np.vdot(phis[i], psis[j]) - (i == j)))
                    eye = sum(np.outer(psis[i], phis[i].conj()) for i in range(2))
                    worst = max(worst, float(np.max(np.abs(eye - np.eye(2)))))
                    worst = max(worst, float(np.max(np.abs(b.eta @ b.eta_inv - np.eye(2)))))
                    worst = max(worst, float(np.max(np.abs(b.eta @ psis[0] - phis[0]))))
                    worst = max(worst, check_pseudo_hermiticity(SystemParams(r, s, t, beta)))
                    count += 1
    report.check("biorthonormality", worst <= 1e-10,
                 f"max residual {worst:.2e} over {count} parameter points")


def _overcompleteness(report: _Report) -> None:
    worst = 0.0
    for alpha in (0.0, 0.5, -0.8, 1.2):
        _, residual = bi_overcompleteness(basis_from_alpha(alpha))
        worst = max(worst, residual)
    report.check("bi-overcompleteness", worst <= 1e-12, f"max residual {worst:.2e}")
    gap = same_family_resolution_residual(basis_from_alpha(0.5), "psi")
    report.check("same-family-non-identity", gap >= 0.01,
                 f"|theta><theta| integral deviates from I by {gap:.3f} at alpha=0.5")


def _coherent_identity(report: _Report) -> None:
    ok = True
    for family in ("psi", "phi"):
        st = coherent_state(1, theta(1), family)
        lhs = st.apply_lowering(1, family)
        rhs = st.premultiply(GrassmannElement.word(theta(1)))
        ok = ok and lhs == rhs and not lhs.is_zero()
    worst = 0.0
    for alpha in (0.0, 0.5, -0.8, 1.2):
        b = basis_from_alpha(alpha)
        ops = ladder_ops(b)
        worst = max(worst, float(np.max(np.abs(ops.b @ b.psi1 - b.psi0))))
        worst = max(worst, float(np.max(np.abs(ops.b @ b.psi0))))
        worst = max(worst, float(np.max(np.abs(ops.b_tilde @ b.phi1 - b.phi0))))
        worst = max(worst, float(np.max(np.abs(ops.b_tilde @ b.phi0))))
    report.check("coherent-eigenvalue", ok and worst <= 1e-12,
                 f"exact identity both families; matrix residual {worst:.2e}")


def _concurrence_forms(report: _Report, entries: list[CatalogEntry]) -> None:
    names = [e.name for e in entries if e.group in ("bell", "bell-prime")]
    grid = np.linspace(0, 2 * math.pi, 11, endpoint=False)
    worst = 0.0
    skipped = 0
    for name in names:
        entry = next(e for e in entries if e.name == name)
        state = build_state(entry.weight, entry.spec)
        for a1 in grid:
            for a2 in grid:
                if abs(math.cos(a1)) < 1e-8 or abs(math.cos(a2)) < 1e-8:
                    skipped += 1
                    continue
                s1s2 = math.sin(a1) * math.sin(a2)
                if min(abs(1 - s1s2), abs(1 + s1s2)) < 1e-8:
                    skipped += 1
                    continue
                vec = normalize(embed(state, [basis_from_alpha(a1), basis_from_alpha(a2)]))
                worst = max(worst, abs(concurrence(vec)
                                       - concurrence_closed_form(name, a1, a2)))
    report.check("concurrence-closed-forms", worst <= 1e-10,
                 f"max |pipeline - formula| {worst:.2e} over 16 members "
                 f"({skipped} singular points skipped)")


def _case_b(report: _Report, entries: list[CatalogEntry]) -> None:
    entry = next(e for e in entries if e.name == "B2-")
    state = build_state(entry.weight, entry.spec)
    worst = 0.0
    for s in np.linspace(1, 2, 11):
        for delta in np.linspace(-2, 2, 11):
            alpha = case_b_alpha(s, delta)
            if abs(math.cos(alpha)) < 1e-9:
                report.skip("case-b", f"s={s:g} delta={delta:g}: degenerate basis")
                continue
            vec = normalize(embed(state, [basis_from_alpha(alpha)] * 2))
            worst = max(worst, abs(concurrence(vec) - case_b_concurrence(s, delta)))
    report.check("case-b", worst <= 1e-10, f"max |pipeline - formula| {worst:.2e}")


def _avg_entropy(report: _Report, entries: list[CatalogEntry]) -> None:
    by_name = {e.name: e for e in entries}
    g_state = build_state(by_name["G1+"].weight, by_name["G1+"].spec)
    grid = np.linspace(0, 2 * math.pi, 5, endpoint=False)
    worst = 0.0
    for a1, a2, a3 in itertools.product(grid, repeat=3):
        vec = embed(g_state, [basis_from_alpha(a) for a in (a1, a2, a3)])
        worst = max(worst, abs(average_entropy(vec)
                               - average_entropy_closed_form("G", a1, a2, a3)))
    report.check("avg-entropy-ghz-3angle", worst <= 1e-10, f"max residual {worst:.2e}")

    w7 = build_state(by_name["W7"].weight, by_name["W7"].spec)
    w6e = catalog("W6-+-")
    w6 = build_state(w6e.weight, w6e.spec)
    worst = 0.0
    for name, state in (("G", g_state), ("W7", w7), ("W6", w6)):
        for alpha in np.linspace(0, 2 * math.pi, 41):
            if abs(math.cos(alpha)) < 1e-9:
                report.skip("avg-entropy-equal-alpha",
                            f"alpha={alpha:.6g}: degenerate basis (formula value "
                            f"{average_entropy_equal_alpha(name, alpha):.3g})")
                continue
            vec = embed(state, [basis_from_alpha(alpha)] * 3)
            worst = max(worst, abs(average_entropy(vec)
                                   - average_entropy_equal_alpha(name, alpha)))
    report.check("avg-entropy-equal-alpha", worst <= 1e-10, f"max residual {worst:.2e}")


def _ghz_degeneracy(report: _Report, entries: list[CatalogEntry]) -> None:
    rng = random.Random(23)
    ghz = [e for e in entries if e.group == "ghz"]
    states = [(e.name, build_state(e.weight, e.spec)) for e in ghz]
    spread = 0.0
    for _ in range(10):
        alphas = []
        while len(alphas) < 3:
            a = rng.uniform(0, 2 * math.pi)
            if abs(math.cos(a)) > 0.05:
                alphas.append(a)
        bases = [basis_from_alpha(a) for a in alphas]
        values = [average_entropy(embed(state, bases)) for _, state in states]
        spread = max(spread, max(values) - min(values))
    report.check("ghz-family-degeneracy", spread <= 1e-10,
                 f"max spread {spread:.2e} across all 16 members")


def _biseparability(report: _Report) -> None:
    bases = [basis_from_alpha(0.5)] * 3
    worst_ratio = 0.0
    worst_conc = 0.0
    for c in all_biseparable():
        vec = embed(build_state(c.weight, c.spec), bases)
        worst_ratio = max(worst_ratio, schmidt_ratio(vec, [c.factor_site]))
        pair = dominant_pair_state(vec, c.factor_site)
        want = concurrence_closed_form(c.pair_name, 0.5, 0.5)
        worst_conc = max(worst_conc, abs(concurrence(pair) - want))
    report.check("biseparability", worst_ratio < 1e-12 and worst_conc <= 1e-10,
                 f"max schmidt ratio {worst_ratio:.2e}, pair-concurrence residual "
                 f"{worst_conc:.2e}")


def _grassmann_laws(report: _Report) -> None:
    rng = random.Random(31)
    gens = [theta(i) for i in (1, 2)] + [theta_bar(i) for i in (1, 2)]

    def rand_el():
        out = GrassmannElement.zero()
        for _ in range(rng.randrange(4)):
            word = rng.sample(gens, rng.randrange(len(gens) + 1))
            out = out + GrassmannElement.word(
                *word, coeff=complex(rng.randrange(-3, 4), rng.randrange(-3, 4)))
        return out

    ok = True
    for _ in range(200):
        a, b, c = rand_el(), rand_el(), rand_el()
        g = rng.choice(gens)
        ok = ok and (a * b) * c == a * (b * c)
        ok = ok and a * (b + c) == a * b + a * c
        ok = ok and a.berezin(g).berezin(g).is_zero()
        ok = ok and a.conjugate().conjugate() == a
    for g in gens:
        for h in gens:
            gh = GrassmannElement.word(g) * GrassmannElement.word(h)
            ok = ok and (gh.is_zero() if g == h
                         else gh == -(GrassmannElement.word(h) * GrassmannElement.word(g)))
    report.check("grassmann-laws", ok, "associativity/anticommutativity/nilpotency/"
                 "Berezin rules on randomized elements")


def run_all(inject_fault: str | None = None) -> int:
    entries = catalog_entries(include_variants=True)
    if inject_fault is not None:
        found = False
        patched = []
        for e in entries:
            if e.name == inject_fault:
                patched.append(CatalogEntry(e.name, e.group, e.spec, -e.weight,
                                            e.expected, e.note))
                found = True
            else:
                patched.append(e)
        if not found:
            print(f"[skip] inject-fault: no entry named {inject_fault!r}")
        entries = patched

    report = _Report()
    _table_fidelity(report, entries)
    _round_trip(report, entries)
    _biorthonormality(report)
    _overcompleteness(report)
    _coherent_identity(report)
    _concurrence_forms(report, entries)
    _case_b(report, entries)
    _avg_entropy(report, entries)
    _ghz_degeneracy(report, entries)
    _biseparability(report)
    _grassmann_laws(report)
    if report.failures:
        print(f"{report.failures} check(s) FAILED")
        return 1
    print("all checks passed")
    return 0
