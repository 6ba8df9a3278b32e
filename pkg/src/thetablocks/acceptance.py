"""Named regression targets: one function per acceptance criterion.

Each returns a :class:`CriterionResult`.  ``failures`` lists every check
that did not hold; ``ok`` is true only when the list is empty.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from sympy import Symbol, sympify

from . import blocks, families, hecke, lattice, order, rootsys, search, series, span
from .blocks import ThetaQuotient, expand, parse_block
from .config import load_fixture

F = Fraction


@dataclass
class CriterionResult:
    number: int
    title: str
    checks: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def check(self, cond: bool, label: str):
        self.checks += 1
        if not cond:
            self.failures.append(label)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        text = f"criterion {self.number:2d} [{status}] {self.title} ({self.checks} checks, {self.seconds:.1f}s)"
        if self.failures:
            text += ": " + "; ".join(self.failures[:5])
            if len(self.failures) > 5:
                text += f"; ... {len(self.failures) - 5} more"
        return text


def _timed(number: int, title: str):
    def deco(fn):
        def run() -> CriterionResult:
            res = CriterionResult(number, title)
            t = time.perf_counter()
            fn(res)
            res.seconds = time.perf_counter() - t
            return res
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return deco


# --------------------------------------------------------------------- 1
@_timed(1, "kernel identities")
def criterion_1(r: CriterionResult):
    r.check(series.eta(50).agrees(series.eta_product(50)), "eta sum != product")
    r.check(series.theta(1, 50).agrees(series.theta_product(1, 50)), "theta sum != product")
    r.check(series.quintuple(1, 50).agrees(series.quintuple_product(1, 50)), "quintuple sum != product")
    r.check(series.quintuple(1, 30).agrees(series.quintuple_quotient(1, 30)), "quintuple != eta theta_2/theta")


# --------------------------------------------------------------------- 2
@_timed(2, "best-value table")
def criterion_2(r: CriterionResult):
    rows = load_fixture("best_values")
    r.check(len(rows) == 50, "table must have 50 rows")
    for rep in search.verify_table(rows):
        r.check(rep["ok"], f"row N={rep['N']}: k={rep['k']} a2={rep['a2']}")
    for row in rows[:3]:
        best = search.exhaustive(row["N"], 8)
        r.check(best.k == F(row["k"]), f"exhaustive N={row['N']} gives {best.k}")


# --------------------------------------------------------------------- 3
@_timed(3, "two-entry closed form")
def criterion_3(r: CriterionResult):
    for a in range(1, 31):
        for b in range(a + 1, 31):
            s, _ = order.s_and_k((a, b))
            res = order.minimize_block({a: 1, b: 1} if a != b else {a: 2})
            r.check(s == search.pair_s_closed_form(a, b) == 24 * res.min_value, f"s({a},{b})")


# --------------------------------------------------------------------- 4
@_timed(4, "quark suite")
def criterion_4(r: CriterionResult):
    P = F(1, 3) + 10
    for a in range(1, 9):
        for b in range(1, 9):
            q = families.QuarkSpec(a, b)
            r.check(families.quark_expansion(q, P).agrees(expand(q.block(), P)), f"Q_{a},{b} expansion")
    for a in range(1, 13):
        for b in range(1, 13):
            q = families.QuarkSpec(a, b)
            r.check(q.is_cusp == (q.block().classify() == "cusp"), f"Q_{a},{b} cusp flag")


# --------------------------------------------------------------------- 5
def _spectra(rng: random.Random, n: int, count: int, span_: int = 6):
    return [tuple(rng.sample(range(-span_, span_ + 1), n + 1)) for _ in range(count)]


@_timed(5, "A_n suite")
def criterion_5(r: CriterionResult):
    rng = random.Random(5)
    for n in (2, 3, 4):
        for a in _spectra(rng, n, 5):
            s = families.AnSpec(a)
            r.check(families.an_expansion(s, 8).agrees(expand(s.block(), 8)), f"A_{n} {a} expansion")
    for n in (2, 3):
        for a in _spectra(rng, n, 3):
            s = families.AnSpec(a)
            r.check(families.an_determinant(s, 3).agrees(families.an_expansion(s, 3)), f"A_{n} {a} determinant")
    for _ in range(30):
        n = rng.choice((2, 3, 4, 5))
        s = families.AnSpec(_spectra(rng, n, 1, 8)[0])
        cls = s.block().classify()
        r.check(cls != "neither" and families.cusp_supplement(s) == (cls == "cusp"), f"supplement {s.a}")


# --------------------------------------------------------------------- 6
FULL_WEYL = ("A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4")
SPECIALIZED = ("A4", "B4", "C4", "D5")


@_timed(6, "Macdonald identities")
def criterion_6(r: CriterionResult):
    for label in FULL_WEYL:
        r.check(rootsys.macdonald_verify(label, 5, "full_weyl"), f"{label} full Weyl")
    for label in SPECIALIZED:
        r.check(rootsys.macdonald_verify(label, 5, "specialized", samples=20), f"{label} specialized")
    # A1: the signed coset sum is the triple product itself
    R = rootsys.root_system("A1")
    W = [(g, rootsys.det_int(g)) for g in R.weyl_group()]
    rhs = lattice.coset_theta(R.lattice(), R.weyl_vector_coords(), W, 20)
    r.check(rhs.agrees(series.theta(1, 20)) and rhs.agrees(series.theta_product(1, 20)), "A1 triple product")


# --------------------------------------------------------------------- 7
def _vectorize(forms: list[dict], names: str, width: int) -> list[tuple[int, ...]]:
    return sorted(tuple(int(f.get(v, 0)) for v in names[:width]) for f in forms)


@_timed(7, "root-family tables")
def criterion_7(r: CriterionResult):
    n = Symbol("n")
    ranges = {"A": range(1, 8), "B": range(2, 7), "C": range(2, 7), "D": range(4, 7)}
    for row in load_fixture("root_parameters"):
        t = row["type"]
        labels = [f"{t}{k}" for k in ranges[t]] if t in ranges else [t]
        for label in labels:
            R = rootsys.root_system(label)
            got = R.parameters()
            for key in ("pos_roots", "nu", "k", "l"):
                want = F(str(sympify(row[key]).subs(n, R.rank)))
                have = F(got[key])
                same = (have - want) % 24 == 0 if key == "l" else have == want
                r.check(same, f"{label} {key}: table {want}, computed {have}")
    names = "abcd"
    for fam in load_fixture("low_weight_families") + load_fixture("weight2_root_families"):
        label = fam["type"]
        width = sum(R.rank for R in rootsys.components(label))
        regenerated = sorted(rootsys.family_forms(label))
        r.check(regenerated == _vectorize(fam["forms"], names, width), f"{label} index list")
        block = rootsys.theta_R_block(label, [1, 2, 3, 5][:width] if width <= 4 else [1] * width)
        r.check(block.eta == fam["eta"], f"{label} eta exponent")
        if "weight" in fam:
            r.check(block.weight() == F(fam["weight"]) and block.character() == fam["character"],
                    f"{label} weight/character")


# --------------------------------------------------------------------- 8
@_timed(8, "nearly holomorphic blocks")
def criterion_8(r: CriterionResult):
    table = load_fixture("nearly_holomorphic")
    for m, rows in table.items():
        want = sorted((tuple(sorted((int(a), c) for a, c in row["theta"].items())), 24 * F(row["eta_printed"]))
                      for row in rows)
        have = sorted((tuple(sorted(g.theta.items())), g.eta) for g in blocks.enumerate_gtb(F(m)))
        r.check(want == have, f"m={m} block set")
    for twice in range(1, 41):
        m = F(twice, 2)
        r.check(blocks.count_gtb(m) == len(blocks.enumerate_gtb(m)), f"count m={m}")


# --------------------------------------------------------------------- 9
G2_PROOF_MATRIX = [[2, -1, 1, 0], [-1, 2, -1, 0], [1, -1, 2, 0], [0, 0, 0, F(4, 3)]]


@_timed(9, "B2 and G2 families")
def criterion_9(r: CriterionResult):
    for a in range(1, 11):
        for b in range(1, 11):
            r.check(families.b2_block(a, b).classify() != "neither", f"B2({a},{b}) holomorphic")
            r.check(families.g2_block(a, b).classify() != "neither", f"G2({a},{b}) holomorphic")
            r.check(families.family_dual_bound("B2", a, b) == F(2, 3), f"B2({a},{b}) dual bound")
            r.check(families.family_dual_bound("G2", a, b) == F(4, 3), f"G2({a},{b}) dual bound")
    r.check(families.g2_dual_matrix() == [[F(x) for x in row] for row in G2_PROOF_MATRIX], "4 G^-1 matrix")
    for a in range(1, 16):
        for b in range(1, 16):
            if gcd(a, b) == 1:
                r.check(families.b2_cusp_rule(a, b) == (families.b2_block(a, b).classify() == "cusp"),
                        f"B2({a},{b}) cusp rule")


# -------------------------------------------------------------------- 10
NAMED_META = {
    "phi_2_37": (2, 37, 0, "cusp"),
    "phi_3_13": (3, 13, 0, "cusp"),
    "E_2_25": (2, 25, 0, "holomorphic"),
    "E_3_9_1": (3, 9, 0, "holomorphic"),
    "theta8": (4, 4, 0, "holomorphic"),
    "theta6_theta2_2": (4, 7, 0, "cusp"),
}
Q_ORDER_TWO = {"phi_3_122": (3, 122), "phi_3_167": (3, 167), "phi_3_173": (3, 173),
               "phi_2_587": (2, 587), "phi_2_713": (2, 713), "phi_2_893": (2, 893)}


@_timed(10, "named blocks")
def criterion_10(r: CriterionResult):
    for name, (k, m, h, cls) in NAMED_META.items():
        b = families.named_block(name)
        r.check(b.meta() == (k, m, h) and b.classify() == cls, "{}: weight {}, index {}, character {}, {}".format(name, *b.meta(), b.classify()))
    for name, (k, m) in Q_ORDER_TWO.items():
        b = families.named_block(name)
        r.check(b.weight() == k and b.index() == m and b.character() == 0, "{} meta: weight {}, index {}, character {}".format(name, *b.meta()))
        r.check(b.q_order() == 2 and b.classify() != "neither",
                f"{name}: q-order {b.q_order()}, min order {b.min_order()}")
    b = families.named_block("phi_2_2p")
    r.check(b.weight() == 2 and b.q_order() == 3 and b.classify() != "neither", "phi_2_2p q-order 3")


# -------------------------------------------------------------------- 11
@_timed(11, "Borcherds products and lifts")
def criterion_11(r: CriterionResult):
    phi = families.named_block("phi_3_13")
    psi = hecke.v2_quotient(phi, 5)
    target = expand(parse_block("1:-3 2:1 3:1 4:1"), 12)
    want = {3: 1, 2: 3, 1: 5, 0: 6, -1: 5, -2: 3, -3: 1}
    r.check(hecke.q0_part(psi) == hecke.q0_part(target) == want, "q^0 part of psi")
    r.check(hecke.val1_check(psi, 13), "val1 check")
    r.check(hecke.lift_equals_borcherds(phi, 4, 4, psi=target), "Lift(phi_3_13) = B(phi_0_13)")
    q11, q12 = families.QuarkSpec(1, 1).block(), families.QuarkSpec(1, 2).block()
    theta3 = q11 * q11 * q12
    r.check(theta3 == phi, "Q11^2 Q12 = phi_3_13")
    r.check(hecke.lift_equals_borcherds(theta3, 3, 4), "Lift(Theta) = B(-Theta|V2/Theta) through p^{2d}")


# -------------------------------------------------------------------- 12
CENSUS_M = (25, 37, 43, 49, 50, 53, 57, 97, 164)


@_timed(12, "weight-2 census")
def criterion_12(r: CriterionResult):
    table = {row["m"]: (row["te"], row["tc"]) for row in load_fixture("weight2_census")}
    got = span.census(CENSUS_M)
    for m in CENSUS_M:
        r.check(got[m] == table[m], f"m={m}: table {table[m]}, computed {got[m]}")
    rows = [row for row in load_fixture("elliptic_blocks") if row["theta"]]
    step = max(1, len(rows) // 10)
    sample = rows[::step][:10]
    for row in sample:
        b = ThetaQuotient({int(a): c for a, c in row["theta"].items()}, -6)
        cb = span.cusp_blocks(row["m"])
        r.check(b.index() == row["m"] and cb == [b], f"{row['label']} unique cusp block")
    r.check(any(row["m"] == 37 for row in sample), "sample includes m=37")
    A, B, C = (parse_block(span.J291_BLOCKS[k]) for k in "ABC")
    r.check(span.kernel([A, B, C]) == [[1, 1, -1]], "J_{2,91}: A + B = C")


# -------------------------------------------------------------------- 13
def _random_quotient(rng: random.Random) -> ThetaQuotient:
    th = {rng.randint(1, 9): rng.randint(-3, 4) for _ in range(rng.randint(1, 5))}
    return ThetaQuotient(th, rng.randint(-12, 12))


@_timed(13, "property suites")
def criterion_13(r: CriterionResult):
    rng = random.Random(13)
    for _ in range(100):
        A, B = _random_quotient(rng), _random_quotient(rng)
        r.check((A * B).profile() == A.profile() + B.profile(), f"additivity {A} {B}")
    for _ in range(100):
        A = _random_quotient(rng)
        l = rng.randint(1, 6)
        x = F(rng.randint(0, 200), rng.randint(1, 60))
        r.check(order.order_at(A.u_scale(l), x) == order.order_at(A, l * x), f"U_l law {A} l={l}")
    expanded = [families.named_block(k) for k in NAMED_META]
    expanded += [families.QuarkSpec(a, b).block() for a, b in ((1, 1), (1, 2), (2, 3))]
    expanded += [parse_block(v) for v in span.J291_BLOCKS.values()]
    for b in expanded:
        r.check(series.check_periodicity(expand(b, 6), b.index()), f"periodicity {b}")
    for _ in range(50):
        while True:
            q = [rng.randint(-9, 9) for _ in range(4)]
            if sum(q) % 2 == 0:
                break
        r.check(span.weierstrass_holds(*q, 12), f"three-term identity {q}")
    for _ in range(200):
        a = [rng.randint(1, 12) for _ in range(rng.randint(1, 7))]
        th: dict[int, int] = {}
        for v in a:
            th[v] = th.get(v, 0) + 1
        res = order.minimize_block(th)
        s, _ = order.s_and_k(a)
        M = sum(v * v for v in a)
        ok = 24 * res.min_value == s
        if res.witness_n is not None:
            ok = ok and F(3 * order.pair_form_S(sorted(a), res.witness_n), M) == s
        r.check(ok, f"order min vs S-min {a}")


# -------------------------------------------------------------------- 14
@_timed(14, "lattice picture")
def criterion_14(r: CriterionResult):
    L = lattice.IntegralLattice([[1]])
    ok, gamma, w0 = lattice.verify_picture(L, [(F(1),)], [((1,),), ((-1,),)], 10)
    r.check(ok and gamma == 1 and w0 == (F(1, 2),) and L.norm(w0) == F(3, 24), "rank-1 star")
    rhs = lattice.coset_theta(L, w0, [(((1,),), 1), (((-1,),), -1)], 12)
    r.check(rhs.agrees(series.theta(1, 12)), "rank-1 star is the triple product")
    R = rootsys.root_system("A2")
    ok, gamma, w0 = lattice.verify_picture(R.lattice(), R.star(), R.weyl_group(), 6, x=(1, 1))
    r.check(ok, "A2 root star identity")
    r.check(w0 == R.weyl_vector_coords(), "A2 w0 is the Weyl vector")
    r.check(R.lattice().norm(w0) == F(2 + 2 * 3, 24), "A2 beta(w0) = (n + 2N)/24")
    r.check(gamma == F(1, rootsys.weyl_stabilizer_order("A2")), "A2 normalization 1/|Stab|")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8, criterion_9, criterion_10, criterion_11, criterion_12, criterion_13, criterion_14]

# checks that fail because the printed value cannot be reproduced; see the README
KNOWN_ERRATA = {
    7: ["E8 nu: table 114, computed 112"],
    10: ["phi_2_713 meta: weight 2, index 629, character 0",
         "phi_2_713: q-order 2, min order -297/2516"],
}


def run(numbers=None) -> list[CriterionResult]:
    chosen = CRITERIA if not numbers else [CRITERIA[i - 1] for i in numbers]
    return [c() for c in chosen]
