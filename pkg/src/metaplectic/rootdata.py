"""Split root data, Weyl words, inversion sets and maximal-parabolic data.

Roots are tracked three ways in parallel: coefficients over the simple roots
(positivity test), X-coordinates (pairings against the cocharacter basis) and
the coroot's Y-coordinates.  Weyl elements are words; the group is never
enumerated except by the small-rank test helper `weyl_elements`.

Simple-root numbering (fixed here and used by every report): B_r has the
short root at position r, C_r has the long root at position 1 (so its
coroot is the unique short coroot), D_r forks at position 3 with antennas 1
and 2, E_r is a chain 1..r-1 with the branch node r attached at position 3,
F_4 has long roots 1,2, and G_2 is (long, short).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .errors import AxiomViolation, InvalidCartan, ValidationError

Vec = tuple[int, ...]

_MAX_ROOTS = 4096


def cartan_matrix(letter: str, rank: int) -> tuple[Vec, ...]:
    """Entries c[i][j] = <alpha_j, alpha_i_coroot>, 0-based."""
    edges: list[tuple[int, int]] = []
    special: dict[tuple[int, int], int] = {}

    def chain(pairs):
        edges.extend(pairs)

    if letter == "A":
        if rank < 1:
            raise InvalidCartan("A_r needs r >= 1")
        chain((i, i + 1) for i in range(rank - 1))
    elif letter == "B":
        if rank < 2:
            raise InvalidCartan("B_r needs r >= 2")
        chain((i, i + 1) for i in range(rank - 1))
        # alpha_r short: <alpha_{r-1}, alpha_r_coroot> = -2
        special[(rank - 1, rank - 2)] = -2
    elif letter == "C":
        if rank < 2:
            raise InvalidCartan("C_r needs r >= 2")
        chain((i, i + 1) for i in range(rank - 1))
        # alpha_1 long: <alpha_1, alpha_2_coroot> = -2
        special[(1, 0)] = -2
    elif letter == "D":
        if rank < 3:
            raise InvalidCartan("D_r needs r >= 3")
        edges.extend([(0, 2), (1, 2)])
        chain((i, i + 1) for i in range(2, rank - 1))
    elif letter == "E":
        if rank not in (6, 7, 8):
            raise InvalidCartan("E_r needs r in {6,7,8}")
        chain((i, i + 1) for i in range(rank - 2))
        edges.append((2, rank - 1))
    elif letter == "F":
        if rank != 4:
            raise InvalidCartan("F_4 has rank 4")
        chain([(0, 1), (1, 2), (2, 3)])
        # alpha_1, alpha_2 long: <alpha_2, alpha_3_coroot> = -2
        special[(2, 1)] = -2
    elif letter == "G":
        if rank != 2:
            raise InvalidCartan("G_2 has rank 2")
        edges.append((0, 1))
        # alpha_1 long, alpha_2 short: <alpha_1, alpha_2_coroot> = -3
        special[(1, 0)] = -3
    else:
        raise InvalidCartan(f"unknown Cartan type {letter!r}")

    c = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    for i, j in edges:
        c[i][j] = c[j][i] = -1
    for (i, j), val in special.items():
        c[i][j] = val
    return tuple(tuple(r) for r in c)


@dataclass(frozen=True)
class WeylWord:
    """Simple-reflection word, written composition-style: the last letter of
    `letters` acts first on a vector."""

    letters: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.letters)

    @staticmethod
    def identity() -> "WeylWord":
        return WeylWord(())

    def then(self, other: "WeylWord") -> "WeylWord":
        """self composed after other (other acts first)."""
        return WeylWord(self.letters + other.letters)


@dataclass(frozen=True)
class RootEntry:
    coeffs: Vec   # coordinates over the simple roots
    x: Vec        # X-coordinates: pairings with the Y-basis
    coroot: Vec   # Y-coordinates

    @property
    def positive(self) -> bool:
        return all(c >= 0 for c in self.coeffs)


@dataclass(frozen=True)
class RootDatum:
    rank_y: int
    simple_roots_x: tuple[Vec, ...]
    simple_coroots: tuple[Vec, ...]
    roots: tuple[RootEntry, ...]
    cartan: tuple[Vec, ...]   # cartan[i][j] = <alpha_j, alpha_i_coroot>

    # -- construction ------------------------------------------------------

    @classmethod
    def build(cls, letter: str, rank: int, isogeny: str = "sc") -> "RootDatum":
        c = cartan_matrix(letter, rank)
        if isogeny == "sc":
            # Y-basis = simple coroots; alpha_j has x-coords column j of c
            coroots = [tuple(1 if i == k else 0 for i in range(rank)) for k in range(rank)]
            roots_x = [tuple(c[i][j] for i in range(rank)) for j in range(rank)]
        elif isogeny == "adjoint":
            # Y-basis = fundamental coweights; alpha_j = e_j, coroot rows of c
            roots_x = [tuple(1 if j == k else 0 for j in range(rank)) for k in range(rank)]
            coroots = [tuple(c[i][j] for j in range(rank)) for i in range(rank)]
        else:
            raise InvalidCartan(f"unknown isogeny {isogeny!r}")
        return cls.from_simples(rank, roots_x, coroots)

    @classmethod
    def from_simples(cls, rank_y: int, simple_roots_x, simple_coroots) -> "RootDatum":
        """Explicit mode: simple roots as X-vectors over a chosen Y-basis and
        simple coroots as Y-vectors.  Validates the root-datum axioms."""
        sx = tuple(tuple(int(v) for v in r) for r in simple_roots_x)
        sc = tuple(tuple(int(v) for v in r) for r in simple_coroots)
        n = len(sx)
        if len(sc) != n:
            raise InvalidCartan("roots/coroots length mismatch")
        if any(len(r) != rank_y for r in sx + sc):
            raise InvalidCartan("vector length differs from rank")
        cartan = tuple(tuple(_dot(sx[j], sc[i]) for j in range(n)) for i in range(n))
        for i in range(n):
            if cartan[i][i] != 2:
                raise AxiomViolation(f"<alpha_{i+1}, alpha_{i+1}^> = {cartan[i][i]} != 2")
        roots = _generate_roots(n, sx, sc, cartan)
        rd = cls(rank_y, sx, sc, roots, cartan)
        rd._validate()
        return rd

    def _validate(self) -> None:
        pos = [r for r in self.roots if r.positive]
        neg = [r for r in self.roots if all(c <= 0 for c in r.coeffs)]
        if len(pos) + len(neg) != len(self.roots):
            bad = next(r for r in self.roots if not r.positive and any(c > 0 for c in r.coeffs))
            raise AxiomViolation(f"root {bad.coeffs} is neither positive nor negative")
        coeff_set = {r.coeffs for r in self.roots}
        coroot_set = {r.coroot for r in self.roots}
        for i in range(len(self.simple_roots_x)):
            for r in self.roots:
                img = self.reflect_coeffs(i, r.coeffs)
                if img not in coeff_set:
                    raise AxiomViolation(f"s_{i+1} moves root {r.coeffs} outside the system")
                if self.reflect_y(i, r.coroot) not in coroot_set:
                    raise AxiomViolation(f"s_{i+1} moves coroot {r.coroot} outside the system")

    # -- basic structure ---------------------------------------------------

    @property
    def nsimple(self) -> int:
        return len(self.simple_roots_x)

    def positive_roots(self) -> tuple[RootEntry, ...]:
        return tuple(r for r in self.roots if r.positive)

    def root_by_coeffs(self, coeffs) -> RootEntry:
        coeffs = tuple(coeffs)
        for r in self.roots:
            if r.coeffs == coeffs:
                return r
        raise ValidationError(f"no root with coefficients {coeffs}")

    def simple_root(self, i: int) -> RootEntry:
        unit = tuple(1 if j == i else 0 for j in range(self.nsimple))
        return self.root_by_coeffs(unit)

    def pairing(self, x, y):
        return _dot(x, y)

    # -- reflections and words ---------------------------------------------

    def reflect_x(self, i: int, x):
        k = _dot(x, self.simple_coroots[i])
        return tuple(a - k * b for a, b in zip(x, self.simple_roots_x[i]))

    def reflect_y(self, i: int, y):
        k = _dot(self.simple_roots_x[i], y)
        return tuple(a - k * b for a, b in zip(y, self.simple_coroots[i]))

    def reflect_coeffs(self, i: int, coeffs) -> Vec:
        k = sum(c * self.cartan[i][j] for j, c in enumerate(coeffs))
        return tuple(c - k if j == i else c for j, c in enumerate(coeffs))

    def apply_x(self, word: WeylWord, x):
        for i in reversed(word.letters):
            x = self.reflect_x(i, x)
        return tuple(x)

    def apply_y(self, word: WeylWord, y):
        for i in reversed(word.letters):
            y = self.reflect_y(i, y)
        return tuple(y)

    def apply_coeffs(self, word: WeylWord, coeffs) -> Vec:
        for i in reversed(word.letters):
            coeffs = self.reflect_coeffs(i, coeffs)
        return tuple(coeffs)

    def action_on_simples(self, word: WeylWord) -> tuple[Vec, ...]:
        """Images of the simple-root coefficient vectors; identifies the
        underlying Weyl-group element."""
        n = self.nsimple
        return tuple(self.apply_coeffs(word, tuple(1 if j == i else 0 for j in range(n)))
                     for i in range(n))

    def is_identity(self, word: WeylWord) -> bool:
        n = self.nsimple
        return self.action_on_simples(word) == tuple(
            tuple(1 if j == i else 0 for j in range(n)) for i in range(n))

    def inversion_set(self, word: WeylWord) -> tuple[RootEntry, ...]:
        """Positive roots sent negative; the word need not be reduced."""
        out = []
        for r in self.positive_roots():
            img = self.apply_coeffs(word, r.coeffs)
            if all(c <= 0 for c in img) and any(img):
                out.append(r)
        return tuple(sorted(out, key=lambda r: r.coeffs))

    def reduced_word(self, word: WeylWord) -> WeylWord:
        """Reduced expression via the descent algorithm."""
        images = list(self.action_on_simples(word))
        collected: list[int] = []
        n = self.nsimple
        idmat = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        guard = 0
        while images != idmat:
            i = next(k for k in range(n) if all(c <= 0 for c in images[k]))
            collected.append(i)
            # compose with s_i on the right: new(v) = old(s_i v)
            images = [self._coeff_image(images, self.reflect_coeffs(i, idmat[k])) for k in range(n)]
            guard += 1
            if guard > len(self.roots) + 1:
                raise ValidationError("descent failed to terminate")
        return WeylWord(tuple(reversed(collected)))

    def _coeff_image(self, images, coeffs) -> Vec:
        n = self.nsimple
        out = [0] * n
        for j, c in enumerate(coeffs):
            if c:
                out = [a + c * b for a, b in zip(out, images[j])]
        return tuple(out)

    def word_length(self, word: WeylWord) -> int:
        return len(self.inversion_set(word))

    def longest_word(self, simples: tuple[int, ...] | None = None) -> WeylWord:
        """Reduced word for the longest element of W (or of a standard Levi)."""
        allowed = tuple(range(self.nsimple)) if simples is None else tuple(simples)
        support = set(allowed)
        x = [0] * self.rank_y
        for r in self.positive_roots():
            if all(c == 0 or j in support for j, c in enumerate(r.coeffs)):
                x = [a + b for a, b in zip(x, r.x)]
        collected = []
        while True:
            i = next((k for k in allowed if _dot(x, self.simple_coroots[k]) > 0), None)
            if i is None:
                break
            x = list(self.reflect_x(i, x))
            collected.append(i)
        return WeylWord(tuple(reversed(collected)))

    # -- parabolic data ------------------------------------------------------

    def parabolic(self, beta: int) -> "ParabolicDatum":
        if not 0 <= beta < self.nsimple:
            raise ValidationError(f"no simple root with index {beta}")
        levi = tuple(i for i in range(self.nsimple) if i != beta)
        two_rho = [0] * self.rank_y
        for r in self.positive_roots():
            if r.coeffs[beta] > 0:
                two_rho = [a + b for a, b in zip(two_rho, r.x)]
        rho_p = tuple(Fraction(a, 2) for a in two_rho)
        denom = _dot(rho_p, self.simple_coroots[beta])
        beta_p = tuple(a / denom for a in rho_p)
        w = self.reduced_word(self.longest_word().then(self.longest_word(levi)))
        simple_coeffs = {tuple(1 if j == i else 0 for j in range(self.nsimple)) for i in levi}
        images = {self.apply_coeffs(w, c) for c in simple_coeffs}
        all_simple = {tuple(1 if j == i else 0 for j in range(self.nsimple)) for i in range(self.nsimple)}
        if not images <= all_simple:
            raise AxiomViolation("parabolic element does not permute the Levi simples into Delta")
        img_beta = self.apply_coeffs(w, tuple(1 if j == beta else 0 for j in range(self.nsimple)))
        if not all(c <= 0 for c in img_beta):
            raise AxiomViolation("parabolic element does not send beta negative")
        return ParabolicDatum(self, beta, levi, beta_p, w, images == simple_coeffs)


@dataclass(frozen=True)
class ParabolicDatum:
    rd: RootDatum
    omitted_simple: int
    levi_simples: tuple[int, ...]
    beta_p: tuple[Fraction, ...]
    unique_w: WeylWord
    self_associated: bool


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _generate_roots(n, sx, sc, cartan) -> tuple[RootEntry, ...]:
    seeds = []
    for k in range(n):
        coeffs = tuple(1 if j == k else 0 for j in range(n))
        seeds.append(RootEntry(coeffs, sx[k], sc[k]))
    seen = {r.coeffs: r for r in seeds}
    frontier = list(seeds)
    while frontier:
        nxt = []
        for r in frontier:
            for i in range(n):
                k = sum(c * cartan[i][j] for j, c in enumerate(r.coeffs))
                coeffs = tuple(c - k if j == i else c for j, c in enumerate(r.coeffs))
                if coeffs in seen:
                    continue
                x = tuple(a - _dot(r.x, sc[i]) * b for a, b in zip(r.x, sx[i]))
                co = tuple(a - _dot(sx[i], r.coroot) * b for a, b in zip(r.coroot, sc[i]))
                entry = RootEntry(coeffs, x, co)
                seen[coeffs] = entry
                nxt.append(entry)
                if len(seen) > _MAX_ROOTS:
                    raise AxiomViolation("root closure does not terminate; invalid input data")
        frontier = nxt
    return tuple(sorted(seen.values(), key=lambda r: r.coeffs))


def weyl_elements(rd: RootDatum) -> list[WeylWord]:
    """All Weyl-group elements as reduced words (small ranks only)."""
    seen = {rd.action_on_simples(WeylWord.identity()): WeylWord.identity()}
    frontier = [WeylWord.identity()]
    while frontier:
        nxt = []
        for w in frontier:
            for i in range(rd.nsimple):
                cand = WeylWord((i,) + w.letters)
                key = rd.action_on_simples(cand)
                if key not in seen:
                    seen[key] = cand
                    nxt.append(cand)
        frontier = nxt
    return sorted(seen.values(), key=lambda w: (len(w.letters), w.letters))


def identify_cartan_type(cartan) -> tuple[str, int] | None:
    """Match a Cartan matrix against the standard types up to relabeling."""
    n = len(cartan)
    candidates = ["A"]
    if n >= 2:
        candidates += ["B", "C", "G"] if n == 2 else ["B", "C"]
    if n >= 3:
        candidates.append("D")
    if n == 4:
        candidates.append("F")
    if n in (6, 7, 8):
        candidates.append("E")
    for letter in candidates:
        try:
            ref = cartan_matrix(letter, n)
        except InvalidCartan:
            continue
        if _cartan_isomorphic(cartan, ref):
            # B_2 and C_2 coincide up to relabeling; report C by convention
            if letter == "B" and n == 2:
                letter = "C"
            return letter, n
    return None


def _cartan_isomorphic(a, b) -> bool:
    n = len(a)
    if len(b) != n:
        return False
    if n > 9:
        raise ValidationError("type identification supported up to rank 9")
    rows_a = sorted(sorted(r) for r in a)
    rows_b = sorted(sorted(r) for r in b)
    if rows_a != rows_b:
        return False
    for perm in permutations(range(n)):
        if all(a[perm[i]][perm[j]] == b[i][j] for i in range(n) for j in range(n)):
            return True
    return False
