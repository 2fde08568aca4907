"""Exact model of a tame nonarchimedean local field.

Elements are (valuation, unit-residue exponent) pairs, NOT full p-adic
expansions.  This truncation is the load-bearing scoping decision of the
package: every consumer downstream (tame symbol, Hilbert symbol, Weil index,
unramified character evaluation) factors through exactly this quotient of
F^x, so nothing finer is ever needed.  The unit part of an element is g^e in
the residue field for a fixed generator g of its cyclic multiplicative group.

Roots of unity are tracked as exponents modulo M = lcm(q-1, 4), which embeds
mu_n (n | q-1) and the mu_4 needed by the Weil index in one cyclic group.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm

from .errors import InvalidPsiData, ValidationError


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


class TameField:
    """Local field with residue size q = p^f, cover degree n | q-1."""

    def __init__(self, p: int, q: int, n: int, g: int = 3):
        if not _is_prime(p):
            raise ValidationError(f"p={p} is not prime")
        qq, f = q, 0
        while qq % p == 0 and qq > 1:
            qq //= p
            f += 1
        if qq != 1 or f == 0:
            raise ValidationError(f"q={q} is not a power of p={p}")
        if n < 1 or (q - 1) % n:
            raise ValidationError(f"cover degree n={n} must divide q-1={q - 1}")
        self.p = p
        self.q = q
        self.f = f
        self.n = n
        self.M = lcm(q - 1, 4)
        self.g = g
        self._residue = None
        if f == 1:
            # validate that g generates (Z/q)^x
            seen, x = 0, 1
            for _ in range(q - 1):
                x = x * g % q
                seen += 1
                if x == 1:
                    break
            if seen != q - 1:
                raise ValidationError(f"g={g} does not generate the residue group of F_{q}")

    def __eq__(self, other):
        return isinstance(other, TameField) and (self.p, self.q, self.n, self.g) == (
            other.p, other.q, other.n, other.g)

    def __hash__(self):
        return hash((self.p, self.q, self.n, self.g))

    def __repr__(self):
        return f"TameField(p={self.p}, q={self.q}, n={self.n}, g={self.g})"

    # -- elements ------------------------------------------------------------

    def element(self, val: int, unit_exp: int = 0) -> "FieldElement":
        return FieldElement(self, val, unit_exp % (self.q - 1))

    def one(self) -> "FieldElement":
        return self.element(0, 0)

    def unit(self, exp: int) -> "FieldElement":
        return self.element(0, exp)

    def uniformizer(self, k: int = 1) -> "FieldElement":
        return self.element(k, 0)

    def minus_one(self) -> "FieldElement":
        return self.unit((self.q - 1) // 2 if self.q % 2 else 0)

    def minus_one_exp(self) -> int:
        return (self.q - 1) // 2 if self.q % 2 else 0

    # -- roots of unity --------------------------------------------------------

    def root_of_unity(self, exponent: int) -> "RootOfUnity":
        return RootOfUnity(exponent % self.M, self.M)

    def one_value(self) -> "RootOfUnity":
        return RootOfUnity(0, self.M)

    def zeta(self, order: int, power: int = 1) -> "RootOfUnity":
        if self.M % order:
            raise ValidationError(f"no primitive root of unity of order {order} available")
        return self.root_of_unity(self.M // order * power)

    def residue_value(self, exp: int) -> "RootOfUnity":
        """Embed the residue-field unit g^exp as a root of unity."""
        return self.root_of_unity(self.M // (self.q - 1) * exp)

    # -- symbols ----------------------------------------------------------------

    def tame_symbol_exp(self, x: "FieldElement", y: "FieldElement") -> int:
        """Exponent e with tame symbol (-1)^{v(x)v(y)} xbar^{v(y)} ybar^{-v(x)} = g^e."""
        self._check(x), self._check(y)
        e = x.val * y.val * self.minus_one_exp() + y.val * x.unit_exp - x.val * y.unit_exp
        return e % (self.q - 1)

    def hilbert(self, x: "FieldElement", y: "FieldElement") -> "RootOfUnity":
        """Degree-n Hilbert symbol: the (q-1)/n power of the tame symbol."""
        t = self.tame_symbol_exp(x, y)
        return self.root_of_unity(self.M // self.n * t)

    def hilbert2(self, x: "FieldElement", y: "FieldElement") -> "RootOfUnity":
        """Quadratic Hilbert symbol, available whenever q is odd."""
        if self.q % 2 == 0:
            raise ValidationError("quadratic symbol needs odd residue size")
        t = self.tame_symbol_exp(x, y)
        return self.root_of_unity(self.M // 2 * t)

    def _check(self, x: "FieldElement"):
        if x.field != self:
            raise ValidationError("element from a different field")

    # -- residue-field arithmetic (only 1-x needs it) ----------------------------

    def one_minus_exp(self, exp: int) -> int:
        """Exponent of 1 - g^exp in the residue group; exp must be nonzero mod q-1."""
        if exp % (self.q - 1) == 0:
            raise ValidationError("1 - x vanishes in the residue field")
        if self._residue is None:
            self._residue = _ResidueField(self.p, self.f, self.g)
        return self._residue.one_minus(exp % (self.q - 1))


class _ResidueField:
    """Tiny F_q model giving discrete logs, used only for 1-x residues.

    For prime q the user generator is used directly; for prime powers a
    canonical internal generator over the lexicographically first irreducible
    polynomial is chosen (unit exponents are defined relative to it).
    """

    def __init__(self, p: int, f: int, g: int):
        self.p, self.f = p, f
        q = p ** f
        if f == 1:
            gen = g % p
            elems = {}
            x = 1
            for e in range(q - 1):
                elems[x] = e
                x = x * gen % p
            self.log = elems
            self.sub = lambda a: (1 - a) % p
            self.val = lambda e: pow(gen, e, p)
        else:
            poly = self._find_irreducible()
            mul = lambda a, b: self._polymul(a, b, poly)
            gen = self._find_generator(mul, q)
            table = {}
            x = (1,) + (0,) * (f - 1)
            for e in range(q - 1):
                table[x] = e
                x = mul(x, gen)
            self.log = table
            self.sub = lambda a: tuple((1 - c) % p if i == 0 else (-c) % p for i, c in enumerate(a))
            inv_table = {e: v for v, e in table.items()}
            self.val = lambda e: inv_table[e]

    def one_minus(self, exp: int) -> int:
        return self.log[self.sub(self.val(exp))]

    def _polymul(self, a, b, poly):
        p, f = self.p, self.f
        prod = [0] * (2 * f - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        for i in range(2 * f - 2, f - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j, pj in enumerate(poly):
                    prod[i - f + j] = (prod[i - f + j] - c * pj) % p
        return tuple(prod[:f])

    def _find_irreducible(self):
        # monic x^f + (low-degree coefficients); lexicographically first
        from itertools import product as iproduct
        p, f = self.p, self.f
        for coeffs in iproduct(range(p), repeat=f):
            if self._is_irreducible(coeffs):
                return coeffs
        raise ValidationError("no irreducible polynomial found")

    def _is_irreducible(self, coeffs) -> bool:
        # x^(p^f) == x mod poly, and x^(p^d) != x for every proper divisor d
        p, f = self.p, self.f
        x = ((0, 1) + (0,) * (f - 2)) if f >= 2 else (0,)

        def frobenius(vec):
            out = (1,) + (0,) * (f - 1)
            base, e = vec, p
            while e:
                if e & 1:
                    out = self._polymul(out, base, coeffs)
                base = self._polymul(base, base, coeffs)
                e >>= 1
            return out

        acc = x
        for step in range(1, f + 1):
            acc = frobenius(acc)
            if step < f and f % step == 0 and acc == x:
                return False
        return acc == x

    def _find_generator(self, mul, q):
        from itertools import product as iproduct
        one = (1,) + (0,) * (self.f - 1)
        for cand in iproduct(range(self.p), repeat=self.f):
            if not any(cand):
                continue
            x, order = cand, 1
            while x != one:
                x = mul(x, cand)
                order += 1
                if order > q:
                    raise ValidationError("generator search failed")
            if order == q - 1:
                return cand
        raise ValidationError("residue group has no generator (impossible)")


@dataclass(frozen=True)
class FieldElement:
    field: TameField
    val: int
    unit_exp: int

    def __post_init__(self):
        object.__setattr__(self, "unit_exp", self.unit_exp % (self.field.q - 1))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self.field._check(other)
        return FieldElement(self.field, self.val + other.val, self.unit_exp + other.unit_exp)

    def inv(self) -> "FieldElement":
        return FieldElement(self.field, -self.val, -self.unit_exp)

    def __pow__(self, k: int) -> "FieldElement":
        return FieldElement(self.field, k * self.val, k * self.unit_exp)

    def is_one(self) -> bool:
        return self.val == 0 and self.unit_exp == 0

    def is_unit(self) -> bool:
        return self.val == 0

    def nth_power_class(self, n: int) -> tuple[int, int]:
        """Class in F^x/(F^x)^n as (val mod n, unit exponent mod n)."""
        return (self.val % n, self.unit_exp % n)

    def __repr__(self):
        parts = []
        if self.val:
            parts.append("pi" if self.val == 1 else f"pi^{self.val}")
        if self.unit_exp:
            parts.append("g" if self.unit_exp == 1 else f"g^{self.unit_exp}")
        return "*".join(parts) if parts else "1"


@dataclass(frozen=True)
class RootOfUnity:
    """zeta_M^exponent for the fixed primitive M-th root of unity."""

    exponent: int
    modulus: int

    def __post_init__(self):
        object.__setattr__(self, "exponent", self.exponent % self.modulus)

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        if self.modulus != other.modulus:
            raise ValidationError("root-of-unity modulus mismatch")
        return RootOfUnity(self.exponent + other.exponent, self.modulus)

    def __pow__(self, k: int) -> "RootOfUnity":
        return RootOfUnity(self.exponent * k, self.modulus)

    def inv(self) -> "RootOfUnity":
        return RootOfUnity(-self.exponent, self.modulus)

    def is_one(self) -> bool:
        return self.exponent == 0

    def order(self) -> int:
        return self.modulus // gcd(self.exponent, self.modulus)

    def as_fraction(self):
        from fractions import Fraction
        return Fraction(self.exponent, self.modulus)

    def __repr__(self):
        if self.exponent == 0:
            return "1"
        if 2 * self.exponent == self.modulus:
            return "-1"
        return f"zeta[{self.exponent}/{self.modulus}]"


class WeilIndex:
    """gamma_psi characterized by its value on a uniformizer.

    The two defining rules are gamma(a)gamma(b) = gamma(ab)(a,b)_2 and
    triviality on units (psi of conductor O_F); together they force the
    closed form used here.  Both square roots of (pi,pi)_2 are accepted.
    """

    SEEDS = {"+1": (4, 0), "-1": (4, 2), "+i": (4, 1), "-i": (4, 3)}

    def __init__(self, field: TameField, seed: str = "+i"):
        if field.q % 2 == 0:
            raise InvalidPsiData("Weil index needs odd residue size")
        if seed not in self.SEEDS:
            raise InvalidPsiData(f"seed must be one of {sorted(self.SEEDS)}")
        order, power = self.SEEDS[seed]
        self.field = field
        self.seed_name = seed
        self.seed = field.zeta(order, power)
        pp2 = field.hilbert2(field.uniformizer(), field.uniformizer())
        if self.seed * self.seed != pp2:
            raise InvalidPsiData(
                f"gamma(pi)={seed} squares to {self.seed * self.seed}, but (pi,pi)_2={pp2}")
        self._pp2 = pp2

    def __call__(self, a: FieldElement) -> RootOfUnity:
        self.field._check(a)
        k = a.val
        value = (self.seed ** k) * (self._pp2 ** (k * (k - 1) // 2))
        # gamma(pi^k u) = gamma(pi^k) (pi^k, u)_2^{-1}, and (pi, u)_2 = (-1)^{e_u}
        if (k * a.unit_exp) % 2:
            value = value * self.field.zeta(2)
        return value
