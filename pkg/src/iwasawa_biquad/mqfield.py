"""Exact arithmetic in real multiquadratic fields Q(sqrt m1, ..., sqrt mn).

An element is a pair ``(coeffs, den)``: ``coeffs[S]`` multiplies the basis
vector sqrt(prod_{i in S} m_i) for the bitmask S, and the whole vector is
divided by the positive integer ``den``. Square roots are taken by
recursion down the tower Q(sqrt m1, ..., sqrt m_{n-1})(sqrt m_n).
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd, prod

from sympy.ntheory.residue_ntheory import sqrt_mod

from .arith import is_squarefree, jacobi, sqrt_exact, squarefree_part

Elt = tuple[tuple[int, ...], int]


def _normalize(coeffs, den: int) -> Elt:
    if den < 0:
        coeffs, den = [-c for c in coeffs], -den
    g = den
    for c in coeffs:
        if g == 1:
            break
        g = gcd(g, c)
    if g > 1:
        coeffs = [c // g for c in coeffs]
        den //= g
    return tuple(coeffs), den


class MQField:
    """A real multiquadratic field given by independent squarefree generators."""

    def __init__(self, gens):
        gens = tuple(int(g) for g in gens)
        for g in gens:
            if g <= 1 or not is_squarefree(g):
                raise ValueError(f"generator {g} must be squarefree and > 1")
        self.gens = gens
        self.n = len(gens)
        self.deg = 1 << self.n
        self.rad = [prod(gens[i] for i in range(self.n) if mask >> i & 1) for mask in range(self.deg)]
        self.lookup: dict[int, tuple[int, int]] = {}
        for mask in range(1, self.deg):
            s = squarefree_part(self.rad[mask])
            if s == 1 or s in self.lookup:
                raise ValueError(f"generators {gens} are dependent modulo squares")
            self.lookup[s] = (mask, sqrt_exact(self.rad[mask] // s))
        self.sub = MQField(gens[:-1]) if self.n else None

    def __repr__(self):
        return f"MQField{self.gens}"

    def radicands(self) -> list[int]:
        """Radicands of all quadratic subfields, ascending."""
        return sorted(self.lookup)

    def contains_sqrt(self, d: int) -> bool:
        return d == 1 or squarefree_part(d) in self.lookup

    # construction -------------------------------------------------------
    def rational(self, num: int, den: int = 1) -> Elt:
        return _normalize([num] + [0] * (self.deg - 1), den)

    def one(self) -> Elt:
        return self.rational(1)

    def sqrt_of(self, d: int) -> Elt:
        """The element sqrt(d) for a squarefree radicand d of a subfield."""
        if d == 1:
            return self.one()
        mask, c = self.lookup[d]
        coeffs = [0] * self.deg
        coeffs[mask] = 1
        return _normalize(coeffs, c)

    def quadratic(self, d: int, x: int, y: int, den: int = 1) -> Elt:
        """The element (x + y sqrt d) / den."""
        mask, c = self.lookup[d]
        coeffs = [0] * self.deg
        coeffs[0] = x * c
        coeffs[mask] = y
        return _normalize(coeffs, den * c)

    # ring operations ----------------------------------------------------
    def mul(self, a: Elt, b: Elt) -> Elt:
        ca, da = a
        cb, db = b
        rad = self.rad
        out = [0] * self.deg
        for s, x in enumerate(ca):
            if not x:
                continue
            for t, y in enumerate(cb):
                if y:
                    out[s ^ t] += x * y * rad[s & t]
        return _normalize(out, da * db)

    def add(self, a: Elt, b: Elt) -> Elt:
        (ca, da), (cb, db) = a, b
        return _normalize([x * db + y * da for x, y in zip(ca, cb)], da * db)

    def neg(self, a: Elt) -> Elt:
        return tuple(-c for c in a[0]), a[1]

    def sub_(self, a: Elt, b: Elt) -> Elt:
        return self.add(a, self.neg(b))

    def scale(self, a: Elt, num: int, den: int = 1) -> Elt:
        return _normalize([c * num for c in a[0]], a[1] * den)

    def power(self, a: Elt, k: int) -> Elt:
        if k < 0:
            return self.power(self.inv(a), -k)
        result, base = self.one(), a
        while k:
            if k & 1:
                result = self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result

    def is_zero(self, a: Elt) -> bool:
        return not any(a[0])

    def is_rational(self, a: Elt) -> bool:
        return not any(a[0][1:])

    def conj(self, a: Elt, signs) -> Elt:
        """Apply the automorphism sqrt(m_i) -> signs[i] * sqrt(m_i)."""
        coeffs = []
        for mask, c in enumerate(a[0]):
            sgn = 1
            for i in range(self.n):
                if mask >> i & 1 and signs[i] < 0:
                    sgn = -sgn
            coeffs.append(sgn * c)
        return tuple(coeffs), a[1]

    def support(self, a: Elt) -> set[int]:
        return {mask for mask, c in enumerate(a[0]) if c}

    # tower decomposition -------------------------------------------------
    def split(self, a: Elt) -> tuple[Elt, Elt]:
        half = self.deg >> 1
        coeffs, den = a
        return _normalize(coeffs[:half], den), _normalize(coeffs[half:], den)

    def join(self, lo: Elt, hi: Elt) -> Elt:
        (cl, dl), (ch, dh) = lo, hi
        return _normalize([c * dh for c in cl] + [c * dl for c in ch], dl * dh)

    def inv(self, a: Elt) -> Elt:
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        if self.n == 0:
            (c,), den = a
            return _normalize([den], c)
        sub, m = self.sub, self.gens[-1]
        A, B = self.split(a)
        norm = sub.sub_(sub.mul(A, A), sub.scale(sub.mul(B, B), m))
        ninv = sub.inv(norm)
        return self.join(sub.mul(A, ninv), sub.neg(sub.mul(B, ninv)))

    def sign(self, a: Elt) -> int:
        """Sign of a under the embedding with every sqrt(m_i) > 0."""
        if self.n == 0:
            c = a[0][0]
            return (c > 0) - (c < 0)
        sub, m = self.sub, self.gens[-1]
        A, B = self.split(a)
        sa, sb = sub.sign(A), sub.sign(B)
        if sb == 0 or sa == sb:
            return sa if sa else sb
        if sa == 0:
            return sb
        t = sub.sub_(sub.mul(A, A), sub.scale(sub.mul(B, B), m))
        return sa * sub.sign(t)

    def positive(self, a: Elt) -> Elt:
        return a if self.sign(a) >= 0 else self.neg(a)

    def sqrt(self, a: Elt) -> Elt | None:
        """An exact square root of a in the field, or None."""
        if self.n == 0:
            (c,), den = a
            r = sqrt_exact(c * den)
            return None if r is None else _normalize([r], den)
        sub, m = self.sub, self.gens[-1]
        A, B = self.split(a)
        if sub.is_zero(B):
            x = sub.sqrt(A)
            if x is not None:
                return self.join(x, sub.rational(0))
            y = sub.sqrt(sub.scale(A, 1, m))
            return None if y is None else self.join(sub.rational(0), y)
        norm = sub.sub_(sub.mul(A, A), sub.scale(sub.mul(B, B), m))
        nr = sub.sqrt(norm)
        if nr is None:
            return None
        for cand in (nr, sub.neg(nr)):
            x = sub.sqrt(sub.scale(sub.add(A, cand), 1, 2))
            if x is None or sub.is_zero(x):
                continue
            y = sub.mul(B, sub.inv(sub.scale(x, 2)))
            root = self.join(x, y)
            if self.mul(root, root) == a:
                return root
        return None

    def to_float(self, a: Elt) -> float:
        return sum(c * self.rad[s] ** 0.5 for s, c in enumerate(a[0])) / a[1]

    def fmt(self, a: Elt) -> str:
        terms = []
        for mask, c in enumerate(a[0]):
            if c:
                terms.append(str(c) if mask == 0 else f"{c}*sqrt({self.rad[mask]})")
        body = " + ".join(terms) or "0"
        return body if a[1] == 1 else f"({body})/{a[1]}"

    # reduction modulo primes ---------------------------------------------
    def residue_data(self, p: int) -> "ResidueData":
        return _residue_data(self.gens, p)

    def reduce(self, a: Elt, image) -> tuple[int, int]:
        """Image of a in F_{p^2} under an embedding's basis images."""
        p, nr, imgs = image
        coeffs, den = a
        if den % p == 0:
            raise ValueError(f"denominator {den} not invertible mod {p}")
        x = y = 0
        for c, (u, v) in zip(coeffs, imgs):
            if c:
                c %= p
                x += c * u
                y += c * v
        dinv = pow(den, -1, p)
        return x * dinv % p, y * dinv % p


# F_{p^2} = F_p[w] / (w^2 - nr) -------------------------------------------
def fp2_mul(a, b, p, nr):
    return (a[0] * b[0] + nr * a[1] * b[1]) % p, (a[0] * b[1] + a[1] * b[0]) % p


def fp2_pow(a, k, p, nr):
    result, base = (1, 0), a
    while k:
        if k & 1:
            result = fp2_mul(result, base, p, nr)
        k >>= 1
        if k:
            base = fp2_mul(base, base, p, nr)
    return result


def quadratic_character(z, p: int, nr: int, f: int) -> int:
    """Quadratic character of a nonzero z in the residue field F_{p^f}."""
    if f == 1:
        if z[1]:
            raise ValueError("element not in the prime field")
        return jacobi(z[0], p)
    v = fp2_pow(z, (p * p - 1) // 2, p, nr)
    if v == (1, 0):
        return 1
    if v == (p - 1, 0):
        return -1
    raise ValueError("zero in residue field")


class ResidueData:
    """Primes of a multiquadratic field above an odd unramified prime p.

    Embeddings into F_{p^2} are sign vectors on fixed square roots of the
    generators; Frobenius flips the signs of nonresidue generators, so one
    sign vector per Frobenius orbit labels one prime ideal.
    """

    def __init__(self, gens, p):
        if p == 2 or any(g % p == 0 for g in gens):
            raise ValueError(f"{p} is ramified or even")
        self.p = p
        self.gens = gens
        nr = 2
        while jacobi(nr, p) != -1:
            nr += 1
        self.nr = nr
        self.chars = tuple(jacobi(g, p) for g in gens)
        roots = []
        for g, ch in zip(gens, self.chars):
            if ch == 1:
                roots.append((sqrt_mod(g % p, p), 0))
            else:
                roots.append((0, sqrt_mod(g * pow(nr, -1, p) % p, p)))
        self.roots = roots
        inert = [i for i, ch in enumerate(self.chars) if ch == -1]
        self.f = 2 if inert else 1
        n = len(gens)
        labels = []
        for bits in range(1 << n):
            signs = tuple(-1 if bits >> i & 1 else 1 for i in range(n))
            if inert and signs[inert[0]] == -1:
                continue
            labels.append(signs)
        self.labels = labels
        self.images = [self._basis_images(s) for s in labels]

    def _basis_images(self, signs):
        p, nr = self.p, self.nr
        n = len(self.gens)
        imgs = []
        for mask in range(1 << n):
            z = (1, 0)
            for i in range(n):
                if mask >> i & 1:
                    r = self.roots[i]
                    if signs[i] < 0:
                        r = ((-r[0]) % p, (-r[1]) % p)
                    z = fp2_mul(z, r, p, nr)
            imgs.append(z)
        return (p, nr, imgs)

    def characters(self, field: MQField, a: Elt) -> tuple[int, ...]:
        """Quadratic residue character of a at each prime above p."""
        return tuple(
            quadratic_character(field.reduce(a, img), self.p, self.nr, self.f) for img in self.images
        )


@lru_cache(maxsize=100_000)
def _residue_data(gens, p):
    return ResidueData(gens, p)
