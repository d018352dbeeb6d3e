"""Exact rational linear algebra over graded vector spaces.

Everything is over Q, using fractions.Fraction.  Vectors are sparse dicts
{basis_name: Fraction}; bases are ordered lists so that all computations are
deterministic (echelon pivots leftmost, iteration in file order).
"""

from fractions import Fraction


class GradedSpace:
    """A finite based graded vector space.

    basis: ordered list of (name, degree, weight) with unique names.
    Degrees are integers (for Z/2N gradings the owner normalizes residues
    before constructing the space); weights are integers.
    """

    def __init__(self, basis=()):
        self.basis = [(str(n), int(d), int(w)) for (n, d, w) in basis]
        names = [b[0] for b in self.basis]
        assert len(set(names)) == len(names), "duplicate basis names"
        self._deg = {n: d for (n, d, w) in self.basis}
        self._wt = {n: w for (n, d, w) in self.basis}

    def names(self):
        return [b[0] for b in self.basis]

    def degree(self, name):
        return self._deg[name]

    def weight(self, name):
        return self._wt[name]

    def dim(self):
        return len(self.basis)

    def __contains__(self, name):
        return name in self._deg

    def __eq__(self, other):
        return isinstance(other, GradedSpace) and self.basis == other.basis

    def __repr__(self):
        return "GradedSpace(%r)" % (self.basis,)


class LinearMap:
    """Sparse linear map between graded spaces, homogeneous of a fixed shift.

    entries: dict {(source_name, target_name): Fraction}, zeros omitted.
    Every entry must connect basis elements whose degrees differ by the
    declared shift and whose weights agree.
    """

    def __init__(self, source, target, entries=None, shift=0, modulus=None):
        self.source = source
        self.target = target
        self.shift = shift
        self.modulus = modulus
        self.entries = {}
        for (s, t), c in (entries or {}).items():
            c = Fraction(c)
            if c == 0:
                continue
            assert s in source and t in target, (s, t)
            dd = target.degree(t) - source.degree(s)
            if modulus is None:
                assert dd == shift, ("degree shift mismatch", s, t, dd, shift)
            else:
                assert (dd - shift) % modulus == 0, ("degree shift mismatch", s, t)
            assert source.weight(s) == target.weight(t), ("weight mismatch", s, t)
            self.entries[(s, t)] = c

    def apply(self, vec):
        out = {}
        for s, c in vec.items():
            for (s2, t), m in self.entries.items():
                if s2 == s:
                    out[t] = out.get(t, Fraction(0)) + c * m
        return {k: v for k, v in out.items() if v != 0}

    def matrix(self):
        """Dense matrix rows = target basis, cols = source basis."""
        rows = self.target.names()
        cols = self.source.names()
        ri = {n: i for i, n in enumerate(rows)}
        ci = {n: j for j, n in enumerate(cols)}
        mat = [[Fraction(0)] * len(cols) for _ in rows]
        for (s, t), c in self.entries.items():
            mat[ri[t]][ci[s]] = c
        return mat


def vec_add(u, v, scale=Fraction(1)):
    out = dict(u)
    for k, c in v.items():
        out[k] = out.get(k, Fraction(0)) + scale * c
    return {k: c for k, c in out.items() if c != 0}

def vec_scale(u, t):
    t = Fraction(t)
    return {} if t == 0 else {k: c * t for k, c in u.items()}


# ---------------------------------------------------------------------------
# dense exact matrix routines


def mat_rank(mat):
    """Rank by fraction-free (Bareiss) elimination on the cleared-denominator
    integer matrix."""
    if not mat or not mat[0]:
        return 0
    m = []
    for row in mat:
        lcm = 1
        for x in row:
            q = Fraction(x).denominator
            lcm = lcm * q // _gcd(lcm, q)
        m.append([int(Fraction(x) * lcm) for x in row])
    nr, nc = len(m), len(m[0])
    rank = 0
    prev = 1
    r = 0
    for c in range(nc):
        piv = None
        for i in range(r, nr):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, nr):
            for j in range(c + 1, nc):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
        rank += 1
        if r == nr:
            break
    return rank


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def rref(mat):
    """Reduced row echelon form over Q.  Returns (rref_matrix, pivot_cols)."""
    m = [[Fraction(x) for x in row] for row in mat]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    pivots = []
    r = 0
    for c in range(nc):
        piv = None
        for i in range(r, nr):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nr):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return m, pivots


def kernel_basis(mat, ncols=None):
    """Basis of the kernel (as coordinate vectors, lists of Fractions)."""
    if not mat:
        n = ncols or 0
        out = []
        for j in range(n):
            v = [Fraction(0)] * n
            v[j] = Fraction(1)
            out.append(v)
        return out
    nc = len(mat[0])
    red, pivots = rref(mat)
    free = [j for j in range(nc) if j not in pivots]
    out = []
    for j in free:
        v = [Fraction(0)] * nc
        v[j] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][j]
        out.append(v)
    return out


def solve(mat, rhs):
    """Solve mat * x = rhs over Q; returns one solution (list) or None."""
    nr = len(mat)
    nc = len(mat[0]) if nr else 0
    aug = [list(mat[i]) + [Fraction(rhs[i])] for i in range(nr)]
    red, pivots = rref(aug) if nr else ([], [])
    if nc in pivots:
        return None
    x = [Fraction(0)] * nc
    for r, pc in enumerate(pivots):
        x[pc] = red[r][nc]
    if not nr:
        if any(Fraction(b) != 0 for b in rhs):
            return None
    return x


def span_coords(columns, vec):
    """Express vec in the span of the given column vectors; None if outside."""
    if not columns:
        return [] if all(Fraction(x) == 0 for x in vec) else None
    mat = [[columns[j][i] for j in range(len(columns))] for i in range(len(vec))]
    return solve(mat, vec)


# ---------------------------------------------------------------------------
# cochain complexes


class CochainComplex:
    """A finite cochain complex: one GradedSpace carrying all degrees, plus a
    degree +1 differential.  For Z/2N gradings pass the modulus; degrees are
    then residues in range(modulus)."""

    def __init__(self, space, differential_entries, modulus=None):
        self.space = space
        self.modulus = modulus
        self.d = LinearMap(space, space, differential_entries, shift=1,
                           modulus=modulus)
        self._check_d_squared()

    def _check_d_squared(self):
        for name in self.space.names():
            img = self.d.apply(self.d.apply({name: Fraction(1)}))
            if img:
                raise ValueError("differential does not square to zero at %r: %r"
                                 % (name, img))

    def degrees(self):
        return sorted(set(d for (_, d, _) in self.space.basis))

    def _slice(self, deg):
        return [n for (n, d, _) in self.space.basis if d == deg]

    def _block(self, deg):
        """Matrix of d restricted to degree deg, mapping into deg+1."""
        if self.modulus is not None:
            tgt_deg = (deg + 1) % self.modulus
        else:
            tgt_deg = deg + 1
        src = self._slice(deg)
        tgt = self._slice(tgt_deg)
        si = {n: j for j, n in enumerate(src)}
        ti = {n: i for i, n in enumerate(tgt)}
        mat = [[Fraction(0)] * len(src) for _ in tgt]
        for (s, t), c in self.d.entries.items():
            if s in si and t in ti:
                mat[ti[t]][si[s]] = c
        return mat, src, tgt

    def cohomology_dims(self):
        out = {}
        # rank of the outgoing block per degree; H^k = dim_k - rk(out) - rk(in)
        ranks = {}
        for deg in self.degrees():
            mat, src, _ = self._block(deg)
            ranks[deg] = mat_rank(mat) if src else 0
        for deg in self.degrees():
            n = len(self._slice(deg))
            prev = (deg - 1) % self.modulus if self.modulus is not None else deg - 1
            out[deg] = n - ranks.get(deg, 0) - ranks.get(prev, 0)
        return {d: v for d, v in out.items() if v != 0}

    def cohomology_reps(self, deg):
        """Representatives of H^deg: (reps, image_columns, slice_names).

        reps: list of coordinate vectors (in the degree-deg slice basis)
        spanning a complement of the image inside the kernel; deterministic
        echelon choice."""
        mat, src, _ = self._block(deg)
        kern = kernel_basis(mat, ncols=len(src))
        prev = (deg - 1) % self.modulus if self.modulus is not None else deg - 1
        pmat, psrc, ptgt = self._block(prev)
        # image vectors of the incoming differential, expressed in the
        # degree-deg slice coordinates
        img = []
        ti = {n: i for i, n in enumerate(src)}
        for j, s in enumerate(psrc):
            v = [Fraction(0)] * len(src)
            nz = False
            for (a, b), c in self.d.entries.items():
                if a == s and b in ti:
                    v[ti[b]] = c
                    nz = True
            if nz:
                img.append(v)
        # reduce image to an independent set
        img = _independent(img)
        reps = []
        cur = list(img)
        for v in kern:
            if span_coords(cur, v) is None:
                reps.append(v)
                cur.append(v)
        return reps, img, src


def _independent(vectors):
    out = []
    for v in vectors:
        if span_coords(out, v) is None:
            out.append(v)
    return out


def cohomology_dims(c):
    return c.cohomology_dims()


def map_rank(m):
    return mat_rank(m.matrix())
