//! `F_p`-linear maps on `GF(p^m)` and `GF(p^m)²`.
//!
//! [`LinearMap`] is a dense matrix over GF(p); [`BlockMap`] is the compressed
//! 2×2 layout whose four subfunctions are monomials `c·x^{p^t}`.

use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ff::{inv_mod, FieldCtx, FieldElement};

/// An element `(x, y)` of `GF(p^m)²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pair(pub FieldElement, pub FieldElement);

impl Pair {
    pub fn zero(ctx: &FieldCtx) -> Self {
        Pair(ctx.zero(), ctx.zero())
    }

    pub fn is_zero(self) -> bool {
        self.0.is_zero() && self.1.is_zero()
    }

    #[inline]
    pub fn add(self, ctx: &FieldCtx, o: Pair) -> Pair {
        Pair(ctx.add(self.0, o.0), ctx.add(self.1, o.1))
    }

    #[inline]
    pub fn sub(self, ctx: &FieldCtx, o: Pair) -> Pair {
        Pair(ctx.sub(self.0, o.0), ctx.sub(self.1, o.1))
    }

    /// Decodes `enc = enc(x) + enc(y)·p^m`.
    pub fn from_index(ctx: &FieldCtx, enc: u64) -> Pair {
        let n = ctx.order() as u64;
        Pair(ctx.at((enc % n) as u32), ctx.at((enc / n) as u32))
    }

    pub fn index(self, ctx: &FieldCtx) -> u64 {
        self.0.encoding() as u64 + self.1.encoding() as u64 * ctx.order() as u64
    }
}

impl Serialize for Pair {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&self.0)?;
        seq.serialize_element(&self.1)?;
        seq.end()
    }
}

/// Coordinates of `(x, y)` over GF(p): digits of `x`, then digits of `y`.
pub fn pair_to_vec(ctx: &FieldCtx, v: Pair) -> Vec<u32> {
    let m = ctx.m() as usize;
    let mut out = vec![0u32; 2 * m];
    ctx.write_digits(v.0, &mut out[..m]);
    ctx.write_digits(v.1, &mut out[m..]);
    out
}

pub fn vec_to_pair(ctx: &FieldCtx, v: &[u32]) -> Pair {
    let m = ctx.m() as usize;
    debug_assert_eq!(v.len(), 2 * m);
    Pair(
        ctx.from_digits_unchecked(&v[..m]),
        ctx.from_digits_unchecked(&v[m..]),
    )
}

/// The standard basis `e₀ … e_{2m-1}` of `GF(p^m)²` over GF(p).
pub fn pair_basis(ctx: &FieldCtx) -> Vec<Pair> {
    let m = ctx.m();
    (0..2 * m)
        .map(|i| {
            if i < m {
                Pair(ctx.basis(i), ctx.zero())
            } else {
                Pair(ctx.zero(), ctx.basis(i - m))
            }
        })
        .collect()
}

/// A dense `n × n` matrix over GF(p), acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    p: u32,
    n: usize,
    a: Vec<u32>,
}

impl Serialize for LinearMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[u32]> = self.a.chunks(self.n.max(1)).collect();
        let mut st = s.serialize_struct("LinearMap", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("matrix", &rows)?;
        st.end()
    }
}

impl LinearMap {
    pub fn zero(p: u32, n: usize) -> Self {
        LinearMap {
            p,
            n,
            a: vec![0; n * n],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zero(p, n);
        for i in 0..n {
            m.a[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(p: u32, rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        let mut a = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: r.len(),
                });
            }
            a.extend(r.into_iter().map(|v| v % p));
        }
        Ok(LinearMap { p, n, a })
    }

    pub fn from_columns(p: u32, cols: &[Vec<u32>]) -> Result<Self> {
        let n = cols.len();
        let mut m = Self::zero(p, n);
        for (j, c) in cols.iter().enumerate() {
            if c.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: c.len(),
                });
            }
            for (i, &v) in c.iter().enumerate() {
                m.a[i * n + j] = v % p;
            }
        }
        Ok(m)
    }

    /// Matrix of an additive map on `GF(p^m)²`, read off the standard basis.
    pub fn from_pair_fn(ctx: &FieldCtx, f: impl Fn(Pair) -> Pair) -> Self {
        let cols: Vec<Vec<u32>> = pair_basis(ctx)
            .into_iter()
            .map(|e| pair_to_vec(ctx, f(e)))
            .collect();
        Self::from_columns(ctx.p(), &cols).expect("square by construction")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.a[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.a.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        debug_assert_eq!(v.len(), self.n);
        let p = self.p as u64;
        self.a
            .chunks(self.n.max(1))
            .map(|row| {
                (row.iter()
                    .zip(v)
                    .map(|(&x, &y)| x as u64 * y as u64)
                    .sum::<u64>()
                    % p) as u32
            })
            .collect()
    }

    pub fn apply_pair(&self, ctx: &FieldCtx, v: Pair) -> Pair {
        vec_to_pair(ctx, &self.apply(&pair_to_vec(ctx, v)))
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let p = self.p as u64;
        let mut out = LinearMap::zero(self.p, n);
        for i in 0..n {
            for k in 0..n {
                let x = self.a[i * n + k] as u64;
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    let idx = i * n + j;
                    out.a[idx] = ((out.a[idx] as u64 + x * other.a[k * n + j] as u64) % p) as u32;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> LinearMap {
        let n = self.n;
        let mut out = LinearMap::zero(self.p, n);
        for i in 0..n {
            for j in 0..n {
                out.a[j * n + i] = self.a[i * n + j];
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows();
        rref(&mut rows, self.n, self.p).len()
    }

    pub fn invertible(&self) -> bool {
        self.rank() == self.n
    }

    pub fn inverse(&self) -> Option<LinearMap> {
        let n = self.n;
        let mut rows: Vec<Vec<u32>> = self
            .rows()
            .into_iter()
            .enumerate()
            .map(|(i, mut r)| {
                r.extend((0..n).map(|j| u32::from(i == j)));
                r
            })
            .collect();
        if rref(&mut rows, n, self.p).len() < n {
            return None;
        }
        let inv: Vec<Vec<u32>> = rows.into_iter().map(|r| r[n..].to_vec()).collect();
        Some(LinearMap::from_rows(self.p, inv).expect("square"))
    }

    /// A basis of the null space.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let mut rows = self.rows();
        null_space(&mut rows, self.n, self.p)
    }
}

/// Reduced row echelon form over GF(p) on the first `ncols` columns
/// (extra columns are carried along). Returns the pivot columns.
pub(crate) fn rref(rows: &mut [Vec<u32>], ncols: usize, p: u32) -> Vec<usize> {
    let p64 = p as u64;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(sel) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = inv_mod(rows[r][c], p) as u64;
        for v in rows[r].iter_mut() {
            *v = (*v as u64 * inv % p64) as u32;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c] as u64;
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = ((*x as u64 + (p64 - f) * y as u64) % p64) as u32;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Null space basis of the matrix given by `rows` (each of width `ncols`).
/// The vector for free column `f` is supported on `f` and on pivot columns
/// left of `f`.
pub(crate) fn null_space(rows: &mut [Vec<u32>], ncols: usize, p: u32) -> Vec<Vec<u32>> {
    let pivots = rref(rows, ncols, p);
    let mut out = Vec::new();
    for f in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u32; ncols];
        v[f] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - rows[r][f]) % p;
        }
        out.push(v);
    }
    out
}

/// Finds a linear map sending each input to its required output.
///
/// Coordinates left free by the constraints are set to zero. The result is
/// re-checked against every pair; inconsistent constraints are reported,
/// never papered over.
pub fn fit_linear(p: u32, n: usize, pairs: &[(Vec<u32>, Vec<u32>)]) -> Result<LinearMap> {
    for (x, y) in pairs {
        if x.len() != n || y.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: x.len().min(y.len()),
            });
        }
    }
    // Rows [x | y]; solving X·Aᵀ = Y.
    let mut rows: Vec<Vec<u32>> = pairs
        .iter()
        .map(|(x, y)| x.iter().chain(y).map(|&v| v % p).collect())
        .collect();
    let pivots = rref(&mut rows, n, p);
    for row in &rows[pivots.len()..] {
        if row[n..].iter().any(|&v| v != 0) {
            return Err(Error::Inconsistent);
        }
    }
    let mut at = vec![vec![0u32; n]; n];
    for (r, &c) in pivots.iter().enumerate() {
        at[c] = rows[r][n..].to_vec();
    }
    let map = LinearMap::from_rows(p, at)?.transpose();
    for (x, y) in pairs {
        let yy: Vec<u32> = y.iter().map(|&v| v % p).collect();
        if map.apply(x) != yy {
            return Err(Error::Inconsistent);
        }
    }
    Ok(map)
}

/// [`fit_linear`] on pairs of `GF(p^m)²` elements.
pub fn fit_map(ctx: &FieldCtx, pairs: &[(Pair, Pair)]) -> Result<LinearMap> {
    let v: Vec<(Vec<u32>, Vec<u32>)> = pairs
        .iter()
        .map(|&(x, y)| (pair_to_vec(ctx, x), pair_to_vec(ctx, y)))
        .collect();
    fit_linear(ctx.p(), 2 * ctx.m() as usize, &v)
}

/// The subfunction `x ↦ coeff·x^{p^degree}` (zero when `coeff` is zero).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MonomialEntry {
    pub coeff: FieldElement,
    pub degree: u32,
}

impl MonomialEntry {
    pub fn new(ctx: &FieldCtx, coeff: FieldElement, degree: u32) -> Self {
        MonomialEntry {
            coeff,
            degree: degree % ctx.m(),
        }
    }

    pub fn zero(ctx: &FieldCtx) -> Self {
        MonomialEntry {
            coeff: ctx.zero(),
            degree: 0,
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    #[inline]
    pub fn apply(&self, ctx: &FieldCtx, x: FieldElement) -> FieldElement {
        if self.coeff.is_zero() {
            return ctx.zero();
        }
        ctx.mul(self.coeff, ctx.frobenius(x, self.degree))
    }
}

impl Serialize for MonomialEntry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.coeff.encoding(), self.degree).serialize(s)
    }
}

/// `(x, y) ↦ (b₁(x) + b₂(y), b₃(x) + b₄(y))` with monomial subfunctions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct BlockMap {
    pub entries: [MonomialEntry; 4],
}

impl BlockMap {
    pub fn new(entries: [MonomialEntry; 4]) -> Self {
        BlockMap { entries }
    }

    /// `diag(c₁·x^{p^t₁}, c₄·x^{p^t₄})`.
    pub fn diagonal(ctx: &FieldCtx, c1: FieldElement, t1: u32, c4: FieldElement, t4: u32) -> Self {
        let z = MonomialEntry::zero(ctx);
        BlockMap::new([
            MonomialEntry::new(ctx, c1, t1),
            z,
            z,
            MonomialEntry::new(ctx, c4, t4),
        ])
    }

    /// `(x, y) ↦ (c₂·y^{p^t₂}, c₃·x^{p^t₃})`.
    pub fn anti_diagonal(
        ctx: &FieldCtx,
        c2: FieldElement,
        t2: u32,
        c3: FieldElement,
        t3: u32,
    ) -> Self {
        let z = MonomialEntry::zero(ctx);
        BlockMap::new([
            z,
            MonomialEntry::new(ctx, c2, t2),
            MonomialEntry::new(ctx, c3, t3),
            z,
        ])
    }

    pub fn identity(ctx: &FieldCtx) -> Self {
        Self::diagonal(ctx, ctx.one(), 0, ctx.one(), 0)
    }

    #[inline]
    pub fn apply(&self, ctx: &FieldCtx, v: Pair) -> Pair {
        let [b1, b2, b3, b4] = &self.entries;
        Pair(
            ctx.add(b1.apply(ctx, v.0), b2.apply(ctx, v.1)),
            ctx.add(b3.apply(ctx, v.0), b4.apply(ctx, v.1)),
        )
    }

    pub fn expand(&self, ctx: &FieldCtx) -> LinearMap {
        LinearMap::from_pair_fn(ctx, |v| self.apply(ctx, v))
    }

    /// `self ∘ other` when the product is again a block of monomials; `None`
    /// when some position would be a sum of monomials of distinct degrees.
    pub fn compose(&self, ctx: &FieldCtx, other: &BlockMap) -> Option<BlockMap> {
        let a = &self.entries;
        let b = &other.entries;
        let mut out = [MonomialEntry::zero(ctx); 4];
        for i in 0..2 {
            for j in 0..2 {
                let mut acc: Option<MonomialEntry> = None;
                for k in 0..2 {
                    let x = a[2 * i + k];
                    let y = b[2 * k + j];
                    if x.is_zero() || y.is_zero() {
                        continue;
                    }
                    // c·(d·z^{p^t})^{p^s} = c·d^{p^s}·z^{p^{s+t}}
                    let term = MonomialEntry::new(
                        ctx,
                        ctx.mul(x.coeff, ctx.frobenius(y.coeff, x.degree)),
                        x.degree + y.degree,
                    );
                    acc = match acc {
                        None => Some(term),
                        Some(prev) if prev.degree == term.degree => Some(MonomialEntry::new(
                            ctx,
                            ctx.add(prev.coeff, term.coeff),
                            prev.degree,
                        )),
                        Some(prev) if prev.is_zero() => Some(term),
                        Some(_) => return None,
                    };
                }
                out[2 * i + j] = match acc {
                    Some(e) if !e.is_zero() => e,
                    _ => MonomialEntry::zero(ctx),
                };
            }
        }
        Some(BlockMap::new(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_swap() {
        let f = FieldCtx::new(3, 3).unwrap();
        assert_eq!(BlockMap::identity(&f).expand(&f), LinearMap::identity(3, 6));
        let swap = BlockMap::anti_diagonal(&f, f.one(), 0, f.one(), 0);
        let v = Pair(f.at(5), f.at(17));
        assert_eq!(swap.apply(&f, v), Pair(f.at(17), f.at(5)));
        assert_eq!(swap.expand(&f).apply_pair(&f, v), Pair(f.at(17), f.at(5)));
    }

    #[test]
    fn frobenius_block_in_gf8() {
        let f = FieldCtx::new(2, 3).unwrap();
        let z = MonomialEntry::zero(&f);
        let b = BlockMap::new([MonomialEntry::new(&f, f.one(), 1), z, z, z]);
        let e = b.expand(&f);
        // 1 ↦ 1, x ↦ x², x² ↦ x⁴ = x² + x (mod x³+x+1).
        let expected_block = [[1, 0, 0], [0, 0, 1], [0, 1, 1]];
        for i in 0..6 {
            for j in 0..6 {
                let want = if i < 3 && j < 3 {
                    expected_block[i][j]
                } else {
                    0
                };
                assert_eq!(e.entry(i, j), want, "({i},{j})");
            }
        }
        assert!(!e.invertible());
    }

    #[test]
    fn invertibility() {
        let f = FieldCtx::new(3, 3).unwrap();
        assert!(LinearMap::identity(3, 6).invertible());
        let mut rows = LinearMap::identity(3, 6).rows();
        for r in rows.iter_mut() {
            r[2] = 0;
        }
        assert!(!LinearMap::from_rows(3, rows).unwrap().invertible());
        let d = BlockMap::diagonal(&f, f.at(4), 1, f.at(20), 2).expand(&f);
        assert!(d.invertible());
        let inv = d.inverse().unwrap();
        assert_eq!(d.compose(&inv), LinearMap::identity(3, 6));
    }

    #[test]
    fn fit_map_cases() {
        let f = FieldCtx::new(3, 3).unwrap();
        let basis = pair_basis(&f);
        let pairs: Vec<(Pair, Pair)> = basis.iter().map(|&e| (e, e)).collect();
        assert_eq!(fit_map(&f, &pairs).unwrap(), LinearMap::identity(3, 6));
        assert_eq!(fit_map(&f, &[]).unwrap(), LinearMap::zero(3, 6));
        let v = basis[1];
        let w = basis[4];
        assert_eq!(
            fit_map(&f, &[(v, Pair::zero(&f)), (v, w)]),
            Err(Error::Inconsistent)
        );
        // Dependent inputs with consistent outputs are fine.
        let two_v = v.add(&f, v);
        let two_w = w.add(&f, w);
        let m = fit_map(&f, &[(v, w), (two_v, two_w)]).unwrap();
        assert_eq!(m.apply_pair(&f, v), w);
    }

    #[test]
    fn kernel_of_singular_map() {
        let m = LinearMap::from_rows(3, vec![vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 1]]).unwrap();
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.apply(&k[0]).iter().all(|&v| v == 0));
    }

    #[test]
    fn block_compose_rejects_mixed_degrees() {
        let f = FieldCtx::new(3, 3).unwrap();
        let a = BlockMap::new([
            MonomialEntry::new(&f, f.one(), 0),
            MonomialEntry::new(&f, f.one(), 1),
            MonomialEntry::zero(&f),
            MonomialEntry::new(&f, f.one(), 0),
        ]);
        let b = BlockMap::new([
            MonomialEntry::new(&f, f.one(), 0),
            MonomialEntry::zero(&f),
            MonomialEntry::new(&f, f.one(), 0),
            MonomialEntry::new(&f, f.one(), 0),
        ]);
        // Top-left is x + x^p.
        assert!(a.compose(&f, &b).is_none());
    }
}
