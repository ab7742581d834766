//! Arithmetic on residues and square matrices modulo `2^k`.
//!
//! Values are stored as canonical non-negative `BigUint`s in `[0, 2^k)`.
//! Nothing here is constant-time; this is research tooling.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::RngCore;

use crate::error::{Error, Result};

/// The modulus `2^k`, identified by its bit exponent `k`.
#[derive(Clone)]
pub struct Modulus {
    exp: u32,
    mask: Arc<BigUint>,
}

impl PartialEq for Modulus {
    fn eq(&self, other: &Self) -> bool {
        self.exp == other.exp
    }
}

impl Eq for Modulus {}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Modulus(2^{})", self.exp)
    }
}

fn low_mask(bits: u64) -> BigUint {
    (BigUint::one() << bits) - 1u32
}

impl Modulus {
    pub fn new(exp: u32) -> Result<Self> {
        if exp == 0 {
            return Err(Error::usage("modulus exponent must be at least 1"));
        }
        Ok(Modulus {
            exp,
            mask: Arc::new(low_mask(exp as u64)),
        })
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    /// `2^k` itself.
    pub fn value(&self) -> BigUint {
        BigUint::one() << self.exp
    }

    pub fn contains(&self, x: &BigUint) -> bool {
        x.bits() <= self.exp as u64
    }

    pub fn reduce(&self, mut x: BigUint) -> BigUint {
        if x.bits() > self.exp as u64 {
            x &= &*self.mask;
        }
        x
    }

    pub fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        self.reduce(a + b)
    }

    pub fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            self.reduce(a + self.value() - b)
        }
    }

    pub fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            self.value() - a
        }
    }

    pub fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        self.reduce(a * b)
    }

    /// Inverse of an odd residue by Newton iteration, doubling the number
    /// of correct low bits each round. Returns `None` for even input.
    pub fn inv(&self, a: &BigUint) -> Option<BigUint> {
        if !a.bit(0) {
            return None;
        }
        let k = self.exp as u64;
        // Any odd a satisfies a*a = 1 mod 8.
        let mut x = a & BigUint::from(7u32);
        let mut prec = 3u64;
        if k <= 3 {
            return Some(x & &*self.mask);
        }
        while prec < k {
            prec = (2 * prec).min(k);
            let m = if prec == k {
                (*self.mask).clone()
            } else {
                low_mask(prec)
            };
            let t = (a * &x) & &m;
            // x <- x * (2 - a x) mod 2^prec
            let two_minus = ((BigUint::one() << prec) + 2u32 - t) & &m;
            x = (x * two_minus) & &m;
        }
        Some(x)
    }

    /// Uniform residue in `[0, 2^k)`.
    pub fn random<R: RngCore + ?Sized>(&self, rng: &mut R) -> BigUint {
        let nbytes = (self.exp as usize).div_ceil(8);
        let mut buf = vec![0u8; nbytes];
        rng.fill_bytes(&mut buf);
        self.reduce(BigUint::from_bytes_le(&buf))
    }
}

/// A single residue modulo `2^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residue {
    value: BigUint,
    modulus: Modulus,
}

impl Residue {
    pub fn new(value: BigUint, modulus: &Modulus) -> Self {
        Residue {
            value: modulus.reduce(value),
            modulus: modulus.clone(),
        }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn into_value(self) -> BigUint {
        self.value
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn is_unit(&self) -> bool {
        self.value.bit(0)
    }

    pub fn inv(&self) -> Option<Residue> {
        self.modulus.inv(&self.value).map(|v| Residue {
            value: v,
            modulus: self.modulus.clone(),
        })
    }

    /// All square roots; see [`sqrt_mod_pow2`].
    pub fn sqrts(&self) -> Result<Vec<Residue>> {
        Ok(sqrt_mod_pow2(&self.value, self.modulus.exp)?
            .into_iter()
            .map(|v| Residue {
                value: v,
                modulus: self.modulus.clone(),
            })
            .collect())
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Every `x` in `[0, 2^k)` with `x^2 = a (mod 2^k)`, for odd `a`, in ascending order.
///
/// Roots are lifted one bit at a time from a root modulo 8; for `k >= 3`
/// the answer is empty unless `a = 1 (mod 8)`, and otherwise has exactly
/// four elements. Even `a` is rejected: 2-adic roots of non-units are not
/// supported.
pub fn sqrt_mod_pow2(a: &BigUint, k: u32) -> Result<Vec<BigUint>> {
    let modulus = Modulus::new(k)?;
    let a = modulus.reduce(a.clone());
    if !a.bit(0) {
        return Err(Error::usage(
            "square roots are only supported for odd residues",
        ));
    }
    let low3 = a.iter_u32_digits().next().unwrap_or(0) & 7;
    match k {
        1 => return Ok(vec![BigUint::one()]),
        2 => {
            return Ok(if low3 & 3 == 1 {
                vec![BigUint::from(1u32), BigUint::from(3u32)]
            } else {
                vec![]
            })
        }
        _ => {}
    }
    if low3 != 1 {
        return Ok(vec![]);
    }

    // Invariant at the top of each round: x^2 = a (mod 2^i), sq = x^2 mod 2^k.
    let mut x = BigUint::one();
    let mut sq = BigUint::one();
    for i in 3..k as u64 {
        if sq.bit(i) != a.bit(i) {
            // (x + 2^(i-1))^2 = x^2 + 2^i x + 2^(2i-2), and 2i-2 > i for i >= 3.
            sq += &x << i;
            if 2 * i - 2 < k as u64 {
                sq += BigUint::one() << (2 * i - 2);
            }
            sq = modulus.reduce(sq);
            x.set_bit(i - 1, true);
        }
    }

    let half = BigUint::one() << (k - 1);
    let neg_x = modulus.neg(&x);
    let mut roots = vec![modulus.add(&x, &half), modulus.add(&neg_x, &half), neg_x, x];
    roots.sort();
    roots.dedup();
    Ok(roots)
}

/// Square matrix over `Z / 2^k`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueMatrix {
    dim: usize,
    entries: Vec<BigUint>,
    modulus: Modulus,
}

impl ResidueMatrix {
    /// Builds a matrix from canonical entries; values outside `[0, 2^k)` are a usage error.
    pub fn from_entries(dim: usize, entries: Vec<BigUint>, modulus: &Modulus) -> Result<Self> {
        if dim == 0 {
            return Err(Error::usage("matrix dimension must be positive"));
        }
        if entries.len() != dim * dim {
            return Err(Error::usage(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if entries.iter().any(|e| !modulus.contains(e)) {
            return Err(Error::usage("matrix entry out of range [0, 2^k)"));
        }
        Ok(ResidueMatrix {
            dim,
            entries,
            modulus: modulus.clone(),
        })
    }

    /// Builds a matrix entrywise, reducing each value modulo `2^k`.
    pub fn from_fn(
        dim: usize,
        modulus: &Modulus,
        mut f: impl FnMut(usize, usize) -> BigUint,
    ) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(modulus.reduce(f(i, j)));
            }
        }
        ResidueMatrix {
            dim,
            entries,
            modulus: modulus.clone(),
        }
    }

    pub fn identity(dim: usize, modulus: &Modulus) -> Self {
        Self::from_fn(dim, modulus, |i, j| {
            if i == j {
                BigUint::one()
            } else {
                BigUint::zero()
            }
        })
    }

    /// Independent uniform entries.
    pub fn random<R: RngCore + ?Sized>(dim: usize, modulus: &Modulus, rng: &mut R) -> Self {
        Self::from_fn(dim, modulus, |_, _| modulus.random(rng))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn entries(&self) -> &[BigUint] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.entries[i * self.dim + j]
    }

    pub fn residue(&self, i: usize, j: usize) -> Residue {
        Residue {
            value: self.get(i, j).clone(),
            modulus: self.modulus.clone(),
        }
    }

    /// Copy with entry `(i, j)` replaced (reduced modulo `2^k`).
    pub fn with_entry(&self, i: usize, j: usize, value: BigUint) -> Self {
        let mut out = self.clone();
        out.entries[i * self.dim + j] = self.modulus.reduce(value);
        out
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let e = self.get(i, j);
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    pub fn trace(&self) -> Residue {
        let sum = (0..self.dim).fold(BigUint::zero(), |acc, i| acc + self.get(i, i));
        Residue::new(sum, &self.modulus)
    }

    pub fn mul(&self, other: &ResidueMatrix) -> Result<ResidueMatrix> {
        mat_mul(self, other)
    }

    pub fn invert(&self) -> Result<ResidueMatrix> {
        mat_invert(self)
    }

    pub fn is_invertible(&self) -> bool {
        is_invertible(self)
    }

    /// Determinant modulo `2^k`.
    ///
    /// Elimination pivots on the entry of least 2-adic valuation in each
    /// column, which divides every other entry of that column in `Z / 2^k`.
    pub fn determinant(&self) -> BigUint {
        let m = &self.modulus;
        let d = self.dim;
        let mut rows: Vec<Vec<BigUint>> = self.entries.chunks(d).map(|r| r.to_vec()).collect();
        let mut det = BigUint::one();
        let mut negate = false;
        for col in 0..d {
            let pivot = (col..d)
                .filter(|&r| !rows[r][col].is_zero())
                .min_by_key(|&r| rows[r][col].trailing_zeros().unwrap_or(u64::MAX));
            let Some(pivot) = pivot else {
                return BigUint::zero();
            };
            if pivot != col {
                rows.swap(pivot, col);
                negate = !negate;
            }
            let p = rows[col][col].clone();
            let v = p.trailing_zeros().unwrap_or(0);
            let unit_inv = m.inv(&(&p >> v)).expect("odd part is a unit");
            let pivot_row = rows[col].clone();
            for row in &mut rows[col + 1..] {
                if row[col].is_zero() {
                    continue;
                }
                let q = m.mul(&(&row[col] >> v), &unit_inv);
                sub_scaled(&mut row[col..], &pivot_row[col..], &q, m);
            }
            det = m.mul(&det, &p);
        }
        if negate {
            m.neg(&det)
        } else {
            det
        }
    }

    fn check_compatible(&self, other: &ResidueMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::usage(format!(
                "dimension mismatch: {} vs {}",
                self.dim, other.dim
            )));
        }
        if self.modulus != other.modulus {
            return Err(Error::usage(format!(
                "modulus mismatch: 2^{} vs 2^{}",
                self.modulus.exp, other.modulus.exp
            )));
        }
        Ok(())
    }
}

/// `row -= f * pivot`, entrywise.
fn sub_scaled(row: &mut [BigUint], pivot: &[BigUint], f: &BigUint, m: &Modulus) {
    for (x, p) in row.iter_mut().zip(pivot) {
        if !p.is_zero() {
            let t = m.mul(f, p);
            *x = m.sub(x, &t);
        }
    }
}

/// `A * B mod 2^k`.
pub fn mat_mul(a: &ResidueMatrix, b: &ResidueMatrix) -> Result<ResidueMatrix> {
    a.check_compatible(b)?;
    let d = a.dim;
    let m = &a.modulus;
    let entry = |idx: usize| {
        let (i, j) = (idx / d, idx % d);
        let mut acc = BigUint::zero();
        for k in 0..d {
            let (x, y) = (a.get(i, k), b.get(k, j));
            if !x.is_zero() && !y.is_zero() {
                acc += x * y;
            }
        }
        m.reduce(acc)
    };

    #[cfg(feature = "parallel")]
    let entries: Vec<BigUint> = {
        use rayon::prelude::*;
        // Only worth the fork/join when a product is sizable.
        if d * d * (m.exp() as usize) >= 1 << 16 {
            (0..d * d).into_par_iter().map(entry).collect()
        } else {
            (0..d * d).map(entry).collect()
        }
    };
    #[cfg(not(feature = "parallel"))]
    let entries: Vec<BigUint> = (0..d * d).map(entry).collect();

    Ok(ResidueMatrix {
        dim: d,
        entries,
        modulus: m.clone(),
    })
}

/// Inverse by Gauss-Jordan elimination with odd pivots.
///
/// When `det` is odd, every column of the remaining submatrix has an odd
/// entry, so a unit pivot always exists; otherwise `NotInvertible`.
pub fn mat_invert(a: &ResidueMatrix) -> Result<ResidueMatrix> {
    let d = a.dim;
    let m = &a.modulus;
    let mut lhs: Vec<Vec<BigUint>> = a.entries.chunks(d).map(|r| r.to_vec()).collect();
    let mut rhs: Vec<Vec<BigUint>> = ResidueMatrix::identity(d, m)
        .entries
        .chunks(d)
        .map(|r| r.to_vec())
        .collect();

    for col in 0..d {
        let pivot = (col..d)
            .find(|&r| lhs[r][col].bit(0))
            .ok_or(Error::NotInvertible)?;
        lhs.swap(pivot, col);
        rhs.swap(pivot, col);

        let p_inv = m.inv(&lhs[col][col]).expect("pivot is odd");
        for x in lhs[col][col..].iter_mut().chain(rhs[col].iter_mut()) {
            *x = m.mul(x, &p_inv);
        }

        let (lhs_pivot, rhs_pivot) = (lhs[col].clone(), rhs[col].clone());
        for (r, (lrow, rrow)) in lhs.iter_mut().zip(rhs.iter_mut()).enumerate() {
            if r == col || lrow[col].is_zero() {
                continue;
            }
            let f = lrow[col].clone();
            sub_scaled(&mut lrow[col..], &lhs_pivot[col..], &f, m);
            sub_scaled(rrow, &rhs_pivot, &f, m);
        }
    }

    Ok(ResidueMatrix {
        dim: d,
        entries: rhs.into_iter().flatten().collect(),
        modulus: m.clone(),
    })
}

/// True iff `det(A)` is odd, decided over GF(2) on the low bits.
pub fn is_invertible(a: &ResidueMatrix) -> bool {
    let d = a.dim;
    let words = d.div_ceil(64);
    let mut rows: Vec<Vec<u64>> = (0..d)
        .map(|i| {
            let mut row = vec![0u64; words];
            for j in 0..d {
                if a.get(i, j).bit(0) {
                    row[j / 64] |= 1 << (j % 64);
                }
            }
            row
        })
        .collect();

    for col in 0..d {
        let (w, bit) = (col / 64, 1u64 << (col % 64));
        let Some(pivot) = (col..d).find(|&r| rows[r][w] & bit != 0) else {
            return false;
        };
        rows.swap(pivot, col);
        let pivot_row = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != col && row[w] & bit != 0 {
                row.iter_mut().zip(&pivot_row).for_each(|(x, y)| *x ^= y);
            }
        }
    }
    true
}

/// `Sinv * M * S mod 2^k`. `s_inv` is trusted to be the inverse of `s`.
pub fn mat_conjugate(
    s: &ResidueMatrix,
    s_inv: &ResidueMatrix,
    m: &ResidueMatrix,
) -> Result<ResidueMatrix> {
    mat_mul(&mat_mul(s_inv, m)?, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn m(k: u32) -> Modulus {
        Modulus::new(k).unwrap()
    }

    fn mat(dim: usize, vals: &[u64], k: u32) -> ResidueMatrix {
        ResidueMatrix::from_entries(dim, vals.iter().map(|&v| BigUint::from(v)).collect(), &m(k))
            .unwrap()
    }

    #[test]
    fn zero_exponent_is_rejected() {
        assert!(matches!(Modulus::new(0), Err(Error::Usage(_))));
    }

    #[test]
    fn l_times_r() {
        let l = mat(2, &[1, 0, 1, 1], 8);
        let r = mat(2, &[1, 1, 0, 1], 8);
        assert_eq!(mat_mul(&l, &r).unwrap(), mat(2, &[1, 1, 1, 2], 8));
    }

    #[test]
    fn fifteen_squared_mod_16() {
        let a = mat(2, &[15, 0, 0, 1], 4);
        assert!(mat_mul(&a, &a).unwrap().is_identity());
    }

    #[test]
    fn mul_rejects_mismatch() {
        let a = mat(2, &[1, 0, 0, 1], 8);
        let b = mat(2, &[1, 0, 0, 1], 9);
        let c = ResidueMatrix::identity(3, &m(8));
        assert!(matches!(mat_mul(&a, &b), Err(Error::Usage(_))));
        assert!(matches!(mat_mul(&a, &c), Err(Error::Usage(_))));
    }

    #[test]
    fn out_of_range_entries_rejected() {
        let r = ResidueMatrix::from_entries(1, vec![BigUint::from(16u32)], &m(4));
        assert!(matches!(r, Err(Error::Usage(_))));
    }

    #[test]
    fn invert_small_cases() {
        let id = ResidueMatrix::identity(3, &m(8));
        assert_eq!(mat_invert(&id).unwrap(), id);
        let r = mat(2, &[1, 1, 0, 1], 8);
        assert_eq!(mat_invert(&r).unwrap(), mat(2, &[1, 255, 0, 1], 8));
        let sing = mat(2, &[2, 0, 0, 1], 8);
        assert!(matches!(mat_invert(&sing), Err(Error::NotInvertible)));
    }

    #[test]
    fn invertibility_small_cases() {
        assert!(is_invertible(&ResidueMatrix::identity(5, &m(3))));
        assert!(!is_invertible(&mat(2, &[2, 0, 0, 1], 8)));
        assert!(!is_invertible(&mat(3, &[1, 2, 3, 1, 2, 3, 5, 7, 9], 8)));
    }

    #[test]
    fn large_random_inverse() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let md = m(4096);
        let a = loop {
            let a = ResidueMatrix::random(8, &md, &mut rng);
            if is_invertible(&a) {
                break a;
            }
        };
        let b = mat_invert(&a).unwrap();
        assert!(mat_mul(&a, &b).unwrap().is_identity());
        assert!(mat_mul(&b, &a).unwrap().is_identity());
    }

    #[test]
    fn scalar_inverse() {
        let md = m(200);
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for _ in 0..50 {
            let mut a = md.random(&mut rng);
            a.set_bit(0, true);
            let x = md.inv(&a).unwrap();
            assert!(md.mul(&a, &x).is_one());
        }
        assert!(md.inv(&BigUint::from(4u32)).is_none());
        let small = m(2);
        assert_eq!(
            small.inv(&BigUint::from(3u32)).unwrap(),
            BigUint::from(3u32)
        );
    }

    #[test]
    fn sqrt_examples() {
        let as_u64 = |v: Vec<BigUint>| -> Vec<u64> {
            v.into_iter().map(|x| x.try_into().unwrap()).collect()
        };
        assert_eq!(
            as_u64(sqrt_mod_pow2(&BigUint::from(1u32), 3).unwrap()),
            [1, 3, 5, 7]
        );
        // Brute force over all 16 residues: x^2 = 9 (mod 16) for x in {3, 5, 11, 13}.
        assert_eq!(
            as_u64(sqrt_mod_pow2(&BigUint::from(9u32), 4).unwrap()),
            [3, 5, 11, 13]
        );
        assert!(sqrt_mod_pow2(&BigUint::from(3u32), 3).unwrap().is_empty());
        assert_eq!(as_u64(sqrt_mod_pow2(&BigUint::from(1u32), 1).unwrap()), [1]);
        assert_eq!(
            as_u64(sqrt_mod_pow2(&BigUint::from(5u32), 2).unwrap()),
            [1, 3]
        );
        assert!(sqrt_mod_pow2(&BigUint::from(3u32), 2).unwrap().is_empty());
    }

    #[test]
    fn sqrt_rejects_even() {
        assert!(matches!(
            sqrt_mod_pow2(&BigUint::from(4u32), 5),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn sqrt_large_modulus() {
        let md = m(4096);
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let mut x = md.random(&mut rng);
        x.set_bit(0, true);
        let a = md.mul(&x, &x);
        let roots = sqrt_mod_pow2(&a, 4096).unwrap();
        assert_eq!(roots.len(), 4);
        assert!(roots.contains(&x));
        assert!(roots.iter().all(|r| md.mul(r, r) == a));
    }

    #[test]
    fn conjugate_examples() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let md = m(64);
        let mm = ResidueMatrix::random(4, &md, &mut rng);
        let id = ResidueMatrix::identity(4, &md);
        assert_eq!(mat_conjugate(&id, &id, &mm).unwrap(), mm);

        let s = loop {
            let s = ResidueMatrix::random(4, &md, &mut rng);
            if s.is_invertible() {
                break s;
            }
        };
        let s_inv = s.invert().unwrap();
        let c = mat_conjugate(&s, &s_inv, &mm).unwrap();
        assert_eq!(c.trace(), mm.trace());
        assert_eq!(mat_conjugate(&s_inv, &s, &c).unwrap(), mm);
    }

    #[test]
    fn determinant_small() {
        assert_eq!(mat(2, &[1, 1, 1, 2], 8).determinant(), BigUint::from(1u32));
        assert_eq!(mat(2, &[2, 0, 0, 1], 8).determinant(), BigUint::from(2u32));
        // det [[0,1],[1,0]] = -1
        assert_eq!(
            mat(2, &[0, 1, 1, 0], 8).determinant(),
            BigUint::from(255u32)
        );
        assert_eq!(mat(2, &[2, 4, 1, 2], 8).determinant(), BigUint::from(0u32));
        // det [[4,2],[6,5]] = 20 - 12 = 8
        assert_eq!(mat(2, &[4, 2, 6, 5], 8).determinant(), BigUint::from(8u32));
    }
}
