//! Cayley-Dickson algebras of dimension 1, 2, 4, 8 and 16 over the reals.
//!
//! A level-`n+1` element is the pair `(a, b)` of level-`n` elements, read as
//! `a + b·u` with `u` the new imaginary unit. Products use
//!
//! ```text
//! (a, b)(c, d) = (a·c − conj(d)·b,  d·a + b·conj(c))
//! ```
//!
//! With this doubling rule `i_j · i_{2^n} = i_{2^n + j}` for `j < 2^n`, so the
//! coefficient slots of `a + b·u` are simply `a` followed by `b`. Basis
//! products always land on `±i_(a XOR b)`; [`basis_product`] exposes the sign.

use std::fmt;
use std::sync::OnceLock;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_LEVEL: u8 = 4;
pub const MAX_DIM: usize = 1 << MAX_LEVEL;

/// Products with norm below this are treated as zero.
pub const ZERO_TOL: f64 = 1e-12;

/// An element of the level-`level` Cayley-Dickson algebra (dimension `2^level`).
///
/// `coeffs()[k]` is the coefficient of basis unit `i_k`, with `i_0 = 1`.
#[derive(Clone, Copy, PartialEq)]
pub struct CdElement {
    level: u8,
    coeffs: [f64; MAX_DIM],
}

impl CdElement {
    pub fn new(level: u8, coeffs: &[f64]) -> Result<Self> {
        check_level(level)?;
        let dim = 1usize << level;
        if coeffs.len() != dim {
            return Err(Error::CoefficientCount {
                level,
                expected: dim,
                got: coeffs.len(),
            });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("algebra element"));
        }
        let mut buf = [0.0; MAX_DIM];
        buf[..dim].copy_from_slice(coeffs);
        Ok(Self { level, coeffs: buf })
    }

    pub fn zero(level: u8) -> Self {
        assert!(level <= MAX_LEVEL, "level {level} out of range");
        Self {
            level,
            coeffs: [0.0; MAX_DIM],
        }
    }

    pub fn one(level: u8) -> Self {
        Self::basis(level, 0)
    }

    /// The basis unit `i_k`.
    pub fn basis(level: u8, k: usize) -> Self {
        let mut x = Self::zero(level);
        assert!(k < x.dim(), "basis index {k} out of range for level {level}");
        x.coeffs[k] = 1.0;
        x
    }

    pub fn real(level: u8, value: f64) -> Self {
        Self::one(level).scale(value)
    }

    /// A complex number as a level-1 element.
    pub fn from_complex(z: Complex64) -> Self {
        let mut x = Self::zero(1);
        x.coeffs[0] = z.re;
        x.coeffs[1] = z.im;
        x
    }

    /// Builds `lo + hi·u` one level above the inputs.
    pub fn from_pair(lo: &CdElement, hi: &CdElement) -> Result<Self> {
        if lo.level != hi.level {
            return Err(Error::LevelMismatch {
                left: lo.level,
                right: hi.level,
            });
        }
        let level = lo.level + 1;
        check_level(level)?;
        let h = lo.dim();
        let mut x = Self::zero(level);
        x.coeffs[..h].copy_from_slice(lo.coeffs());
        x.coeffs[h..2 * h].copy_from_slice(hi.coeffs());
        Ok(x)
    }

    /// Inverse of [`CdElement::from_pair`]. `None` at level 0.
    pub fn halves(&self) -> Option<(CdElement, CdElement)> {
        if self.level == 0 {
            return None;
        }
        let h = self.dim() / 2;
        let mut lo = Self::zero(self.level - 1);
        let mut hi = Self::zero(self.level - 1);
        lo.coeffs[..h].copy_from_slice(&self.coeffs[..h]);
        hi.coeffs[..h].copy_from_slice(&self.coeffs[h..2 * h]);
        Some((lo, hi))
    }

    /// Embeds into a higher level by zero padding.
    pub fn lift(&self, level: u8) -> Self {
        assert!(level >= self.level && level <= MAX_LEVEL);
        Self {
            level,
            coeffs: self.coeffs,
        }
    }

    #[inline]
    pub fn level(&self) -> u8 {
        self.level
    }

    #[inline]
    pub fn dim(&self) -> usize {
        1 << self.level
    }

    #[inline]
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs[..self.dim()]
    }

    #[inline]
    pub fn re(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        out.coeffs.iter_mut().for_each(|c| *c *= s);
        out
    }

    /// Negates every imaginary coefficient.
    pub fn conj(&self) -> Self {
        let mut out = *self;
        out.coeffs[1..].iter_mut().for_each(|c| *c = -*c);
        out
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs().iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `conj(x) / |x|²`.
    ///
    /// At level 4 `x·x⁻¹ = 1` still holds, but `(y·x)·x⁻¹` need not equal `y`.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.norm_sq();
        if n == 0.0 {
            return Err(Error::Singular);
        }
        Ok(self.conj().scale(1.0 / n))
    }

    pub fn try_mul(&self, rhs: &CdElement) -> Result<Self> {
        if self.level != rhs.level {
            return Err(Error::LevelMismatch {
                left: self.level,
                right: rhs.level,
            });
        }
        let mut out = Self::zero(self.level);
        let d = self.dim();
        let signs = sign_table();
        for (a, &x) in self.coeffs[..d].iter().enumerate() {
            let row = &signs[a];
            for (b, &y) in rhs.coeffs[..d].iter().enumerate() {
                out.coeffs[a ^ b] += row[b] * x * y;
            }
        }
        Ok(out)
    }

    /// Largest absolute coefficient difference.
    pub fn max_abs_diff(&self, other: &CdElement) -> f64 {
        assert_eq!(self.level, other.level);
        self.coeffs()
            .iter()
            .zip(other.coeffs())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn check_level(level: u8) -> Result<()> {
    if level > MAX_LEVEL {
        Err(Error::InvalidLevel(level))
    } else {
        Ok(())
    }
}

fn conj_slice(x: &[f64], out: &mut [f64]) {
    out[0] = x[0];
    for (o, v) in out[1..].iter_mut().zip(&x[1..]) {
        *o = -v;
    }
}

/// Recursive doubling product on raw coefficient slices of equal power-of-two length.
/// Signs of `e_a e_b = ±e_(a^b)` at the top level, built once from the recursive product.
/// Lower levels sit in the leading block, so the same table serves them.
fn sign_table() -> &'static [[f64; MAX_DIM]; MAX_DIM] {
    static TABLE: OnceLock<[[f64; MAX_DIM]; MAX_DIM]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [[0.0; MAX_DIM]; MAX_DIM];
        let mut x = [0.0; MAX_DIM];
        let mut y = [0.0; MAX_DIM];
        let mut out = [0.0; MAX_DIM];
        for a in 0..MAX_DIM {
            for b in 0..MAX_DIM {
                x.fill(0.0);
                y.fill(0.0);
                x[a] = 1.0;
                y[b] = 1.0;
                mul_into(&x, &y, &mut out);
                table[a][b] = out[a ^ b];
            }
        }
        table
    })
}

fn mul_into(x: &[f64], y: &[f64], out: &mut [f64]) {
    let n = x.len();
    if n == 1 {
        out[0] = x[0] * y[0];
        return;
    }
    let h = n / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);

    let mut conj_c = [0.0; MAX_DIM / 2];
    let mut conj_d = [0.0; MAX_DIM / 2];
    conj_slice(c, &mut conj_c[..h]);
    conj_slice(d, &mut conj_d[..h]);

    let mut t1 = [0.0; MAX_DIM / 2];
    let mut t2 = [0.0; MAX_DIM / 2];
    let (lo, hi) = out.split_at_mut(h);

    // lo = a·c − conj(d)·b
    mul_into(a, c, &mut t1[..h]);
    mul_into(&conj_d[..h], b, &mut t2[..h]);
    for k in 0..h {
        lo[k] = t1[k] - t2[k];
    }
    // hi = d·a + b·conj(c)
    mul_into(d, a, &mut t1[..h]);
    mul_into(b, &conj_c[..h], &mut t2[..h]);
    for k in 0..h {
        hi[k] = t1[k] + t2[k];
    }
}

impl fmt::Debug for CdElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CdElement")
            .field("level", &self.level)
            .field("coeffs", &self.coeffs())
            .finish()
    }
}

impl fmt::Display for CdElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs().iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let sign = match (first, c < 0.0) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let m = c.abs();
            match (k, m == 1.0) {
                (0, _) => write!(f, "{sign}{m}")?,
                (_, true) => write!(f, "{sign}i{k}")?,
                (_, false) => write!(f, "{sign}{m}·i{k}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Mul for CdElement {
    type Output = CdElement;

    /// Panics on level mismatch; use [`CdElement::try_mul`] to get an error instead.
    fn mul(self, rhs: CdElement) -> CdElement {
        self.try_mul(&rhs).expect("Cayley-Dickson product of mismatched levels")
    }
}

impl Add for CdElement {
    type Output = CdElement;

    fn add(self, rhs: CdElement) -> CdElement {
        assert_eq!(self.level, rhs.level, "level mismatch in addition");
        let mut out = self;
        for (o, r) in out.coeffs.iter_mut().zip(rhs.coeffs) {
            *o += r;
        }
        out
    }
}

impl Sub for CdElement {
    type Output = CdElement;

    fn sub(self, rhs: CdElement) -> CdElement {
        self + (-rhs)
    }
}

impl Neg for CdElement {
    type Output = CdElement;

    fn neg(self) -> CdElement {
        self.scale(-1.0)
    }
}

/// One entry of the basis multiplication table: `i_a · i_b = sign · i_index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisProduct {
    pub a: usize,
    pub b: usize,
    pub sign: i8,
    pub index: usize,
}

/// `i_a · i_b` at the given level, computed through the doubling product.
pub fn basis_product(level: u8, a: usize, b: usize) -> BasisProduct {
    let p = CdElement::basis(level, a) * CdElement::basis(level, b);
    let index = a ^ b;
    let v = p.coeffs()[index];
    debug_assert!(v.abs() == 1.0);
    BasisProduct {
        a,
        b,
        sign: if v > 0.0 { 1 } else { -1 },
        index,
    }
}

/// Full `2^level × 2^level` basis table in row-major order.
pub fn basis_product_table(level: u8) -> Result<Vec<BasisProduct>> {
    check_level(level)?;
    let d = 1usize << level;
    Ok((0..d)
        .flat_map(|a| (0..d).map(move |b| basis_product(level, a, b)))
        .collect())
}

/// Exhaustive search for zero products `(e_a ± e_b)(e_c ± e_d)` with `a < b`, `c < d`.
///
/// Returns the pairs `(x, y)` with `|x·y| < ZERO_TOL`; empty below level 4.
pub fn find_basis_zero_divisors(level: u8) -> Result<Vec<(CdElement, CdElement)>> {
    check_level(level)?;
    let d = 1usize << level;
    let mut candidates = Vec::new();
    for a in 0..d {
        for b in a + 1..d {
            for sign in [1.0, -1.0] {
                candidates.push(CdElement::basis(level, a) + CdElement::basis(level, b).scale(sign));
            }
        }
    }
    let mut found = Vec::new();
    for x in &candidates {
        for y in &candidates {
            if (*x * *y).norm() < ZERO_TOL {
                found.push((*x, *y));
            }
        }
    }
    Ok(found)
}
