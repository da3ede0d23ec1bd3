//! Grassmann algebras, even supermatrices and the Berezin determinant.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multilinear::SuperDim;
use crate::scalar::{FieldScalar, Scalar};
use crate::super_poly::Parity;

/// An element of the Grassmann algebra `K[θ_1..θ_g]`. Monomials are bitmasks
/// (bit `j` ↔ `θ_{j+1}`), so `g ≤ 32`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrassmannElement<C: Scalar> {
    gens: usize,
    terms: BTreeMap<u32, C>,
}

/// Sign of `θ_S · θ_T` when sorted: one transposition for each pair `j ∈ T`,
/// `i ∈ S` with `i > j`.
fn product_sign(s: u32, t: u32) -> bool {
    let mut swaps = 0;
    let mut rest = t;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (s >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    swaps % 2 == 1
}

impl<C: Scalar> GrassmannElement<C> {
    pub fn zero(gens: usize) -> Self {
        assert!(gens <= 32, "at most 32 Grassmann generators");
        GrassmannElement {
            gens,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(gens: usize, c: C) -> Self {
        Self::monomial(gens, 0, c)
    }

    pub fn one(gens: usize) -> Self {
        Self::scalar(gens, C::one())
    }

    /// `c · θ_S` for the subset `S` encoded as a bitmask.
    pub fn monomial(gens: usize, mask: u32, c: C) -> Self {
        let mut e = Self::zero(gens);
        assert!(gens == 32 || mask >> gens == 0, "theta index out of range");
        e.add_term(mask, c);
        e
    }

    /// `c · θ_{i_1} ⋯ θ_{i_k}` with one-based indices in any order.
    pub fn from_thetas(gens: usize, thetas: &[usize], c: C) -> Result<Self> {
        let mut acc = Self::scalar(gens, c);
        for &j in thetas {
            if j == 0 || j > gens {
                return Err(Error::InvalidInput(format!("theta index {j} outside 1..={gens}")));
            }
            acc = acc.mul(&Self::monomial(gens, 1 << (j - 1), C::one()));
        }
        Ok(acc)
    }

    fn add_term(&mut self, mask: u32, c: C) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(mask).or_insert_with(C::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &C)> {
        self.terms.iter().map(|(&m, c)| (m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn body(&self) -> C {
        self.terms.get(&0).cloned().unwrap_or_else(C::zero)
    }

    /// The parity if the element is homogeneous (zero counts as both; reported even).
    pub fn parity(&self) -> Option<Parity> {
        let mut parities = self.terms.keys().map(|m| Parity::of_count(m.count_ones() as u64));
        let first = parities.next().unwrap_or(Parity::Even);
        parities.all(|p| p == first).then_some(first)
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.count_ones() % 2 == 0)
    }

    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(|m| m.count_ones() % 2 == 1)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.gens, other.gens, "mismatched Grassmann algebras");
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-C::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut out = Self::zero(self.gens);
        for (&m, c) in &self.terms {
            out.add_term(m, c.clone() * k.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.gens, other.gens, "mismatched Grassmann algebras");
        let mut out = Self::zero(self.gens);
        for (&s, a) in &self.terms {
            for (&t, b) in &other.terms {
                if s & t != 0 {
                    continue;
                }
                let c = a.clone() * b.clone();
                out.add_term(s | t, if product_sign(s, t) { -c } else { c });
            }
        }
        out
    }

    /// Parses the text form `c*t1*t2 + ...` (same conventions as polynomials).
    pub fn parse(gens: usize, s: &str) -> Result<Self> {
        let mut acc = Self::zero(gens);
        for term in s.replace(" - ", " + -").split('+') {
            let mut coeff = C::one();
            let mut thetas = Vec::new();
            for factor in term.trim().split('*') {
                let factor = factor.trim();
                let (neg, body) = match factor.strip_prefix('-') {
                    Some(r) => (true, r),
                    None => (false, factor),
                };
                if neg {
                    coeff = -coeff;
                }
                if let Some(idx) = body.strip_prefix('t') {
                    thetas.push(idx.parse::<usize>().map_err(|_| Error::Parse(format!("bad factor `{factor}`")))?);
                } else {
                    coeff = coeff * C::parse_scalar(body).ok_or_else(|| Error::Parse(format!("bad factor `{factor}`")))?;
                }
            }
            acc = acc.add(&Self::from_thetas(gens, &thetas, coeff)?);
        }
        Ok(acc)
    }
}

impl<C: FieldScalar> GrassmannElement<C> {
    /// Inverse of an element with invertible body `b`: writing `u = b + ν`
    /// with `ν` nilpotent, `u⁻¹ = b⁻¹ Σ_k (−ν/b)^k`, a finite sum.
    pub fn invert_unit(&self) -> Result<Self> {
        let body = self.body();
        let inv_body = body.inverse().ok_or(Error::ZeroBody)?;
        let mut nil = self.clone();
        nil.terms.remove(&0);
        let step = nil.scale(&-inv_body.clone());
        let mut power = Self::one(self.gens);
        let mut sum = Self::one(self.gens);
        loop {
            power = power.mul(&step);
            if power.is_zero() {
                break;
            }
            sum = sum.add(&power);
        }
        Ok(sum.scale(&inv_body))
    }
}

impl<C: Scalar> fmt::Display for GrassmannElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut ordered: Vec<(&u32, &C)> = self.terms.iter().collect();
        ordered.sort_by_key(|(m, _)| (m.count_ones(), std::cmp::Reverse(m.reverse_bits())));
        for (k, (&mask, c)) in ordered.into_iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let thetas: Vec<String> = (0..32).filter(|j| mask >> j & 1 == 1).map(|j| format!("t{}", j + 1)).collect();
            let mono = thetas.join("*");
            if mask == 0 {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{mono}")?;
            } else if c.is_minus_one() {
                write!(f, "-{mono}")?;
            } else {
                write!(f, "{c}*{mono}")?;
            }
        }
        Ok(())
    }
}

type Matrix<C> = Vec<Vec<GrassmannElement<C>>>;

/// `cols` is explicit because `b` has no rows to read it from when the inner dimension is zero.
fn mat_mul<C: Scalar>(a: &Matrix<C>, b: &Matrix<C>, cols: usize, gens: usize) -> Matrix<C> {
    let inner = b.len();
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(GrassmannElement::zero(gens), |acc, k| acc.add(&row[k].mul(&b[k][j]))))
                .collect()
        })
        .collect()
}

fn mat_sub<C: Scalar>(a: &Matrix<C>, b: &Matrix<C>) -> Matrix<C> {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.sub(y)).collect()).collect()
}

fn minor<C: Scalar>(m: &Matrix<C>, row: usize, col: usize) -> Matrix<C> {
    m.iter()
        .enumerate()
        .filter(|&(i, _)| i != row)
        .map(|(_, r)| r.iter().enumerate().filter(|&(j, _)| j != col).map(|(_, v)| v.clone()).collect())
        .collect()
}

fn det_unchecked<C: Scalar>(m: &Matrix<C>, gens: usize) -> GrassmannElement<C> {
    match m.len() {
        0 => GrassmannElement::one(gens),
        1 => m[0][0].clone(),
        n => (0..n).fold(GrassmannElement::zero(gens), |acc, j| {
            let term = m[0][j].mul(&det_unchecked(&minor(m, 0, j), gens));
            if j % 2 == 0 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            }
        }),
    }
}

/// Determinant of a square matrix of even (hence mutually commuting) elements.
pub fn det_even<C: Scalar>(m: &[Vec<GrassmannElement<C>>], gens: usize) -> Result<GrassmannElement<C>> {
    for (i, row) in m.iter().enumerate() {
        if row.len() != m.len() {
            return Err(Error::InvalidInput("determinant of a non-square matrix".into()));
        }
        if let Some(j) = row.iter().position(|e| !e.is_even()) {
            return Err(Error::ParityViolation { row: i, col: j });
        }
    }
    Ok(det_unchecked(&m.to_vec(), gens))
}

/// Inverse of an even matrix as adjugate times the inverse determinant.
fn inverse_even<C: FieldScalar>(m: &Matrix<C>, gens: usize) -> Result<Matrix<C>> {
    let inv_det = det_even(m, gens)?.invert_unit().map_err(|_| Error::NotInvertible)?;
    let n = m.len();
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let cof = det_unchecked(&minor(m, j, i), gens).mul(&inv_det);
                    if (i + j) % 2 == 0 {
                        cof
                    } else {
                        cof.neg()
                    }
                })
                .collect()
        })
        .collect())
}

/// An even supermatrix `(X Y; Z T)` of block sizes `p|q`: `X`, `T` have even
/// entries and `Y`, `Z` odd ones.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperMatrix<C: Scalar> {
    p: usize,
    q: usize,
    gens: usize,
    entries: Matrix<C>,
}

impl<C: Scalar> SuperMatrix<C> {
    pub fn new(p: usize, q: usize, gens: usize, entries: Matrix<C>) -> Result<Self> {
        let size = p + q;
        if entries.len() != size || entries.iter().any(|r| r.len() != size) {
            return Err(Error::InvalidInput(format!("expected a {size}x{size} matrix")));
        }
        for (i, row) in entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if e.gens() != gens {
                    return Err(Error::MismatchedGenerators);
                }
                let diagonal_block = (i < p) == (j < p);
                let ok = if diagonal_block { e.is_even() } else { e.is_odd() };
                if !ok {
                    return Err(Error::ParityViolation { row: i, col: j });
                }
            }
        }
        Ok(SuperMatrix { p, q, gens, entries })
    }

    pub fn identity(p: usize, q: usize, gens: usize) -> Self {
        let n = p + q;
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { GrassmannElement::one(gens) } else { GrassmannElement::zero(gens) })
                    .collect()
            })
            .collect();
        SuperMatrix { p, q, gens, entries }
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.p, self.q, self.gens)
    }

    pub fn entry(&self, i: usize, j: usize) -> &GrassmannElement<C> {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<GrassmannElement<C>>] {
        &self.entries
    }

    fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix<C> {
        rows.map(|i| cols.clone().map(|j| self.entries[i][j].clone()).collect()).collect()
    }

    /// The four blocks `(X, Y, Z, T)`.
    pub fn blocks(&self) -> (Matrix<C>, Matrix<C>, Matrix<C>, Matrix<C>) {
        let (p, n) = (self.p, self.p + self.q);
        (self.block(0..p, 0..p), self.block(0..p, p..n), self.block(p..n, 0..p), self.block(p..n, p..n))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::InvalidInput("supermatrix shapes differ".into()));
        }
        Self::new(self.p, self.q, self.gens, mat_mul(&self.entries, &other.entries, self.p + self.q, self.gens))
    }

    /// A unit iff the bodies of `X` and `T` have nonzero determinant.
    pub fn is_invertible(&self) -> bool {
        let (x, _, _, t) = self.blocks();
        let body_det = |m: &Matrix<C>| {
            let bodies: Matrix<C> =
                m.iter().map(|r| r.iter().map(|e| GrassmannElement::scalar(self.gens, e.body())).collect()).collect();
            !det_unchecked(&bodies, self.gens).body().is_zero()
        };
        body_det(&x) && body_det(&t)
    }
}

impl<C: FieldScalar> SuperMatrix<C> {
    /// `Ber = det(X − Y T⁻¹ Z)·det(T)⁻¹ = det(X)·det(T − Z X⁻¹ Y)⁻¹`. Both forms
    /// are evaluated and must agree.
    pub fn ber(&self) -> Result<GrassmannElement<C>> {
        if !self.is_invertible() {
            return Err(Error::NotInvertible);
        }
        let g = self.gens;
        let (x, y, z, t) = self.blocks();
        let t_inv = inverse_even(&t, g)?;
        let x_inv = inverse_even(&x, g)?;
        let schur_x = mat_sub(&x, &mat_mul(&mat_mul(&y, &t_inv, self.q, g), &z, self.p, g));
        let first = det_even(&schur_x, g)?.mul(&det_even(&t, g)?.invert_unit()?);
        let schur_t = mat_sub(&t, &mat_mul(&mat_mul(&z, &x_inv, self.p, g), &y, self.q, g));
        let second = det_even(&x, g)?.mul(&det_even(&schur_t, g)?.invert_unit()?);
        if first != second {
            return Err(Error::BerezinianMismatch(first.to_string(), second.to_string()));
        }
        Ok(first)
    }
}

/// Rank and cohomological degree of the Berezinian module of `A^{p|q}`: it is
/// free of rank one, concentrated in degree `p`, with parity `q mod 2`.
pub fn berezinian_module_rank(p: usize, q: usize) -> (SuperDim, i64) {
    (SuperDim::unit(Parity::of_count(q as u64)), p as i64)
}

fn random_element<R: Rng>(rng: &mut R, gens: usize, parity: Parity, density: f64) -> GrassmannElement<BigRational> {
    let mut e = GrassmannElement::zero(gens);
    for mask in 0u32..(1u32 << gens) {
        if Parity::of_count(mask.count_ones() as u64) != parity || !rng.gen_bool(density) {
            continue;
        }
        let num: i64 = rng.gen_range(-3..=3);
        let den: i64 = rng.gen_range(1..=3);
        e.add_term(mask, BigRational::new(BigInt::from(num), BigInt::from(den)));
    }
    e
}

/// A random invertible even supermatrix with small rational coefficients.
pub fn random_invertible<R: Rng>(rng: &mut R, p: usize, q: usize, gens: usize) -> SuperMatrix<BigRational> {
    let n = p + q;
    loop {
        let entries: Matrix<BigRational> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let parity = if (i < p) == (j < p) { Parity::Even } else { Parity::Odd };
                        random_element(rng, gens, parity, 0.6)
                    })
                    .collect()
            })
            .collect();
        let m = SuperMatrix::new(p, q, gens, entries).expect("parities chosen by block");
        if m.is_invertible() {
            return m;
        }
    }
}

/// One monomial `coeff · θ_{thetas}` of a supermatrix entry (one-based indices).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub coeff: String,
    pub thetas: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntriesRecord {
    Nested(Vec<Vec<Vec<TermRecord>>>),
    Flat(Vec<Vec<TermRecord>>),
}

/// Structured supermatrix input: entries row-major, either flat or as rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperMatrixRecord {
    pub p: usize,
    pub q: usize,
    pub grassmann_gens: usize,
    pub entries: EntriesRecord,
}

impl SuperMatrixRecord {
    pub fn from_matrix<C: Scalar>(m: &SuperMatrix<C>) -> Self {
        let flat = m
            .entries
            .iter()
            .flatten()
            .map(|e| {
                let mut terms: Vec<(u32, &C)> = e.terms().collect();
                terms.sort_by_key(|(mask, _)| (mask.count_ones(), std::cmp::Reverse(mask.reverse_bits())));
                terms
                    .into_iter()
                    .map(|(mask, c)| TermRecord {
                        coeff: c.to_string(),
                        thetas: (0..32).filter(|j| mask >> j & 1 == 1).map(|j| j as usize + 1).collect(),
                    })
                    .collect()
            })
            .collect();
        SuperMatrixRecord {
            p: m.p,
            q: m.q,
            grassmann_gens: m.gens,
            entries: EntriesRecord::Flat(flat),
        }
    }

    pub fn to_matrix<C: Scalar>(&self) -> Result<SuperMatrix<C>> {
        let size = self.p + self.q;
        if self.grassmann_gens > 32 {
            return Err(Error::InvalidInput("at most 32 Grassmann generators".into()));
        }
        let flat: Vec<&Vec<TermRecord>> = match &self.entries {
            EntriesRecord::Nested(rows) if rows.len() == size && rows.iter().all(|r| r.len() == size) => {
                rows.iter().flatten().collect()
            }
            // An all-zero flat list is indistinguishable from nested rows.
            EntriesRecord::Nested(rows) if rows.len() == size * size && rows.iter().all(Vec::is_empty) => {
                vec![&EMPTY_TERMS; size * size]
            }
            EntriesRecord::Flat(entries) if entries.len() == size * size => entries.iter().collect(),
            _ => return Err(Error::InvalidInput(format!("expected {} entries", size * size))),
        };
        let mut elements = Vec::with_capacity(flat.len());
        for terms in flat {
            let mut e = GrassmannElement::zero(self.grassmann_gens);
            for t in terms {
                let c = C::parse_scalar(&t.coeff).ok_or_else(|| Error::Parse(format!("bad coefficient `{}`", t.coeff)))?;
                e = e.add(&GrassmannElement::from_thetas(self.grassmann_gens, &t.thetas, c)?);
            }
            elements.push(e);
        }
        let rows = elements.chunks(size.max(1)).take(size).map(<[_]>::to_vec).collect();
        SuperMatrix::new(self.p, self.q, self.grassmann_gens, rows)
    }
}

static EMPTY_TERMS: Vec<TermRecord> = Vec::new();
