//! Exact linear algebra over ℤ, ℚ and prime fields: sparse integer matrices,
//! Smith normal form, ranks, and parity-split homology of a [`GradedComplex`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::complexes::GradedComplex;
use crate::error::{Error, Result};
use crate::multilinear::SuperDim;
use crate::scalar::is_prime;
use crate::super_poly::Parity;

/// A sparse matrix with arbitrary-precision integer entries. Zero entries are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, BigInt)>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, j, v) in triplets {
            m.add_to(i, j, v);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: BigInt) {
        let cur = self.get(i, j);
        self.set(i, j, cur + v);
    }

    /// Nonzero entries as `(row, col, value)` in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (i, j, v) in self.triplets() {
            d[i][j] = v.clone();
        }
        d
    }

    pub fn transpose(&self) -> Self {
        ExactMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(i, j), v)| ((j, i), v.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::from_triplets(self.rows, self.cols, self.triplets().map(|(i, j, v)| (i, j, v * k)))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let mut out = self.clone();
        for (i, j, v) in other.triplets() {
            out.add_to(i, j, v.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut by_row: Vec<Vec<(usize, &BigInt)>> = vec![Vec::new(); other.rows];
        for (k, j, v) in other.triplets() {
            by_row[k].push((j, v));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for (i, k, a) in self.triplets() {
            for &(j, b) in &by_row[k] {
                out.add_to(i, j, a * b);
            }
        }
        out
    }

    /// The submatrix on the given (ordered) rows and columns.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let rmap: HashMap<usize, usize> = rows.iter().enumerate().map(|(k, &r)| (r, k)).collect();
        let cmap: HashMap<usize, usize> = cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let mut out = Self::zeros(rows.len(), cols.len());
        for (i, j, v) in self.triplets() {
            if let (Some(&a), Some(&b)) = (rmap.get(&i), cmap.get(&j)) {
                out.set(a, b, v.clone());
            }
        }
        out
    }

    fn sparse_rows<T: EuclidRing>(&self) -> Option<Vec<BTreeMap<usize, T>>> {
        let mut rows = vec![BTreeMap::new(); self.rows];
        for (i, j, v) in self.triplets() {
            rows[i].insert(j, T::from_big(v)?);
        }
        Some(rows)
    }
}

/// Integer-like ring for elimination. Arithmetic returns `None` on overflow so
/// that a machine-word attempt can fall back to arbitrary precision.
trait EuclidRing: Clone + PartialEq + fmt::Debug {
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn is_nil(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn abs_cmp_key(&self) -> BigInt;
    /// `a - q*b`.
    fn sub_mul(a: &Self, q: &Self, b: &Self) -> Option<Self>;
    /// Euclidean quotient with the remainder taken in `[0, |b|)`.
    fn div_floor(a: &Self, b: &Self) -> Option<Self>;
}

impl EuclidRing for i64 {
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i64()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn abs_cmp_key(&self) -> BigInt {
        BigInt::from(*self).abs()
    }
    fn sub_mul(a: &Self, q: &Self, b: &Self) -> Option<Self> {
        a.checked_sub(q.checked_mul(*b)?)
    }
    fn div_floor(a: &Self, b: &Self) -> Option<Self> {
        a.checked_div_euclid(*b)
    }
}

impl EuclidRing for BigInt {
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn abs_cmp_key(&self) -> BigInt {
        self.abs()
    }
    fn sub_mul(a: &Self, q: &Self, b: &Self) -> Option<Self> {
        Some(a - q * b)
    }
    fn div_floor(a: &Self, b: &Self) -> Option<Self> {
        let (q, r) = a.div_mod_floor(b);
        // div_mod_floor's remainder follows the sign of b; shift to [0, |b|).
        Some(if r.is_negative() { q + BigInt::one() } else { q })
    }
}

/// Result of Smith normal form: the nonzero invariant factors `d_1 | d_2 | …`
/// (all positive) and the rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
}

impl SmithForm {
    /// Invariant factors strictly greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

/// Sparse elimination to a diagonal. Unit pivots of low fill-in cost are used
/// whenever available; otherwise the pivot of least absolute value drives a
/// Euclidean reduction of its row and column.
fn diagonalize<T: EuclidRing>(mut rows: Vec<BTreeMap<usize, T>>) -> Option<Vec<BigInt>> {
    rows.retain(|r| !r.is_empty());
    let mut diag = Vec::new();
    loop {
        rows.retain(|r| !r.is_empty());
        if rows.is_empty() {
            return Some(diag);
        }
        let mut col_rows: HashMap<usize, Vec<usize>> = HashMap::new();
        for (ri, row) in rows.iter().enumerate() {
            for &c in row.keys() {
                col_rows.entry(c).or_default().push(ri);
            }
        }
        // Pick a unit pivot with minimal Markowitz cost.
        let mut best_unit: Option<(usize, usize, usize)> = None;
        let mut best_small: Option<(BigInt, usize, usize)> = None;
        for (ri, row) in rows.iter().enumerate() {
            for (&c, v) in row {
                if v.is_unit() {
                    let cost = (row.len() - 1) * (col_rows[&c].len() - 1);
                    if best_unit.is_none_or(|(b, _, _)| cost < b) {
                        best_unit = Some((cost, ri, c));
                    }
                } else if best_unit.is_none() {
                    let key = v.abs_cmp_key();
                    if best_small.as_ref().is_none_or(|(b, _, _)| key < *b) {
                        best_small = Some((key, ri, c));
                    }
                }
            }
            if matches!(best_unit, Some((0, _, _))) {
                break;
            }
        }
        if let Some((_, pr, pc)) = best_unit {
            let pivot_row = rows[pr].clone();
            let pv = pivot_row[&pc].clone();
            for &ri in &col_rows[&pc] {
                if ri == pr {
                    continue;
                }
                // q = v / pv exactly, since pv = ±1.
                let v = rows[ri][&pc].clone();
                let q = T::div_floor(&v, &pv)?;
                row_sub_mul(&mut rows[ri], &q, &pivot_row)?;
            }
            diag.push(BigInt::one());
            rows.swap_remove(pr);
            continue;
        }
        let (_, pr, pc) = best_small.expect("nonempty matrix has a pivot");
        let pivot_row = rows[pr].clone();
        let pv = pivot_row[&pc].clone();
        let mut column_clean = true;
        for &ri in &col_rows[&pc] {
            if ri == pr {
                continue;
            }
            let v = rows[ri][&pc].clone();
            let q = T::div_floor(&v, &pv)?;
            row_sub_mul(&mut rows[ri], &q, &pivot_row)?;
            if rows[ri].contains_key(&pc) {
                column_clean = false;
            }
        }
        if !column_clean {
            continue;
        }
        // Column `pc` now lives only in the pivot row, so column operations
        // against it touch nothing else.
        let mut row_clean = true;
        let row = &mut rows[pr];
        let others: Vec<usize> = row.keys().copied().filter(|&c| c != pc).collect();
        for c in others {
            let v = row[&c].clone();
            let q = T::div_floor(&v, &pv)?;
            let r = T::sub_mul(&v, &q, &pv)?;
            if r.is_nil() {
                row.remove(&c);
            } else {
                row.insert(c, r);
                row_clean = false;
            }
        }
        if row_clean {
            diag.push(pv.to_big().abs());
            rows.swap_remove(pr);
        }
    }
}

fn row_sub_mul<T: EuclidRing>(target: &mut BTreeMap<usize, T>, q: &T, pivot: &BTreeMap<usize, T>) -> Option<()> {
    if q.is_nil() {
        return Some(());
    }
    for (&c, pv) in pivot {
        let cur = target.get(&c).cloned();
        let next = match cur {
            Some(a) => T::sub_mul(&a, q, pv)?,
            None => T::sub_mul(&T::from_big(&BigInt::zero())?, q, pv)?,
        };
        if next.is_nil() {
            target.remove(&c);
        } else {
            target.insert(c, next);
        }
    }
    Some(())
}

/// Turns a diagonal into a divisibility chain by repeated `(gcd, lcm)` swaps.
fn divisibility_chain(mut d: Vec<BigInt>) -> Vec<BigInt> {
    d.sort();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            if !(&d[j] % &d[i]).is_zero() {
                let g = d[i].gcd(&d[j]);
                let l = d[i].lcm(&d[j]);
                d[i] = g;
                d[j] = l;
            }
        }
    }
    d
}

pub fn smith_normal_form(m: &ExactMatrix) -> SmithForm {
    let diag = m
        .sparse_rows::<i64>()
        .and_then(diagonalize::<i64>)
        .unwrap_or_else(|| {
            let rows = m.sparse_rows::<BigInt>().expect("BigInt conversion is total");
            diagonalize::<BigInt>(rows).expect("BigInt arithmetic does not overflow")
        });
    let invariant_factors = divisibility_chain(diag);
    SmithForm {
        rank: invariant_factors.len(),
        invariant_factors,
    }
}

/// Rank over `𝔽_p`. The caller guarantees `p` is prime.
pub fn rank_mod_p(m: &ExactMatrix, p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut rows: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); m.rows()];
    for (i, j, v) in m.triplets() {
        let r = v.mod_floor(&pb).to_u64().expect("residue fits");
        if r != 0 {
            rows[i].insert(j, r);
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let inv = |a: u64| {
        let (mut base, mut e, mut acc) = (a, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, base);
            }
            base = mulmod(base, base);
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    rows.retain(|r| !r.is_empty());
    while !rows.is_empty() {
        let (pr, _) = rows.iter().enumerate().min_by_key(|(_, r)| r.len()).expect("nonempty");
        let pivot_row = rows.swap_remove(pr);
        let (&pc, &pv) = pivot_row.iter().next().expect("nonempty row");
        let pinv = inv(pv);
        for row in rows.iter_mut() {
            if let Some(&v) = row.get(&pc) {
                let q = mulmod(v, pinv);
                for (&c, &w) in &pivot_row {
                    let cur = row.get(&c).copied().unwrap_or(0);
                    let next = (cur + p - mulmod(q, w)) % p;
                    if next == 0 {
                        row.remove(&c);
                    } else {
                        row.insert(c, next);
                    }
                }
            }
        }
        rows.retain(|r| !r.is_empty());
        rank += 1;
    }
    rank
}

/// Coefficient ring for homology: ℤ, ℚ or a prime field `𝔽_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Base {
    Z,
    Q,
    Fp(u64),
}

impl Base {
    pub fn fp(p: u64) -> Result<Base> {
        if is_prime(p) {
            Ok(Base::Fp(p))
        } else {
            Err(Error::CompositeModulus(p))
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Base::Z)
    }

    /// Rank of an integer matrix after base change.
    pub fn rank(&self, m: &ExactMatrix) -> usize {
        match self {
            Base::Z | Base::Q => smith_normal_form(m).rank,
            Base::Fp(p) => rank_mod_p(m, *p),
        }
    }
}

impl FromStr for Base {
    type Err = Error;
    fn from_str(s: &str) -> Result<Base> {
        match s.trim() {
            "Z" => Ok(Base::Z),
            "Q" => Ok(Base::Q),
            other => {
                let p = other
                    .strip_prefix("Fp:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown base `{other}` (expected Z, Q or Fp:<prime>)")))?;
                Base::fp(p)
            }
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::Z => f.write_str("Z"),
            Base::Q => f.write_str("Q"),
            Base::Fp(p) => write!(f, "Fp:{p}"),
        }
    }
}

/// `cols − rank` after base change; over ℤ the kernel is free of this rank.
pub fn kernel_rank(m: &ExactMatrix, base: Base) -> Result<usize> {
    if let Base::Fp(p) = base {
        if !is_prime(p) {
            return Err(Error::CompositeModulus(p));
        }
    }
    Ok(m.cols() - base.rank(m))
}

/// Homology at one position, split by parity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologySummary {
    pub position: i64,
    pub even_rank: u64,
    pub odd_rank: u64,
    #[serde(with = "bigint_list")]
    pub torsion_even: Vec<BigInt>,
    #[serde(with = "bigint_list")]
    pub torsion_odd: Vec<BigInt>,
}

impl HomologySummary {
    pub fn free(&self) -> SuperDim {
        SuperDim::new(self.even_rank, self.odd_rank)
    }

    pub fn is_zero(&self) -> bool {
        self.free().is_zero() && self.torsion_even.is_empty() && self.torsion_odd.is_empty()
    }
}

impl fmt::Display for HomologySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[BigInt]| v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ");
        write!(
            f,
            "H at {}: free {} torsion_even [{}] torsion_odd [{}]",
            self.position,
            self.free(),
            list(&self.torsion_even),
            list(&self.torsion_odd)
        )
    }
}

/// Torsion factors serialize as JSON numbers when they fit in `u64`, else as
/// decimal strings.
mod bigint_list {
    use std::str::FromStr;

    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Entry {
        Small(u64),
        Big(String),
    }

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let entries: Vec<Entry> = v
            .iter()
            .map(|d| d.to_u64().map_or_else(|| Entry::Big(d.to_string()), Entry::Small))
            .collect();
        entries.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Entry>::deserialize(d)?
            .into_iter()
            .map(|e| match e {
                Entry::Small(v) => Ok(BigInt::from(v)),
                Entry::Big(s) => BigInt::from_str(&s).map_err(D::Error::custom),
            })
            .collect()
    }
}

/// Indices of a basis having the given parity.
fn parity_indices(parities: &[Parity], want: Parity) -> Vec<usize> {
    parities.iter().enumerate().filter(|(_, &p)| p == want).map(|(i, _)| i).collect()
}

/// Homology of `c` at `position` over `base`.
///
/// Free ranks come from block ranks of the adjacent differentials. Over ℤ the
/// torsion of `ker(out)/im(in)` equals that of `coker(in)`, because
/// `ker(out)` is saturated; it is read off the Smith form of the incoming block.
pub fn homology(c: &GradedComplex, base: Base, position: i64) -> Result<HomologySummary> {
    if let Base::Fp(p) = base {
        if !is_prime(p) {
            return Err(Error::CompositeModulus(p));
        }
    }
    c.check_window(position)?;
    let empty = Vec::new();
    let here = c.parities(position).unwrap_or(&empty);
    let below = c.parities(position - 1).unwrap_or(&empty);
    let above = c.parities(position + 1).unwrap_or(&empty);
    let outgoing = c.differential_from(position);
    let incoming = c.differential_from(position - 1);

    let mut free = [0u64; 2];
    let mut torsion: [Vec<BigInt>; 2] = [Vec::new(), Vec::new()];
    for parity in [Parity::Even, Parity::Odd] {
        let idx = parity_indices(here, parity);
        let rank_out = outgoing.map_or(0, |d| base.rank(&d.submatrix(&parity_indices(above, parity), &idx)));
        let (rank_in, tors) = match incoming {
            Some(d) => {
                let block = d.submatrix(&idx, &parity_indices(below, parity));
                match base {
                    Base::Z => {
                        let snf = smith_normal_form(&block);
                        (snf.rank, snf.torsion())
                    }
                    _ => (base.rank(&block), Vec::new()),
                }
            }
            None => (0, Vec::new()),
        };
        free[parity.bit() as usize] = (idx.len() - rank_out - rank_in) as u64;
        torsion[parity.bit() as usize] = tors;
    }
    let [torsion_even, torsion_odd] = torsion;
    Ok(HomologySummary {
        position,
        even_rank: free[0],
        odd_rank: free[1],
        torsion_even,
        torsion_odd,
    })
}
