//! Graded pieces `Λ^p L ⊗ S^q L` of a free supermodule `L = A^{a|b}`: ordered
//! monomial bases and closed-form super-ranks.

use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::super_poly::{GeneratorSet, Parity, SuperMonomial};

/// A super-dimension `(even | odd)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SuperDim {
    pub even: u64,
    pub odd: u64,
}

impl SuperDim {
    pub const ZERO: SuperDim = SuperDim { even: 0, odd: 0 };

    pub fn new(even: u64, odd: u64) -> Self {
        SuperDim { even, odd }
    }

    /// `(1|0)` for even parity, `(0|1)` for odd.
    pub fn unit(parity: Parity) -> Self {
        match parity {
            Parity::Even => SuperDim::new(1, 0),
            Parity::Odd => SuperDim::new(0, 1),
        }
    }

    pub fn total(&self) -> u64 {
        self.even + self.odd
    }

    pub fn is_zero(&self) -> bool {
        self.total() == 0
    }

    pub fn get(&self, parity: Parity) -> u64 {
        match parity {
            Parity::Even => self.even,
            Parity::Odd => self.odd,
        }
    }

    /// Applies the parity shift `Π`.
    pub fn flip(&self) -> Self {
        SuperDim::new(self.odd, self.even)
    }

    pub fn tensor(&self, other: &SuperDim) -> SuperDim {
        SuperDim::new(
            self.even * other.even + self.odd * other.odd,
            self.even * other.odd + self.odd * other.even,
        )
    }

    pub fn count<I: IntoIterator<Item = Parity>>(parities: I) -> SuperDim {
        parities.into_iter().fold(SuperDim::ZERO, |d, p| d + SuperDim::unit(p))
    }
}

impl Add for SuperDim {
    type Output = SuperDim;
    fn add(self, rhs: SuperDim) -> SuperDim {
        SuperDim::new(self.even + rhs.even, self.odd + rhs.odd)
    }
}

impl fmt::Display for SuperDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|{})", self.even, self.odd)
    }
}

/// A super-dimension with signed entries, for alternating sums.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedDim {
    pub even: i64,
    pub odd: i64,
}

impl SignedDim {
    pub fn new(even: i64, odd: i64) -> Self {
        SignedDim { even, odd }
    }

    pub fn to_super_dim(self) -> Option<SuperDim> {
        Some(SuperDim::new(u64::try_from(self.even).ok()?, u64::try_from(self.odd).ok()?))
    }

    pub fn scale(self, k: i64) -> SignedDim {
        SignedDim::new(self.even * k, self.odd * k)
    }
}

impl From<SuperDim> for SignedDim {
    fn from(d: SuperDim) -> Self {
        SignedDim::new(d.even as i64, d.odd as i64)
    }
}

impl Add for SignedDim {
    type Output = SignedDim;
    fn add(self, rhs: SignedDim) -> SignedDim {
        SignedDim::new(self.even + rhs.even, self.odd + rhs.odd)
    }
}

/// Super tensor product `(a|b)⊗(c|d) = (ac+bd | ad+bc)`.
impl Mul for SignedDim {
    type Output = SignedDim;
    fn mul(self, rhs: SignedDim) -> SignedDim {
        SignedDim::new(
            self.even * rhs.even + self.odd * rhs.odd,
            self.even * rhs.odd + self.odd * rhs.even,
        )
    }
}

impl fmt::Display for SignedDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|{})", self.even, self.odd)
    }
}

/// Binomial coefficient with the conventions `C(a,0) = 1` for every `a`,
/// `C(a,k) = 0` when `a < k ≠ 0`, and `C(a,k) = 0` for `k < 0`.
pub fn binomial(a: i64, k: i64) -> i64 {
    if k == 0 {
        return 1;
    }
    if k < 0 || a < k {
        return 0;
    }
    let k = k.min(a - k);
    let mut acc: i128 = 1;
    for j in 0..k {
        acc = acc * (a - j) as i128 / (j + 1) as i128;
    }
    i64::try_from(acc).expect("binomial coefficient overflows i64")
}

/// The monomials spanning `Λ^p L ⊗ S^q L`, each stored as a canonical
/// [`SuperMonomial`] (coefficient part in `x, θ`; exterior part in `dx, dθ`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeBasis {
    pub gens: GeneratorSet,
    pub entries: Vec<SuperMonomial>,
}

impl FreeBasis {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> SuperDim {
        SuperDim::count(self.entries.iter().map(|m| m.parity()))
    }
}

/// All `(u32)` vectors of length `slots` summing to `total`, with entries
/// capped at `cap` (use `u32::MAX` for no cap), in descending lexicographic order.
fn compositions(slots: usize, total: u32, cap: u32) -> Vec<Vec<u32>> {
    fn rec(slots: usize, total: u32, cap: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 0 {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for e in (0..=total.min(cap)).rev() {
            prefix.push(e);
            rec(slots - 1, total - e, cap, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(slots, total, cap, &mut Vec::with_capacity(slots), &mut out);
    out
}

/// Monomials of the coefficient algebra `S^q L`: `x^α θ^S` with `|α| + |S| = q`.
pub fn sym_monomials(a: usize, b: usize, q: u32) -> Vec<SuperMonomial> {
    let gens = GeneratorSet::new(a, b);
    let mut out = Vec::new();
    for s in 0..=q.min(b as u32) {
        for theta in compositions(b, s, 1) {
            for x in compositions(a, q - s, u32::MAX) {
                let mut m = SuperMonomial::one(gens);
                m.x = x;
                m.theta = theta.clone();
                out.push(m);
            }
        }
    }
    out.sort();
    out
}

/// Monomials of `Λ^p L`: `dx^E dθ^β` with `|E| + |β| = p`.
pub fn lambda_monomials(a: usize, b: usize, p: u32) -> Vec<SuperMonomial> {
    let gens = GeneratorSet::new(a, b);
    let mut out = Vec::new();
    for e in 0..=p.min(a as u32) {
        for dx in compositions(a, e, 1) {
            for dtheta in compositions(b, p - e, u32::MAX) {
                let mut m = SuperMonomial::one(gens);
                m.dx = dx.clone();
                m.dtheta = dtheta;
                out.push(m);
            }
        }
    }
    out.sort();
    out
}

/// Ordered basis of `Λ^p L ⊗ S^q L` for `L = A^{a|b}`, sorted on `(E, β, α, S)`.
pub fn basis_lambda_sym(a: usize, b: usize, p: u32, q: u32) -> FreeBasis {
    let gens = GeneratorSet::new(a, b);
    let lambda = lambda_monomials(a, b, p);
    let sym = sym_monomials(a, b, q);
    let mut entries = Vec::with_capacity(lambda.len() * sym.len());
    for u in &lambda {
        for s in &sym {
            let mut m = s.clone();
            m.dx = u.dx.clone();
            m.dtheta = u.dtheta.clone();
            entries.push(m);
        }
    }
    entries.sort();
    FreeBasis { gens, entries }
}

/// `(λ_p^+ | λ_p^-)`: the super-rank of `Λ^p` of `A^{m+1|n}`. `m = -1` is the
/// purely odd case.
pub fn rank_lambda(p: i64, m: i64, n: i64) -> SuperDim {
    if p < 0 {
        return SuperDim::ZERO;
    }
    let mut d = [0u64; 2];
    for i in 0..=p {
        let term = binomial(m + 1, p - i) * binomial(n + i - 1, i);
        d[(i % 2) as usize] += term as u64;
    }
    SuperDim::new(d[0], d[1])
}

/// Super-rank of `S^k` of `A^{a|b}`.
pub fn rank_sym(k: i64, a: i64, b: i64) -> SuperDim {
    if k < 0 {
        return SuperDim::ZERO;
    }
    let mut d = [0u64; 2];
    for i in 0..=b.min(k) {
        let term = binomial(a + (k - i) - 1, k - i) * binomial(b, i);
        d[(i % 2) as usize] += term as u64;
    }
    SuperDim::new(d[0], d[1])
}

/// Super-rank of `Λ^p L ⊗ S^q L` for `L = A^{a|b}`; zero if either degree is negative.
pub fn rank_lambda_sym(a: usize, b: usize, p: i64, q: i64) -> SuperDim {
    rank_lambda(p, a as i64 - 1, b as i64).tensor(&rank_sym(q, a as i64, b as i64))
}
