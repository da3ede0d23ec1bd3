//! Cohomology of `O(r)` and `Ω^p(r)` on projective superspace `P^{m|n}`.
//!
//! Two independent routes are provided: closed formulas built from the
//! super-ranks `λ_p` and `ℓ_{r,·}`, and a direct route that computes ranks of
//! explicit contraction matrices on the polynomial ring, the local-cohomology
//! module `x^{-α-1}θ^S`, and (for `m = 0`) the Laurent model `x_0^e θ^S`.

use std::collections::HashMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complexes::build_koszul;
use crate::error::{Error, Result};
use crate::exact_linalg::{homology, Base, ExactMatrix};
use crate::multilinear::{binomial, lambda_monomials, rank_lambda, SignedDim, SuperDim};
use crate::super_poly::{Generator, Parity, SuperMonomial, SuperPolynomial};

/// Which `ℓ` family: sections (`ℓ_{r,0}`, i = 0) or top cohomology (`ℓ_{r,m}`, i = m).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Which {
    Zero,
    Top,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EllDims {
    pub plus: u64,
    pub minus: u64,
}

impl From<EllDims> for SuperDim {
    fn from(e: EllDims) -> SuperDim {
        SuperDim::new(e.plus, e.minus)
    }
}

/// `ℓ_{r,0}^± = Σ C(m+r−i, m) C(n,i)` or `ℓ_{r,m}^± = Σ C(i−r−1, m) C(n,i)`,
/// with `i` split by parity.
pub fn ell(r: i64, which: Which, m: i64, n: i64) -> EllDims {
    let mut d = [0u64; 2];
    for i in 0..=n {
        let top = match which {
            Which::Zero => m + r - i,
            Which::Top => i - r - 1,
        };
        d[(i % 2) as usize] += (binomial(top, m) * binomial(n, i)) as u64;
    }
    EllDims { plus: d[0], minus: d[1] }
}

/// `δ(p,r) = Σ_j (−1)^j λ_{p−j} ⊗ ℓ_{r−p+j}` (super tensor product).
pub fn delta(p: i64, r: i64, which: Which, m: i64, n: i64) -> SignedDim {
    (0..=p).fold(SignedDim::default(), |acc, j| {
        let lam = SignedDim::from(rank_lambda(p - j, m, n));
        let l = SignedDim::from(SuperDim::from(ell(r - p + j, which, m, n)));
        let sign = if j % 2 == 0 { 1 } else { -1 };
        acc + (lam * l).scale(sign)
    })
}

/// Super Euler characteristic `Σ_i (−1)^i H^i(Ω^p(r))`, from the exact sequence
/// `0 → Ω^p(r) → Λ^p L ⊗ O(r−p) → Λ^{p−1} L ⊗ O(r−p+1) → ⋯ → O(r) → 0`.
pub fn euler_characteristic(m: i64, n: i64, p: i64, r: i64) -> SignedDim {
    let chi_o = |s: i64| {
        let zero = SignedDim::from(SuperDim::from(ell(s, Which::Zero, m, n)));
        if m == 0 {
            zero
        } else {
            let top = SignedDim::from(SuperDim::from(ell(s, Which::Top, m, n)));
            zero + top.scale(if m % 2 == 0 { 1 } else { -1 })
        }
    };
    (0..=p).fold(SignedDim::default(), |acc, j| {
        let lam = SignedDim::from(rank_lambda(p - j, m, n));
        let sign = if j % 2 == 0 { 1 } else { -1 };
        acc + (lam * chi_o(r - p + j)).scale(sign)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Formula,
    Direct,
    Both,
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Method> {
        match s {
            "formula" => Ok(Method::Formula),
            "direct" => Ok(Method::Direct),
            "both" => Ok(Method::Both),
            _ => Err(Error::Parse(format!("unknown method `{s}`"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Formula => "formula",
            Method::Direct => "direct",
            Method::Both => "both",
        })
    }
}

/// `H^i(P^{m|n}, Ω^p(r))` for `i = 0..=m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub r: i64,
    pub method: Method,
    pub rows: Vec<SuperDim>,
}

pub const CSV_HEADER: &str = "m,n,p,r,i,even,odd,method";

impl CohomologyTable {
    fn zeros(m: usize, n: usize, p: usize, r: i64, method: Method) -> Self {
        CohomologyTable {
            m,
            n,
            p,
            r,
            method,
            rows: vec![SuperDim::ZERO; m + 1],
        }
    }

    pub fn csv_rows(&self) -> Vec<String> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, d)| format!("{},{},{},{},{},{},{},{}", self.m, self.n, self.p, self.r, i, d.even, d.odd, self.method))
            .collect()
    }
}

impl fmt::Display for CohomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P^{}|{} Omega^{}({}) [{}]:", self.m, self.n, self.p, self.r, self.method)?;
        for (i, d) in self.rows.iter().enumerate() {
            write!(f, " H^{i}={d}")?;
        }
        Ok(())
    }
}

/// `H^i(P^{m|n}, O(r))` from the closed formulas.
pub fn cohomology_line_bundle(m: usize, n: usize, r: i64) -> CohomologyTable {
    let mut t = CohomologyTable::zeros(m, n, 0, r, Method::Formula);
    let (mi, ni) = (m as i64, n as i64);
    t.rows[0] = ell(r, Which::Zero, mi, ni).into();
    if m > 0 {
        t.rows[m] = ell(r, Which::Top, mi, ni).into();
    }
    t
}

fn nonnegative(d: SignedDim, what: &str) -> Result<SuperDim> {
    d.to_super_dim()
        .ok_or_else(|| Error::InvalidInput(format!("{what} evaluated to a negative dimension {d}")))
}

/// `H^i(P^{m|n}, Ω^p(r))` from closed formulas. For `r ≠ 0` the rows are
/// `δ(p,r)_0` and `δ(p,r)_m`. For `r = 0` the rows below `m` are `[p = i]` and
/// the top row is recovered from the Euler characteristic. For `m = 0` the
/// only row is the Euler characteristic itself.
pub fn cohomology_forms_formula(m: usize, n: usize, p: usize, r: i64) -> Result<CohomologyTable> {
    let mut t = CohomologyTable::zeros(m, n, p, r, Method::Formula);
    let (mi, ni, pi) = (m as i64, n as i64, p as i64);
    if m == 0 {
        t.rows[0] = nonnegative(euler_characteristic(0, ni, pi, r), "Euler characteristic")?;
        return Ok(t);
    }
    if r != 0 {
        t.rows[0] = nonnegative(delta(pi, r, Which::Zero, mi, ni), "delta_0")?;
        t.rows[m] = nonnegative(delta(pi, r, Which::Top, mi, ni), "delta_m")?;
        return Ok(t);
    }
    let mut rest = euler_characteristic(mi, ni, pi, 0);
    for i in 0..m {
        if p == i {
            t.rows[i] = SuperDim::new(1, 0);
            rest = rest + SignedDim::new(if i % 2 == 0 { -1 } else { 1 }, 0);
        }
    }
    let sign = if m.is_multiple_of(2) { 1 } else { -1 };
    t.rows[m] = nonnegative(rest.scale(sign), "top cohomology")?;
    Ok(t)
}

/// Coefficient modules on which `Λ^• L` is tensored for the direct route.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoeffModel {
    /// `A[x_0..x_m] ⊗ A[θ]`.
    Polynomial,
    /// `(x_0⋯x_m)^{-1} A[x_0^{-1}..x_m^{-1}] ⊗ A[θ]`; multiplying by `x_i`
    /// kills a monomial whose `x_i` exponent would reach zero.
    LocalCohomology,
    /// `A[x_0, x_0^{-1}] ⊗ A[θ]`, used when `m = 0`.
    Laurent,
}

/// `x^a θ^S` with signed exponents; `theta` is a bitmask (bit `j` ↔ `θ_{j+1}`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoeffMonomial {
    pub x: Vec<i64>,
    pub theta: u32,
}

impl CoeffMonomial {
    pub fn degree(&self) -> i64 {
        self.x.iter().sum::<i64>() + self.theta.count_ones() as i64
    }

    pub fn parity(&self) -> Parity {
        Parity::of_count(self.theta.count_ones() as u64)
    }
}

impl fmt::Display for CoeffMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &e) in self.x.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{i}")),
                _ => parts.push(format!("x{i}^{e}")),
            }
        }
        for j in 0..32 {
            if self.theta >> j & 1 == 1 {
                parts.push(format!("t{}", j + 1));
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// Nonnegative integer vectors of length `len` summing to `total`.
fn nonnegative_vectors(len: usize, total: i64) -> Vec<Vec<i64>> {
    if total < 0 {
        return Vec::new();
    }
    if len == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in nonnegative_vectors(len - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl CoeffModel {
    /// Basis of the degree-`d` part, for `m + 1` even and `n` odd generators.
    pub fn monomials(self, m: usize, n: usize, d: i64) -> Vec<CoeffMonomial> {
        let mut out = Vec::new();
        for theta in 0u32..(1u32 << n) {
            let s = theta.count_ones() as i64;
            match self {
                CoeffModel::Polynomial => {
                    for x in nonnegative_vectors(m + 1, d - s) {
                        out.push(CoeffMonomial { x, theta });
                    }
                }
                CoeffModel::LocalCohomology => {
                    for alpha in nonnegative_vectors(m + 1, s - d - (m as i64 + 1)) {
                        let x = alpha.iter().map(|a| -a - 1).collect();
                        out.push(CoeffMonomial { x, theta });
                    }
                }
                CoeffModel::Laurent => {
                    assert_eq!(m, 0, "the Laurent model has a single even variable");
                    out.push(CoeffMonomial { x: vec![d - s], theta });
                }
            }
        }
        out.sort();
        out
    }

    /// `c · w` for a generator `w = x_i` or `θ_j`; `None` when the product
    /// vanishes. The flag is `true` for a minus sign.
    pub fn mul_right(self, c: &CoeffMonomial, w: Generator) -> Option<(bool, CoeffMonomial)> {
        let mut out = c.clone();
        match w {
            Generator::X(i) => {
                out.x[i] += 1;
                if self == CoeffModel::LocalCohomology && out.x[i] == 0 {
                    return None;
                }
                Some((false, out))
            }
            Generator::Theta(j) => {
                if c.theta >> j & 1 == 1 {
                    return None;
                }
                out.theta |= 1 << j;
                Some(((c.theta >> (j + 1)).count_ones() % 2 == 1, out))
            }
            _ => panic!("coefficient generators only"),
        }
    }
}

/// Basis of `Λ^p L ⊗ M_{r−p}` for a coefficient model `M`, `L = A^{m+1|n}`:
/// pairs of an exterior monomial and a coefficient monomial, of total weight `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalCohBasis {
    pub model: CoeffModel,
    pub m: usize,
    pub n: usize,
    pub p: u32,
    pub weight: i64,
    pub entries: Vec<(SuperMonomial, CoeffMonomial)>,
}

impl LocalCohBasis {
    pub fn new(model: CoeffModel, m: usize, n: usize, p: u32, weight: i64) -> Self {
        let coeffs = model.monomials(m, n, weight - p as i64);
        let mut entries = Vec::new();
        for u in lambda_monomials(m + 1, n, p) {
            for c in &coeffs {
                entries.push((u.clone(), c.clone()));
            }
        }
        LocalCohBasis {
            model,
            m,
            n,
            p,
            weight,
            entries,
        }
    }

    pub fn parities(&self) -> Vec<Parity> {
        self.entries.iter().map(|(u, c)| u.parity() + c.parity()).collect()
    }

    pub fn dim(&self) -> SuperDim {
        SuperDim::count(self.parities())
    }

    pub fn labels(&self) -> Vec<String> {
        self.entries
            .iter()
            .map(|(u, c)| match (u.is_one(), c.x.iter().all(|&e| e == 0) && c.theta == 0) {
                (true, _) => c.to_string(),
                (false, true) => u.to_string(),
                (false, false) => format!("{c}*{u}"),
            })
            .collect()
    }
}

/// Matrix of `i_D` from `Λ^p ⊗ M_{r−p}` to `Λ^{p−1} ⊗ M_{r−p+1}`:
/// `i_D(c·u) = c·i_D(u) = Σ_k a_k (c·w_k)·v_k` when `i_D(u) = Σ_k a_k w_k v_k`.
pub fn model_contraction(source: &LocalCohBasis, target: &LocalCohBasis) -> ExactMatrix {
    assert_eq!(source.p, target.p + 1);
    let rows: HashMap<(&SuperMonomial, &CoeffMonomial), usize> =
        target.entries.iter().enumerate().map(|(i, (u, c))| ((u, c), i)).collect();
    let mut mat = ExactMatrix::zeros(target.entries.len(), source.entries.len());
    let mut cache: HashMap<&SuperMonomial, Vec<(BigInt, Generator, SuperMonomial)>> = HashMap::new();
    for (col, (u, c)) in source.entries.iter().enumerate() {
        let terms = cache.entry(u).or_insert_with(|| {
            SuperPolynomial::<BigInt>::monomial(u.clone(), BigInt::from(1))
                .apply_i_d()
                .terms()
                .map(|(mono, a)| {
                    let coeff = mono.coefficient_part();
                    let w = match coeff.x.iter().position(|&e| e == 1) {
                        Some(i) => Generator::X(i),
                        None => Generator::Theta(coeff.theta.iter().position(|&e| e == 1).expect("one generator")),
                    };
                    (a.clone(), w, mono.lambda_part())
                })
                .collect()
        });
        for (a, w, v) in terms.iter() {
            if let Some((negative, cw)) = source.model.mul_right(c, *w) {
                let row = rows[&(v, &cw)];
                mat.add_to(row, col, if negative { -a.clone() } else { a.clone() });
            }
        }
    }
    mat
}

fn indices(parities: &[Parity], want: Parity) -> Vec<usize> {
    parities.iter().enumerate().filter(|(_, &p)| p == want).map(|(i, _)| i).collect()
}

/// Parity-split kernel dimension of `mat` (columns carry `src` parities).
fn kernel_dim(mat: &ExactMatrix, src: &[Parity], tgt: &[Parity], base: Base) -> SuperDim {
    let k = |parity| {
        let cols = indices(src, parity);
        (cols.len() - base.rank(&mat.submatrix(&indices(tgt, parity), &cols))) as u64
    };
    SuperDim::new(k(Parity::Even), k(Parity::Odd))
}

/// Parity-split image dimension of `mat`.
fn image_dim(mat: &ExactMatrix, src: &[Parity], tgt: &[Parity], base: Base) -> SuperDim {
    let k = |parity| base.rank(&mat.submatrix(&indices(tgt, parity), &indices(src, parity))) as u64;
    SuperDim::new(k(Parity::Even), k(Parity::Odd))
}

/// Kernel of `i_D` at exterior degree `p`, weight `r`, on a coefficient model.
pub fn model_cycles(model: CoeffModel, m: usize, n: usize, p: u32, r: i64, base: Base) -> SuperDim {
    let src = LocalCohBasis::new(model, m, n, p, r);
    if p == 0 {
        return src.dim();
    }
    let tgt = LocalCohBasis::new(model, m, n, p - 1, r);
    kernel_dim(&model_contraction(&src, &tgt), &src.parities(), &tgt.parities(), base)
}

/// Image of `i_D` landing in exterior degree `p`, weight `r`, on a coefficient model.
pub fn model_boundaries(model: CoeffModel, m: usize, n: usize, p: u32, r: i64, base: Base) -> SuperDim {
    let src = LocalCohBasis::new(model, m, n, p + 1, r);
    let tgt = LocalCohBasis::new(model, m, n, p, r);
    image_dim(&model_contraction(&src, &tgt), &src.parities(), &tgt.parities(), base)
}

/// Homology of the weight-`r` Koszul complex of `A^{m+1|n}` at position `position ≤ 0`.
fn koszul_homology(m: usize, n: usize, r: i64, position: i64, base: Base) -> Result<SuperDim> {
    // Exterior powers of a purely even module vanish above its rank.
    if r < 0 || position > 0 || -position > r || (n == 0 && -position > m as i64 + 1) {
        return Ok(SuperDim::ZERO);
    }
    let kos = build_koszul(m + 1, n, r as u32, (1 - position) as u32);
    Ok(homology(&kos, base, position)?.free())
}

/// `H^i(P^{m|n}, Ω^p(r))` from explicit matrix ranks over a field.
///
/// * `m = 0`: the kernel of `i_D` on `Λ^p ⊗ x_0^{r−p} A[θ/x_0]`.
/// * `i = 0`: cycles of the Koszul complex at `−p`.
/// * `0 < i < m`: Koszul homology at `i − p`.
/// * `i = m`: Koszul homology at `m − p` plus the boundaries at `−p` of the
///   local-cohomology complex (ranks add along the exact sequence joining them).
pub fn cohomology_forms_direct(m: usize, n: usize, p: usize, r: i64, base: Base) -> Result<CohomologyTable> {
    if base == Base::Z {
        return Err(Error::UnsupportedBase("the direct method needs a field (Q or Fp:<p>)".into()));
    }
    let mut t = CohomologyTable::zeros(m, n, p, r, Method::Direct);
    let pu = p as u32;
    if m == 0 {
        t.rows[0] = model_cycles(CoeffModel::Laurent, 0, n, pu, r, base);
        return Ok(t);
    }
    t.rows[0] = if r >= p as i64 {
        let kos = build_koszul(m + 1, n, r as u32, pu + 1);
        let here = kos.parities(-(p as i64)).cloned().unwrap_or_default();
        match kos.differential_from(-(p as i64)) {
            Some(d) => kernel_dim(d, &here, kos.parities(1 - p as i64).expect("target materialized"), base),
            None => SuperDim::count(here),
        }
    } else {
        SuperDim::ZERO
    };
    for i in 1..m {
        t.rows[i] = koszul_homology(m, n, r, i as i64 - p as i64, base)?;
    }
    t.rows[m] = koszul_homology(m, n, r, m as i64 - p as i64, base)?
        + model_boundaries(CoeffModel::LocalCohomology, m, n, pu, r, base);
    Ok(t)
}

fn compare(formula: &CohomologyTable, direct: &CohomologyTable) -> Result<CohomologyTable> {
    for (i, (f, d)) in formula.rows.iter().zip(&direct.rows).enumerate() {
        if f != d {
            return Err(Error::MethodDisagreement {
                m: formula.m,
                n: formula.n,
                p: formula.p,
                r: formula.r,
                i,
                formula: f.to_string(),
                direct: d.to_string(),
            });
        }
    }
    Ok(CohomologyTable {
        method: Method::Both,
        ..formula.clone()
    })
}

/// Tables for every `(p, r)` in the given ranges, ordered by `p` then `r`.
/// With [`Method::Both`] (base ℚ only) any disagreement is an error.
pub fn bott_table(
    m: usize,
    n: usize,
    p_range: RangeInclusive<usize>,
    r_range: RangeInclusive<i64>,
    method: Method,
    base: Base,
) -> Result<Vec<CohomologyTable>> {
    if method == Method::Both && base != Base::Q {
        return Err(Error::UnsupportedBase(format!("method both compares over Q, got {base}")));
    }
    let cells: Vec<(usize, i64)> = p_range.flat_map(|p| r_range.clone().map(move |r| (p, r))).collect();
    cells
        .into_par_iter()
        .map(|(p, r)| match method {
            Method::Formula => cohomology_forms_formula(m, n, p, r),
            Method::Direct => cohomology_forms_direct(m, n, p, r, base),
            Method::Both => compare(&cohomology_forms_formula(m, n, p, r)?, &cohomology_forms_direct(m, n, p, r, base)?),
        })
        .collect()
}
