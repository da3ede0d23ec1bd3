//! Finite windows of the weight-`n` Koszul, De Rham and Berezinian complexes of
//! a free supermodule `L = A^{a|b}`, and of the specialized Koszul complex
//! `Kos(M, ω)`. All differentials are stored as exact integer matrices whose
//! rows index the target basis and columns the source basis.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_linalg::ExactMatrix;
use crate::multilinear::{basis_lambda_sym, lambda_monomials, rank_lambda_sym, sym_monomials, SuperDim};
use crate::super_poly::{Generator, GeneratorSet, Parity, SuperMonomial, SuperPolynomial};

type Poly = SuperPolynomial<BigInt>;

pub const RECORD_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplexKind {
    Koszul,
    DeRham,
    Berezinian,
    SpecializedKoszul,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Term {
    labels: Vec<String>,
    parities: Vec<Parity>,
}

/// A finite window `[lo, hi]` of a cochain complex of free modules. Every
/// differential raises the position by one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComplex {
    pub kind: ComplexKind,
    pub rank: (usize, usize),
    pub weight: Option<i64>,
    /// `-1` when the underlying operator lowers exterior degree (Koszul), `+1` otherwise.
    pub direction: i8,
    lo: i64,
    hi: i64,
    terms: BTreeMap<i64, Term>,
    diffs: BTreeMap<i64, ExactMatrix>,
    /// Module ranks just outside the window, at `lo - 1` and `hi + 1`.
    outside: (u64, u64),
}

impl GradedComplex {
    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn positions(&self) -> impl Iterator<Item = i64> + '_ {
        self.terms.keys().copied()
    }

    pub fn labels(&self, position: i64) -> Option<&[String]> {
        self.terms.get(&position).map(|t| t.labels.as_slice())
    }

    pub fn parities(&self, position: i64) -> Option<&Vec<Parity>> {
        self.terms.get(&position).map(|t| &t.parities)
    }

    pub fn dim(&self, position: i64) -> SuperDim {
        self.parities(position)
            .map_or(SuperDim::ZERO, |p| SuperDim::count(p.iter().copied()))
    }

    /// The differential leaving `position` (towards `position + 1`).
    pub fn differential_from(&self, position: i64) -> Option<&ExactMatrix> {
        self.diffs.get(&position)
    }

    /// Errors unless `position` and both neighbours are materialized or known to vanish.
    pub fn check_window(&self, position: i64) -> Result<()> {
        let violation = Error::WindowViolation {
            position,
            lo: self.lo,
            hi: self.hi,
        };
        if position < self.lo || position > self.hi {
            return Err(violation);
        }
        if (position == self.lo && self.outside.0 > 0) || (position == self.hi && self.outside.1 > 0) {
            return Err(violation);
        }
        Ok(())
    }

    /// Positions at which homology is computable.
    pub fn interior_positions(&self) -> Vec<i64> {
        self.positions().filter(|&p| self.check_window(p).is_ok()).collect()
    }

    pub fn to_record(&self) -> ComplexRecord {
        ComplexRecord {
            version: RECORD_VERSION,
            kind: self.kind,
            rank: [self.rank.0, self.rank.1],
            weight: self.weight,
            direction: self.direction,
            window: [self.lo, self.hi],
            outside_ranks: [self.outside.0, self.outside.1],
            positions: self
                .terms
                .iter()
                .map(|(&position, t)| PositionRecord {
                    position,
                    basis: t.labels.clone(),
                    parities: t.parities.iter().map(|p| p.bit()).collect(),
                })
                .collect(),
            differentials: self
                .diffs
                .iter()
                .map(|(&source, m)| DifferentialRecord {
                    source,
                    target: source + 1,
                    rows: m.rows(),
                    cols: m.cols(),
                    entries: m.triplets().map(|(i, j, v)| (i, j, IntValue::from_bigint(v))).collect(),
                })
                .collect(),
        }
    }

    pub fn from_record(rec: &ComplexRecord) -> Result<GradedComplex> {
        if rec.version != RECORD_VERSION {
            return Err(Error::InvalidInput(format!("unsupported record version {}", rec.version)));
        }
        let mut terms = BTreeMap::new();
        for p in &rec.positions {
            if p.basis.len() != p.parities.len() {
                return Err(Error::InvalidInput(format!("position {}: basis/parity length mismatch", p.position)));
            }
            let parities = p
                .parities
                .iter()
                .map(|&b| match b {
                    0 => Ok(Parity::Even),
                    1 => Ok(Parity::Odd),
                    _ => Err(Error::InvalidInput(format!("parity {b} is not 0 or 1"))),
                })
                .collect::<Result<Vec<_>>>()?;
            terms.insert(
                p.position,
                Term {
                    labels: p.basis.clone(),
                    parities,
                },
            );
        }
        let mut diffs = BTreeMap::new();
        for d in &rec.differentials {
            if d.target != d.source + 1 {
                return Err(Error::InvalidInput("differentials must raise the position by one".into()));
            }
            let mut m = ExactMatrix::zeros(d.rows, d.cols);
            for (i, j, v) in &d.entries {
                if *i >= d.rows || *j >= d.cols {
                    return Err(Error::InvalidInput(format!("entry ({i}, {j}) outside a {}x{} matrix", d.rows, d.cols)));
                }
                m.set(*i, *j, v.to_bigint()?);
            }
            diffs.insert(d.source, m);
        }
        Ok(GradedComplex {
            kind: rec.kind,
            rank: (rec.rank[0], rec.rank[1]),
            weight: rec.weight,
            direction: rec.direction,
            lo: rec.window[0],
            hi: rec.window[1],
            terms,
            diffs,
            outside: (rec.outside_ranks[0], rec.outside_ranks[1]),
        })
    }
}

/// Versioned, deterministic serialization of a [`GradedComplex`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexRecord {
    pub version: u32,
    pub kind: ComplexKind,
    pub rank: [usize; 2],
    pub weight: Option<i64>,
    pub direction: i8,
    pub window: [i64; 2],
    pub outside_ranks: [u64; 2],
    pub positions: Vec<PositionRecord>,
    pub differentials: Vec<DifferentialRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionRecord {
    pub position: i64,
    pub basis: Vec<String>,
    pub parities: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialRecord {
    pub source: i64,
    pub target: i64,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, IntValue)>,
}

/// An integer that serializes as a JSON number when it fits in `i64` and as a
/// decimal string otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntValue {
    Small(i64),
    Big(String),
}

impl IntValue {
    pub fn from_bigint(v: &BigInt) -> IntValue {
        v.to_i64().map_or_else(|| IntValue::Big(v.to_string()), IntValue::Small)
    }

    pub fn to_bigint(&self) -> Result<BigInt> {
        match self {
            IntValue::Small(v) => Ok(BigInt::from(*v)),
            IntValue::Big(s) => s
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad integer `{s}`"))),
        }
    }
}

fn monomial_term(monos: &[SuperMonomial]) -> Term {
    Term {
        labels: monos.iter().map(|m| m.to_string()).collect(),
        parities: monos.iter().map(|m| m.parity()).collect(),
    }
}

fn index_of(monos: &[SuperMonomial]) -> HashMap<&SuperMonomial, usize> {
    monos.iter().enumerate().map(|(i, m)| (m, i)).collect()
}

/// Matrix of `op` from the span of `source` to the span of `target`.
fn operator_matrix(source: &[SuperMonomial], target: &[SuperMonomial], op: fn(&Poly) -> Poly) -> ExactMatrix {
    let rows = index_of(target);
    let mut m = ExactMatrix::zeros(target.len(), source.len());
    for (j, s) in source.iter().enumerate() {
        let image = op(&Poly::monomial(s.clone(), BigInt::from(1)));
        for (mono, c) in image.terms() {
            let i = rows[mono];
            m.add_to(i, j, c.clone());
        }
    }
    m
}

fn total(d: SuperDim) -> u64 {
    d.total()
}

/// Shared shape of the weight-`n` Koszul and De Rham complexes: the module
/// `Λ^p L ⊗ S^{n-p} L` sits at position `sign·p`.
fn build_form_complex(a: usize, b: usize, n: u32, cap: u32, kind: ComplexKind) -> GradedComplex {
    let pmax = if b == 0 { n.min(a as u32) } else { n.min(cap) };
    let bases: Vec<Vec<SuperMonomial>> = (0..=pmax).map(|p| basis_lambda_sym(a, b, p, n - p).entries).collect();
    let beyond = total(rank_lambda_sym(a, b, pmax as i64 + 1, n as i64 - pmax as i64 - 1));
    let koszul = kind == ComplexKind::Koszul;
    let pos = |p: u32| if koszul { -(p as i64) } else { p as i64 };
    let mut terms = BTreeMap::new();
    for (p, basis) in bases.iter().enumerate() {
        terms.insert(pos(p as u32), monomial_term(basis));
    }
    let mut diffs = BTreeMap::new();
    for p in 0..pmax as usize {
        if koszul {
            // i_D: Λ^{p+1} ⊗ S^{n-p-1} at -(p+1) → Λ^p ⊗ S^{n-p} at -p.
            diffs.insert(pos(p as u32 + 1), operator_matrix(&bases[p + 1], &bases[p], Poly::apply_i_d));
        } else {
            diffs.insert(pos(p as u32), operator_matrix(&bases[p], &bases[p + 1], Poly::apply_d));
        }
    }
    let (lo, hi, outside) = if koszul {
        (-(pmax as i64), 0, (beyond, 0))
    } else {
        (0, pmax as i64, (0, beyond))
    };
    GradedComplex {
        kind,
        rank: (a, b),
        weight: Some(n as i64),
        direction: if koszul { -1 } else { 1 },
        lo,
        hi,
        terms,
        diffs,
        outside,
    }
}

/// Weight-`n` component of the Koszul complex of `A^{a|b}` with differential
/// `i_D`; position `-p` carries `Λ^p ⊗ S^{n-p}`. Positions below `-cap` are
/// dropped when `b > 0`.
pub fn build_koszul(a: usize, b: usize, n: u32, cap: u32) -> GradedComplex {
    build_form_complex(a, b, n, cap, ComplexKind::Koszul)
}

/// Weight-`n` component of the De Rham complex of `A^{a|b}`; position `p`
/// carries `Λ^p ⊗ S^{n-p}`.
pub fn build_derham(a: usize, b: usize, n: u32, cap: u32) -> GradedComplex {
    build_form_complex(a, b, n, cap, ComplexKind::DeRham)
}

/// The single generator `x_i` or `θ_j` of a weight-one coefficient monomial.
fn single_generator(m: &SuperMonomial) -> Generator {
    if let Some(i) = m.x.iter().position(|&e| e == 1) {
        Generator::X(i)
    } else {
        Generator::Theta(m.theta.iter().position(|&e| e == 1).expect("weight-one coefficient"))
    }
}

/// `i_D(u)` split as `Σ c_k · w_k · v_k` with `w_k` a polynomial generator and
/// `v_k` an exterior monomial.
fn contraction_terms(u: &SuperMonomial) -> Vec<(BigInt, Generator, SuperMonomial)> {
    Poly::monomial(u.clone(), BigInt::from(1))
        .apply_i_d()
        .terms()
        .map(|(m, c)| (c.clone(), single_generator(&m.coefficient_part()), m.lambda_part()))
        .collect()
}

fn berezinian_basis(a: usize, b: usize, n: i64, i: u32) -> Vec<(SuperMonomial, SuperMonomial)> {
    if n + (i as i64) < 0 {
        return Vec::new();
    }
    let sym = sym_monomials(a, b, (n + i as i64) as u32);
    let mut out = Vec::new();
    for v in lambda_monomials(a, b, i) {
        for s in &sym {
            out.push((v.clone(), s.clone()));
        }
    }
    out
}

fn berezinian_label(v: &SuperMonomial, s: &SuperMonomial) -> String {
    if s.is_one() {
        format!("phi[{v}]")
    } else {
        format!("phi[{v}]*{s}")
    }
}

/// Weight-`n` component of the Berezinian complex `Hom_B(Kos(L), B)`.
///
/// Position `i` carries `φ_v ⊗ s` with `v` running over `Λ^i L` and `s` over
/// `S^{n+i} L`. The differential is precomposition with `i_D`: if
/// `i_D(u) = Σ c_k w_k v_k`, then `δ(φ_v ⊗ s)` has `φ_u`-component
/// `Σ_{v_k = v} c_k · (w_k s)`.
pub fn build_berezinian(a: usize, b: usize, n: i64, cap: u32) -> GradedComplex {
    let gens = GeneratorSet::new(a, b);
    let hi = if b == 0 { cap.min(a as u32) } else { cap };
    let bases: Vec<Vec<(SuperMonomial, SuperMonomial)>> = (0..=hi).map(|i| berezinian_basis(a, b, n, i)).collect();
    let mut terms = BTreeMap::new();
    for (i, basis) in bases.iter().enumerate() {
        terms.insert(
            i as i64,
            Term {
                labels: basis.iter().map(|(v, s)| berezinian_label(v, s)).collect(),
                parities: basis.iter().map(|(v, s)| v.parity() + s.parity()).collect(),
            },
        );
    }
    let mut diffs = BTreeMap::new();
    for i in 0..hi as usize {
        let source = &bases[i];
        let target = &bases[i + 1];
        let col_of: HashMap<(&SuperMonomial, &SuperMonomial), usize> =
            source.iter().enumerate().map(|(k, (v, s))| ((v, s), k)).collect();
        let row_of: HashMap<(&SuperMonomial, &SuperMonomial), usize> =
            target.iter().enumerate().map(|(k, (v, s))| ((v, s), k)).collect();
        let mut m = ExactMatrix::zeros(target.len(), source.len());
        let sym = if n + (i as i64) >= 0 {
            sym_monomials(a, b, (n + i as i64) as u32)
        } else {
            Vec::new()
        };
        for u in lambda_monomials(a, b, i as u32 + 1) {
            for (c, w, v) in contraction_terms(&u) {
                let w_poly = Poly::generator(gens, w).expect("generator in range");
                for s in &sym {
                    let prod = w_poly
                        .mul(&Poly::monomial(s.clone(), BigInt::from(1)))
                        .expect("same generator set");
                    for (t, sign) in prod.terms() {
                        let row = row_of[&(&u, t)];
                        let col = col_of[&(&v, s)];
                        m.add_to(row, col, &c * sign);
                    }
                }
            }
        }
        diffs.insert(i as i64, m);
    }
    let above = total(rank_lambda_sym(a, b, hi as i64 + 1, n + hi as i64 + 1));
    GradedComplex {
        kind: ComplexKind::Berezinian,
        rank: (a, b),
        weight: Some(n),
        direction: 1,
        lo: 0,
        hi: hi as i64,
        terms,
        diffs,
        outside: (0, above),
    }
}

/// The Koszul complex `Kos(M, ω)` of `M = A^{a|b}` for a linear form `ω`:
/// position `-p` carries `Λ^p M`, and `dx_i ↦ ω_i`, `dθ_j ↦ ω_{a+j}` under
/// contraction. Supported bases are purely even, so the odd slots of `ω`
/// must be zero.
pub fn specialize_koszul(a: usize, b: usize, omega: &[BigInt], cap: u32) -> Result<GradedComplex> {
    if omega.len() != a + b {
        return Err(Error::OmegaLength {
            expected: a + b,
            got: omega.len(),
        });
    }
    if let Some(j) = omega[a..].iter().position(|w| !w.is_zero()) {
        return Err(Error::OddSpecialization { slot: j + 1 });
    }
    let pmax = if b == 0 { a as u32 } else { cap };
    let bases: Vec<Vec<SuperMonomial>> = (0..=pmax).map(|p| lambda_monomials(a, b, p)).collect();
    let mut terms = BTreeMap::new();
    for (p, basis) in bases.iter().enumerate() {
        terms.insert(-(p as i64), monomial_term(basis));
    }
    let mut diffs = BTreeMap::new();
    for p in 1..=pmax as usize {
        let rows = index_of(&bases[p - 1]);
        let mut m = ExactMatrix::zeros(bases[p - 1].len(), bases[p].len());
        for (j, u) in bases[p].iter().enumerate() {
            for (c, w, v) in contraction_terms(u) {
                if let Generator::X(i) = w {
                    m.add_to(rows[&v], j, c * &omega[i]);
                }
            }
        }
        diffs.insert(-(p as i64), m);
    }
    let below = total(rank_lambda_sym(a, b, pmax as i64 + 1, 0));
    Ok(GradedComplex {
        kind: ComplexKind::SpecializedKoszul,
        rank: (a, b),
        weight: None,
        direction: -1,
        lo: -(pmax as i64),
        hi: 0,
        terms,
        diffs,
        outside: (below, 0),
    })
}
