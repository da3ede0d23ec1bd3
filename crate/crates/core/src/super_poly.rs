//! The bigraded supercommutative algebra of differential forms over a
//! polynomial superalgebra `A[x_0..x_m | θ_1..θ_n]`.
//!
//! Every generator has ℤ-degree (weight) 1. The four generator families carry
//! an exterior degree and a parity:
//!
//! | generator | exterior degree | parity |
//! |-----------|-----------------|--------|
//! | `x_i`     | 0               | even   |
//! | `θ_j`     | 0               | odd    |
//! | `dx_i`    | 1               | even   |
//! | `dθ_j`    | 1               | odd    |
//!
//! Two homogeneous factors of exterior degrees `p, q` and parities `s, t`
//! commute up to `(-1)^(pq + st)`. Consequently `θ_j` and `dx_i` square to zero
//! while `x_i` and `dθ_j` have free powers. Monomials are stored in the
//! canonical order `x^α θ^S dx^E dθ^β` with ascending indices.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_count(k: u64) -> Self {
        if k.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn bit(self) -> u8 {
        self as u8
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Counts of even (`x_0..x_m`) and odd (`θ_1..θ_n`) polynomial generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorSet {
    pub even: usize,
    pub odd: usize,
}

impl GeneratorSet {
    pub fn new(even: usize, odd: usize) -> Self {
        GeneratorSet { even, odd }
    }

    pub fn contains(&self, g: Generator) -> bool {
        match g {
            Generator::X(i) | Generator::Dx(i) => i < self.even,
            Generator::Theta(j) | Generator::DTheta(j) => j < self.odd,
        }
    }

    fn check(&self, g: Generator) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::GeneratorOutOfRange {
                generator: g.to_string(),
                even: self.even,
                odd: self.odd,
            })
        }
    }
}

/// A single generator. Indices are zero-based internally; odd generators are
/// printed one-based (`t1`, `dt1`) and even ones zero-based (`x0`, `dx0`).
///
/// The derived ordering is the canonical written order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    X(usize),
    Theta(usize),
    Dx(usize),
    DTheta(usize),
}

impl Generator {
    pub fn exterior_degree(self) -> u32 {
        match self {
            Generator::X(_) | Generator::Theta(_) => 0,
            Generator::Dx(_) | Generator::DTheta(_) => 1,
        }
    }

    pub fn parity(self) -> Parity {
        match self {
            Generator::X(_) | Generator::Dx(_) => Parity::Even,
            Generator::Theta(_) | Generator::DTheta(_) => Parity::Odd,
        }
    }

    /// True when swapping `self` past `other` introduces a minus sign.
    pub fn anticommutes_with(self, other: Generator) -> bool {
        let lambda = self.exterior_degree() * other.exterior_degree();
        let parity = (self.parity().bit() * other.parity().bit()) as u32;
        (lambda + parity) % 2 == 1
    }

    /// `θ_j` and `dx_i` square to zero.
    pub fn is_square_zero(self) -> bool {
        matches!(self, Generator::Theta(_) | Generator::Dx(_))
    }

    fn differential(self) -> Option<Generator> {
        match self {
            Generator::X(i) => Some(Generator::Dx(i)),
            Generator::Theta(j) => Some(Generator::DTheta(j)),
            _ => None,
        }
    }

    fn contraction(self) -> Option<Generator> {
        match self {
            Generator::Dx(i) => Some(Generator::X(i)),
            Generator::DTheta(j) => Some(Generator::Theta(j)),
            _ => None,
        }
    }

    pub fn parse(s: &str) -> Result<Generator> {
        let bad = || Error::Parse(format!("unknown generator `{s}`"));
        let (ctor, digits): (fn(usize) -> Generator, &str) = if let Some(d) = s.strip_prefix("dx") {
            (Generator::Dx, d)
        } else if let Some(d) = s.strip_prefix("dt") {
            (Generator::DTheta, d)
        } else if let Some(d) = s.strip_prefix('x') {
            (Generator::X, d)
        } else if let Some(d) = s.strip_prefix('t') {
            (Generator::Theta, d)
        } else {
            return Err(bad());
        };
        let idx: usize = digits.parse().map_err(|_| bad())?;
        let g = ctor(idx);
        match g {
            Generator::Theta(0) | Generator::DTheta(0) => Err(bad()),
            Generator::Theta(j) => Ok(Generator::Theta(j - 1)),
            Generator::DTheta(j) => Ok(Generator::DTheta(j - 1)),
            other => Ok(other),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::X(i) => write!(f, "x{i}"),
            Generator::Theta(j) => write!(f, "t{}", j + 1),
            Generator::Dx(i) => write!(f, "dx{i}"),
            Generator::DTheta(j) => write!(f, "dt{}", j + 1),
        }
    }
}

/// A canonical monomial `x^α θ^S dx^E dθ^β`.
///
/// `theta` and `dx` hold 0/1 exponents. Ordering is lexicographic on
/// `(E, β, α, S)`, each exponent vector compared so that lower indices come
/// first (`dx0 < dx1`, `x0^2 < x0*x1 < x1^2`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SuperMonomial {
    pub x: Vec<u32>,
    pub theta: Vec<u32>,
    pub dx: Vec<u32>,
    pub dtheta: Vec<u32>,
}

impl Ord for SuperMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dx
            .cmp(&self.dx)
            .then_with(|| other.dtheta.cmp(&self.dtheta))
            .then_with(|| other.x.cmp(&self.x))
            .then_with(|| other.theta.cmp(&self.theta))
    }
}

impl PartialOrd for SuperMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl SuperMonomial {
    pub fn one(gens: GeneratorSet) -> Self {
        SuperMonomial {
            x: vec![0; gens.even],
            theta: vec![0; gens.odd],
            dx: vec![0; gens.even],
            dtheta: vec![0; gens.odd],
        }
    }

    pub fn gens(&self) -> GeneratorSet {
        GeneratorSet::new(self.x.len(), self.theta.len())
    }

    pub fn weight(&self) -> u32 {
        self.coefficient_degree() + self.lambda_degree()
    }

    /// Exterior degree `|E| + |β|`.
    pub fn lambda_degree(&self) -> u32 {
        self.dx.iter().sum::<u32>() + self.dtheta.iter().sum::<u32>()
    }

    /// Polynomial degree `|α| + |S|`.
    pub fn coefficient_degree(&self) -> u32 {
        self.x.iter().sum::<u32>() + self.theta.iter().sum::<u32>()
    }

    pub fn parity(&self) -> Parity {
        let odd = self.theta.iter().sum::<u32>() + self.dtheta.iter().sum::<u32>();
        Parity::of_count(odd as u64)
    }

    pub fn is_one(&self) -> bool {
        self.weight() == 0
    }

    /// The monomial as a canonical word, each power expanded into repeated letters.
    pub fn word(&self) -> Vec<Generator> {
        let mut w = Vec::with_capacity(self.weight() as usize);
        let families: [(&Vec<u32>, fn(usize) -> Generator); 4] = [
            (&self.x, Generator::X),
            (&self.theta, Generator::Theta),
            (&self.dx, Generator::Dx),
            (&self.dtheta, Generator::DTheta),
        ];
        for (exps, ctor) in families {
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    w.push(ctor(i));
                }
            }
        }
        w
    }

    /// Coefficient part `x^α θ^S` only.
    pub fn coefficient_part(&self) -> SuperMonomial {
        let mut m = self.clone();
        m.dx.iter_mut().for_each(|e| *e = 0);
        m.dtheta.iter_mut().for_each(|e| *e = 0);
        m
    }

    /// Exterior part `dx^E dθ^β` only.
    pub fn lambda_part(&self) -> SuperMonomial {
        let mut m = self.clone();
        m.x.iter_mut().for_each(|e| *e = 0);
        m.theta.iter_mut().for_each(|e| *e = 0);
        m
    }

    /// Sorts an arbitrary word into canonical order. Returns `None` when a
    /// square-zero generator repeats, otherwise the monomial together with the
    /// sign (`true` = negative) accumulated by the transpositions.
    pub fn canonicalize(gens: GeneratorSet, word: &[Generator]) -> Result<Option<(bool, SuperMonomial)>> {
        for &g in word {
            gens.check(g)?;
        }
        let mut negative = false;
        for i in 0..word.len() {
            for j in i + 1..word.len() {
                if word[i] > word[j] && word[i].anticommutes_with(word[j]) {
                    negative = !negative;
                }
            }
        }
        let mut mono = SuperMonomial::one(gens);
        for &g in word {
            let slot = match g {
                Generator::X(i) => &mut mono.x[i],
                Generator::Theta(j) => &mut mono.theta[j],
                Generator::Dx(i) => &mut mono.dx[i],
                Generator::DTheta(j) => &mut mono.dtheta[j],
            };
            *slot += 1;
            if g.is_square_zero() && *slot > 1 {
                return Ok(None);
            }
        }
        Ok(Some((negative, mono)))
    }
}

impl fmt::Display for SuperMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        let families: [(&Vec<u32>, fn(usize) -> Generator); 4] = [
            (&self.x, Generator::X),
            (&self.theta, Generator::Theta),
            (&self.dx, Generator::Dx),
            (&self.dtheta, Generator::DTheta),
        ];
        for (exps, ctor) in families {
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                write!(f, "{}", ctor(i))?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// A finite sum of canonical monomials with nonzero exact coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperPolynomial<C: Scalar> {
    gens: GeneratorSet,
    terms: BTreeMap<SuperMonomial, C>,
}

impl<C: Scalar> SuperPolynomial<C> {
    pub fn zero(gens: GeneratorSet) -> Self {
        SuperPolynomial {
            gens,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(gens: GeneratorSet) -> Self {
        Self::monomial(SuperMonomial::one(gens), C::one())
    }

    pub fn monomial(mono: SuperMonomial, coeff: C) -> Self {
        let mut p = Self::zero(mono.gens());
        p.add_term(mono, coeff);
        p
    }

    pub fn generator(gens: GeneratorSet, g: Generator) -> Result<Self> {
        Self::normalize(gens, &[(g, 1)], C::one())
    }

    /// Multiplies out a word of generator powers and brings it to canonical form.
    pub fn normalize(gens: GeneratorSet, word: &[(Generator, u32)], coeff: C) -> Result<Self> {
        let letters: Vec<Generator> = word
            .iter()
            .flat_map(|&(g, e)| std::iter::repeat_n(g, e as usize))
            .collect();
        let mut p = Self::zero(gens);
        if let Some((negative, mono)) = SuperMonomial::canonicalize(gens, &letters)? {
            p.add_term(mono, if negative { -coeff } else { coeff });
        }
        Ok(p)
    }

    pub fn gens(&self) -> GeneratorSet {
        self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SuperMonomial, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &SuperMonomial) -> C {
        self.terms.get(mono).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, mono: SuperMonomial, coeff: C) {
        debug_assert_eq!(mono.gens(), self.gens);
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(c) => {
                *c = c.clone() + coeff;
                if c.is_zero() {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, coeff);
            }
        }
    }

    fn add_signed(&mut self, negative: bool, mono: SuperMonomial, coeff: &C) {
        let c = if negative { -coeff.clone() } else { coeff.clone() };
        self.add_term(mono, c);
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.gens);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a.clone() * c.clone());
        }
        out
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.gens != other.gens {
            return Err(Error::MismatchedGenerators);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.gens != other.gens {
            return Err(Error::MismatchedGenerators);
        }
        let mut out = Self::zero(self.gens);
        for (m1, c1) in &self.terms {
            let w1 = m1.word();
            for (m2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend(m2.word());
                if let Some((negative, mono)) = SuperMonomial::canonicalize(self.gens, &w)? {
                    out.add_signed(negative, mono, &(c1.clone() * c2.clone()));
                }
            }
        }
        Ok(out)
    }

    /// Replaces, one letter at a time, every letter on which `rule` is defined,
    /// with the antiderivation sign `(-1)^(exterior degree to the left)`.
    fn antiderivation(&self, rule: fn(Generator) -> Option<Generator>) -> Self {
        let mut out = Self::zero(self.gens);
        for (mono, c) in &self.terms {
            let word = mono.word();
            let mut lambda_before = 0u32;
            for k in 0..word.len() {
                if let Some(image) = rule(word[k]) {
                    let mut w = word.clone();
                    w[k] = image;
                    let canon = SuperMonomial::canonicalize(self.gens, &w)
                        .expect("letters stay inside the generator set");
                    if let Some((negative, m)) = canon {
                        out.add_signed(negative ^ (lambda_before % 2 == 1), m, c);
                    }
                }
                lambda_before += word[k].exterior_degree();
            }
        }
        out
    }

    /// Contraction with the Euler field: `dx_i ↦ x_i`, `dθ_j ↦ θ_j`.
    pub fn apply_i_d(&self) -> Self {
        self.antiderivation(Generator::contraction)
    }

    /// Exterior differential: `x_i ↦ dx_i`, `θ_j ↦ dθ_j`.
    pub fn apply_d(&self) -> Self {
        self.antiderivation(Generator::differential)
    }

    /// Terms of weight `n` and exterior degree `p`.
    pub fn weight_component(&self, n: u32, p: u32) -> Self {
        let mut out = Self::zero(self.gens);
        for (m, c) in &self.terms {
            if m.weight() == n && m.lambda_degree() == p {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Parses the text form `c*g1^e1*g2 + ...`; generators may appear in any order.
    pub fn parse(gens: GeneratorSet, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let normalized = s.replace(" - ", " + -");
        let mut out = Self::zero(gens);
        for term in normalized.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in `{s}`")));
            }
            out = out.checked_add(&Self::parse_term(gens, term)?)?;
        }
        Ok(out)
    }

    fn parse_term(gens: GeneratorSet, term: &str) -> Result<Self> {
        let mut coeff = C::one();
        let mut word = Vec::new();
        for factor in term.split('*') {
            let factor = factor.trim();
            let (negative, body) = match factor.strip_prefix('-') {
                Some(rest) => (true, rest.trim()),
                None => (false, factor),
            };
            if negative {
                coeff = -coeff;
            }
            if body.starts_with(|c: char| c.is_ascii_digit()) {
                let v = C::parse_scalar(body)
                    .ok_or_else(|| Error::Parse(format!("bad coefficient `{body}`")))?;
                coeff = coeff * v;
                continue;
            }
            let (name, exp) = match body.split_once('^') {
                Some((name, e)) => {
                    let e: u32 = e
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{body}`")))?;
                    (name.trim(), e)
                }
                None => (body, 1),
            };
            word.push((Generator::parse(name)?, exp));
        }
        Self::normalize(gens, &word, coeff)
    }
}

impl<C: Scalar> fmt::Display for SuperPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else if c.is_minus_one() {
                write!(f, "-{m}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<C: Scalar> Add for &SuperPolynomial<C> {
    type Output = SuperPolynomial<C>;
    /// Panics when the operands use different generator sets.
    fn add(self, rhs: Self) -> SuperPolynomial<C> {
        self.checked_add(rhs).expect("mismatched generator sets")
    }
}

impl<C: Scalar> Neg for &SuperPolynomial<C> {
    type Output = SuperPolynomial<C>;
    fn neg(self) -> SuperPolynomial<C> {
        self.scale(&-C::one())
    }
}

impl<C: Scalar> Sub for &SuperPolynomial<C> {
    type Output = SuperPolynomial<C>;
    fn sub(self, rhs: Self) -> SuperPolynomial<C> {
        self + &(-rhs)
    }
}
