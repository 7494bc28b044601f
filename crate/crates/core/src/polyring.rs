//! Sparse multivariate polynomials over `Q`, reduced Gröbner bases and graded
//! normal forms.
//!
//! Monomials are ordered degree-reverse-lexicographically with
//! `t_1 > t_2 > … > t_K`. The [`Ord`] impl on [`Monomial`] *is* that order, so
//! the largest key of a polynomial's term map is its leading monomial.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableMismatch { left: usize, right: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    /// The variable `t_{index+1}`.
    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    /// Square-free product of the given variables.
    pub fn product_of(nvars: usize, vars: &[usize]) -> Self {
        let mut e = vec![0; nvars];
        for &v in vars {
            e[v] += 1;
        }
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_square_free(&self) -> bool {
        self.0.iter().all(|&e| e <= 1)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            // Reverse lex: the last differing exponent decides, smaller wins.
            for (a, b) in self.0.iter().zip(&other.0).rev() {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "t{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut p = Self::zero(m.nvars());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, BigRational::one())
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        Self::monomial(Monomial::var(nvars, index))
    }

    /// Builds `∑ c_i m_i` from integer coefficients; repeated monomials add up.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, i64)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial variable count");
            p.add_term(m, BigRational::from_integer(c.into()));
        }
        p
    }

    /// The linear form `∑ c_j t_j`.
    pub fn linear(coeffs: &[i64]) -> Self {
        let n = coeffs.len();
        Self::from_terms(n, coeffs.iter().enumerate().map(|(j, &c)| (Monomial::var(n, j), c)))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(PolyError::VariableMismatch {
                left: self.nvars,
                right: other.nvars,
            })
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        let mut out = Polynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// `c · m · self`.
    fn mul_term(&self, m: &Monomial, c: &BigRational) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, x)| (k.mul(m), x * c)).collect(),
        }
    }

    pub fn monic(&self) -> Polynomial {
        match self.leading_term() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// Substitutes `t_j ↦ images[j]` for every variable.
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.nvars);
        let nv = images.first().map_or(self.nvars, |p| p.nvars);
        let mut out = Polynomial::zero(nv);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(nv, c.clone());
            for (j, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = &t * &images[j];
                }
            }
            out = &out + &t;
        }
        out
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    /// Panics on variable-count mismatch; use [`Polynomial::try_add`] to recover.
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomials in the same ring")
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomials in the same ring")
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomials in the same ring")
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-BigRational::one())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let a = c.abs();
            let is_const = m.degree() == 0;
            if !a.is_one() || is_const {
                write!(f, "{a}")?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            if !is_const {
                write!(f, "{m}")?;
            }
        }
        Ok(())
    }
}

/// A reduced Gröbner basis for degrevlex, sorted by ascending leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    nvars: usize,
    generators: Vec<Polynomial>,
}

impl GroebnerBasis {
    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.generators.iter().filter_map(Polynomial::leading_monomial)
    }

    /// Whether `m` is divisible by no leading monomial.
    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.leading_monomials().any(|lm| lm.divides(m))
    }
}

/// S-polynomial of two nonzero polynomials.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (mf, cf) = f.leading_term().expect("nonzero");
    let (mg, cg) = g.leading_term().expect("nonzero");
    let l = mf.lcm(mg);
    let a = f.mul_term(&mf.quotient_of(&l), &cf.recip());
    let b = g.mul_term(&mg.quotient_of(&l), &cg.recip());
    &a - &b
}

/// Full multivariate division remainder of `p` by `divisors`.
fn reduce(p: &Polynomial, divisors: &[Polynomial]) -> Polynomial {
    let mut work = p.clone();
    let mut rem = Polynomial::zero(p.nvars);
    while let Some((m, c)) = work.terms.pop_last() {
        let hit = divisors.iter().find(|g| {
            g.leading_monomial()
                .map_or(false, |lm| lm.divides(&m))
        });
        match hit {
            Some(g) => {
                let (lm, lc) = g.leading_term().unwrap();
                let factor = &c / lc;
                let q = lm.quotient_of(&m);
                for (gm, gc) in g.terms.iter().rev().skip(1) {
                    work.add_term(gm.mul(&q), -(gc * &factor));
                }
            }
            None => {
                rem.terms.insert(m, c);
            }
        }
    }
    rem
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
///
/// Pairs are processed by the normal strategy (smallest lcm first, ties
/// broken by generator indices); pairs with coprime leading monomials are
/// skipped, as are pairs eliminated by the Gebauer–Möller chain criterion.
pub fn buchberger(gens: &[Polynomial]) -> GroebnerBasis {
    let nvars = gens.first().map_or(0, Polynomial::nvars);
    let mut basis: Vec<Polynomial> = Vec::new();
    for g in gens {
        assert_eq!(g.nvars(), nvars, "generators in the same ring");
        let r = reduce(g, &basis);
        if !r.is_zero() {
            basis.push(r.monic());
        }
    }
    // (lcm, i, j) with i < j
    let mut pairs: BTreeSet<(Monomial, usize, usize)> = BTreeSet::new();
    let lm = |p: &Polynomial| p.leading_monomial().cloned().expect("nonzero");
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.insert((lm(&basis[i]).lcm(&lm(&basis[j])), i, j));
        }
    }
    let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();
    while let Some((l, i, j)) = pairs.pop_first() {
        done.insert((i, j));
        let (li, lj) = (lm(&basis[i]), lm(&basis[j]));
        if li.is_coprime(&lj) {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && lm(&basis[k]).divides(&l)
                && done.contains(&(i.min(k), i.max(k)))
                && done.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let r = reduce(&s_polynomial(&basis[i], &basis[j]), &basis);
        if r.is_zero() {
            continue;
        }
        let r = r.monic();
        let lr = lm(&r);
        let k = basis.len();
        basis.push(r);
        for i in 0..k {
            pairs.insert((lm(&basis[i]).lcm(&lr), i, k));
        }
    }
    GroebnerBasis {
        nvars,
        generators: interreduce(basis),
    }
}

fn interreduce(basis: Vec<Polynomial>) -> Vec<Polynomial> {
    // Minimal basis: drop generators whose leading monomial is divisible by another's.
    let mut minimal: Vec<Polynomial> = Vec::new();
    let mut sorted = basis;
    sorted.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    for p in sorted {
        let m = p.leading_monomial().unwrap().clone();
        if !minimal.iter().any(|q| q.leading_monomial().unwrap().divides(&m)) {
            minimal.push(p);
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| q.clone())
            .collect();
        let (lm, _) = minimal[i].leading_term().unwrap();
        let tail = Polynomial {
            nvars: minimal[i].nvars,
            terms: minimal[i]
                .terms
                .iter()
                .filter(|(m, _)| *m != lm)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        };
        let mut p = reduce(&tail, &others);
        p.add_term(lm.clone(), BigRational::one());
        reduced.push(p);
    }
    reduced
}

/// Remainder of `p` on division by the basis; canonical modulo the ideal.
pub fn normal_form(p: &Polynomial, gb: &GroebnerBasis) -> Result<Polynomial, PolyError> {
    if p.nvars != gb.nvars && !gb.generators.is_empty() {
        return Err(PolyError::VariableMismatch {
            left: p.nvars,
            right: gb.nvars,
        });
    }
    Ok(reduce(p, &gb.generators))
}

/// All degree-`d` monomials not divisible by any leading monomial, in
/// descending degrevlex order.
pub fn standard_monomials(gb: &GroebnerBasis, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; gb.nvars];
    fn rec(gb: &GroebnerBasis, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            let m = Monomial(cur.clone());
            if gb.is_standard(&m) {
                out.push(m);
            }
            cur[i] = 0;
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            // Prune as soon as the partial monomial is already non-standard.
            if e > 0 && !gb.is_standard(&Monomial(cur.clone())) {
                break;
            }
            rec(gb, i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if gb.nvars == 0 {
        if d == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    rec(gb, 0, d, &mut cur, &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// Coordinates of a homogeneous normal form in a monomial basis.
pub fn coordinates(nf: &Polynomial, basis: &[Monomial]) -> Option<Vec<BigRational>> {
    let mut coords = vec![BigRational::zero(); basis.len()];
    for (m, c) in &nf.terms {
        let i = basis.iter().position(|b| b == m)?;
        coords[i] = c.clone();
    }
    Some(coords)
}

/// Converts a rational to an integer if it is one.
pub fn as_integer(q: &BigRational) -> Option<BigInt> {
    q.is_integer().then(|| q.to_integer())
}
