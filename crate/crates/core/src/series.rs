//! The convolution ring on a class monoid `C ⊂ Z^r`.
//!
//! Elements of `Z[C]` are finitely supported functions; elements of `Z[[C]]`
//! are represented by [`TruncatedSeries`], which stores every coefficient at
//! classes of weight at most a bound `D` for a linear weight that is positive
//! on the monoid generators. Because the weight is linear and positive, only
//! finitely many decompositions of a class contribute to each coefficient, so
//! truncated products and expansions are exact below the bound.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cohomology::ClassVector;
use crate::feasibility::{self, Constraint};
use crate::linalg;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("weight functionals differ: {left:?} vs {right:?}")]
    WeightMismatch { left: Vec<i64>, right: Vec<i64> },
    #[error("no linear functional is positive on all generators")]
    NoPositiveFunctional,
    #[error("empty generator list")]
    NoGenerators,
    #[error("factor {factor} has weight {weight}; every factor needs weight at least 1")]
    FactorWeight { factor: MonoidElement, weight: i64 },
    #[error("element {element} has weight {weight} outside 0..={bound}")]
    OutOfBound {
        element: MonoidElement,
        weight: i64,
        bound: u64,
    },
    #[error("series truncated at {have} cannot be used at bound {want}")]
    BoundMismatch { have: u64, want: u64 },
    #[error("class {index} has per-orbit weight {have}, expected {want}")]
    OrbitWeightMismatch { index: usize, have: i64, want: i64 },
}

/// An element of `Z^r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct MonoidElement(Vec<i64>);

impl MonoidElement {
    pub fn new(v: Vec<i64>) -> Self {
        MonoidElement(v)
    }

    pub fn zero(dim: usize) -> Self {
        MonoidElement(vec![0; dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0; dim];
        v[i] = 1;
        MonoidElement(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &MonoidElement) -> MonoidElement {
        MonoidElement(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scaled(&self, k: i64) -> MonoidElement {
        MonoidElement(self.0.iter().map(|a| a * k).collect())
    }
}

impl From<&ClassVector> for MonoidElement {
    fn from(c: &ClassVector) -> Self {
        MonoidElement(c.coords.clone())
    }
}

impl fmt::Display for MonoidElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn check_dim(left: usize, right: usize) -> Result<(), SeriesError> {
    if left == right {
        Ok(())
    } else {
        Err(SeriesError::DimensionMismatch { left, right })
    }
}

fn accumulate(map: &mut BTreeMap<MonoidElement, BigInt>, key: MonoidElement, value: BigInt) {
    if value.is_zero() {
        return;
    }
    let entry = map.entry(key);
    match entry {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(value);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += value;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// An element of `Z[C]`: a finitely supported integer function on `Z^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSupportFunction {
    dim: usize,
    support: BTreeMap<MonoidElement, BigInt>,
}

impl FiniteSupportFunction {
    pub fn zero(dim: usize) -> Self {
        FiniteSupportFunction {
            dim,
            support: BTreeMap::new(),
        }
    }

    /// The characteristic function `e_v` of a single element.
    pub fn delta(v: MonoidElement) -> Self {
        let mut f = Self::zero(v.dim());
        f.support.insert(v, BigInt::one());
        f
    }

    /// The unit `δ_0`.
    pub fn one(dim: usize) -> Self {
        Self::delta(MonoidElement::zero(dim))
    }

    pub fn from_terms(
        dim: usize,
        terms: impl IntoIterator<Item = (MonoidElement, BigInt)>,
    ) -> Result<Self, SeriesError> {
        let mut f = Self::zero(dim);
        for (k, v) in terms {
            check_dim(dim, k.dim())?;
            accumulate(&mut f.support, k, v);
        }
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, v: &MonoidElement) -> BigInt {
        self.support.get(v).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Nonzero values in lexicographic order of the exponent vectors.
    pub fn terms(&self) -> impl Iterator<Item = (&MonoidElement, &BigInt)> {
        self.support.iter()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        check_dim(self.dim, other.dim)?;
        let mut out = self.clone();
        for (k, v) in &other.support {
            accumulate(&mut out.support, k.clone(), v.clone());
        }
        Ok(out)
    }

    /// `(f·g)(λ) = ∑_{μ+ν=λ} f(μ) g(ν)`.
    pub fn convolve(&self, other: &Self) -> Result<Self, SeriesError> {
        check_dim(self.dim, other.dim)?;
        let mut out = Self::zero(self.dim);
        for (a, x) in &self.support {
            for (b, y) in &other.support {
                accumulate(&mut out.support, a.add(b), x * y);
            }
        }
        Ok(out)
    }
}

/// A linear functional `λ ↦ ℓ · λ` used to grade and truncate series.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct WeightFunctional(Vec<i64>);

impl WeightFunctional {
    pub fn new(coeffs: Vec<i64>) -> Self {
        WeightFunctional(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn eval(&self, v: &MonoidElement) -> i64 {
        self.0.iter().zip(&v.0).map(|(a, b)| a * b).sum()
    }

    /// Checks `ℓ(v) >= 1` for every generator.
    pub fn check_positive<'a>(&self, gens: impl IntoIterator<Item = &'a MonoidElement>) -> Result<(), SeriesError> {
        for v in gens {
            check_dim(self.dim(), v.dim())?;
            let weight = self.eval(v);
            if weight < 1 {
                return Err(SeriesError::FactorWeight {
                    factor: v.clone(),
                    weight,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for WeightFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", MonoidElement(self.0.clone()))
    }
}

/// Finds an integer functional with `ℓ(v) >= 1` on every generator.
///
/// The system `ℓ · v_i >= 1` is solved exactly by Fourier–Motzkin
/// elimination; the rational solution is cleared of denominators and divided
/// by the gcd of its entries, which keeps every `ℓ · v_i` a positive integer.
pub fn find_positive_functional(generators: &[MonoidElement]) -> Result<WeightFunctional, SeriesError> {
    let dim = generators.first().ok_or(SeriesError::NoGenerators)?.dim();
    let mut constraints = Vec::with_capacity(generators.len());
    for v in generators {
        check_dim(dim, v.dim())?;
        constraints.push(Constraint::from_ints(&v.0, 1));
    }
    let point = feasibility::solve(dim, &constraints).ok_or(SeriesError::NoPositiveFunctional)?;
    let denom = feasibility::common_denominator(&point);
    let ints: Vec<i64> = point
        .iter()
        .map(|x| {
            (x * BigRational::from_integer(denom.clone()))
                .to_integer()
                .to_i64()
                .expect("weight fits in 64 bits")
        })
        .collect();
    let g = linalg::gcd_abs(&ints).max(1) as i64;
    let ell = WeightFunctional(ints.into_iter().map(|x| x / g).collect());
    debug_assert!(ell.check_positive(generators).is_ok());
    Ok(ell)
}

/// An element of `Z[[C]]` known exactly on all classes of weight `<= bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    dim: usize,
    support: BTreeMap<MonoidElement, BigInt>,
    weight: WeightFunctional,
    bound: u64,
}

impl TruncatedSeries {
    /// Truncates a finitely supported function. Every supported element must
    /// have nonnegative weight; elements above the bound are dropped.
    pub fn from_function(
        f: &FiniteSupportFunction,
        weight: WeightFunctional,
        bound: u64,
    ) -> Result<Self, SeriesError> {
        check_dim(f.dim, weight.dim())?;
        let mut support = BTreeMap::new();
        for (k, v) in &f.support {
            let w = weight.eval(k);
            if w < 0 {
                return Err(SeriesError::OutOfBound {
                    element: k.clone(),
                    weight: w,
                    bound,
                });
            }
            if w as u64 <= bound {
                support.insert(k.clone(), v.clone());
            }
        }
        Ok(TruncatedSeries {
            dim: f.dim,
            support,
            weight,
            bound,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weight(&self) -> &WeightFunctional {
        &self.weight
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn get(&self, v: &MonoidElement) -> BigInt {
        self.support.get(v).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Nonzero coefficients in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&MonoidElement, &BigInt)> {
        self.support.iter()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Drops every term of weight above `bound`.
    pub fn truncate(&self, bound: u64) -> Result<Self, SeriesError> {
        if bound > self.bound {
            return Err(SeriesError::BoundMismatch {
                have: self.bound,
                want: bound,
            });
        }
        Ok(TruncatedSeries {
            dim: self.dim,
            support: self
                .support
                .iter()
                .filter(|(k, _)| self.weight.eval(k) as u64 <= bound)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
            weight: self.weight.clone(),
            bound,
        })
    }

    /// Product in `Z[[C]]`, exact up to the smaller of the two bounds.
    pub fn convolve(&self, other: &Self) -> Result<Self, SeriesError> {
        check_dim(self.dim, other.dim)?;
        if self.weight != other.weight {
            return Err(SeriesError::WeightMismatch {
                left: self.weight.0.clone(),
                right: other.weight.0.clone(),
            });
        }
        let bound = self.bound.min(other.bound);
        let mut support = BTreeMap::new();
        for (a, x) in &self.support {
            let wa = self.weight.eval(a);
            for (b, y) in &other.support {
                if (wa + self.weight.eval(b)) as u64 <= bound {
                    accumulate(&mut support, a.add(b), x * y);
                }
            }
        }
        Ok(TruncatedSeries {
            dim: self.dim,
            support,
            weight: self.weight.clone(),
            bound,
        })
    }
}

/// `C(m + k - 1, k)`, the coefficient of `x^k` in `(1 - x)^{-m}`.
fn multiset_coefficients(m: u32, kmax: u64) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(kmax as usize + 1);
    let mut c = BigInt::one();
    for k in 0..=kmax {
        out.push(c.clone());
        c = c * BigInt::from(u64::from(m) + k) / BigInt::from(k + 1);
    }
    out
}

/// Expands `∏ (1 - e_{v_i})^{-m_i}` up to weight `bound`.
///
/// The coefficient at `λ` counts the `β ∈ N^N` with `∑ β_i v_i = λ`; one pass
/// per factor multiplies by the truncated series `∑_k C(m+k-1,k) e_{k v}`.
pub fn expand_product(
    factors: &[(MonoidElement, u32)],
    weight: &WeightFunctional,
    bound: u64,
) -> Result<TruncatedSeries, SeriesError> {
    let dim = weight.dim();
    weight.check_positive(factors.iter().map(|(v, _)| v))?;
    let mut cur: BTreeMap<MonoidElement, BigInt> = BTreeMap::new();
    cur.insert(MonoidElement::zero(dim), BigInt::one());
    for (v, m) in factors {
        if *m == 0 {
            continue;
        }
        let w = weight.eval(v) as u64;
        let coeffs = multiset_coefficients(*m, bound / w);
        let mut next = BTreeMap::new();
        for (lambda, x) in &cur {
            let base = weight.eval(lambda) as u64;
            let mut point = lambda.clone();
            for (k, c) in coeffs.iter().enumerate() {
                if base + k as u64 * w > bound {
                    break;
                }
                if k > 0 {
                    point = point.add(v);
                }
                accumulate(&mut next, point.clone(), x * c);
            }
        }
        cur = next;
    }
    Ok(TruncatedSeries {
        dim,
        support: cur,
        weight: weight.clone(),
        bound,
    })
}

/// A rational element `numerator · ∏ (1 - e_v)^{-m}` of `Z[[C]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSeriesExpr {
    pub numerator: FiniteSupportFunction,
    pub denominator_factors: Vec<(MonoidElement, u32)>,
}

impl RationalSeriesExpr {
    pub fn dim(&self) -> usize {
        self.numerator.dim()
    }

    pub fn generators(&self) -> Vec<MonoidElement> {
        self.denominator_factors.iter().map(|(v, _)| v.clone()).collect()
    }

    /// Total multiplicity `∑ m_i`, the number of geometric factors.
    pub fn num_factors(&self) -> u64 {
        self.denominator_factors.iter().map(|(_, m)| u64::from(*m)).sum()
    }

    pub fn expand(&self, weight: &WeightFunctional, bound: u64) -> Result<TruncatedSeries, SeriesError> {
        let den = expand_product(&self.denominator_factors, weight, bound)?;
        let num = TruncatedSeries::from_function(&self.numerator, weight.clone(), bound)?;
        num.convolve(&den)
    }

    /// Closed form using `label(i)` for the `i`-th coordinate of the classes,
    /// e.g. `(1/(1-t1))^2 * (1/(1-t1^-2*t2))`.
    pub fn closed_form(&self, label: impl Fn(usize) -> String) -> String {
        let mut parts = Vec::new();
        let is_unit_numerator =
            self.numerator.len() == 1 && self.numerator.get(&MonoidElement::zero(self.dim())).is_one();
        if !is_unit_numerator {
            let terms: Vec<String> = self
                .numerator
                .terms()
                .map(|(k, c)| format!("{c}*{}", monomial_label(k, &label)))
                .collect();
            parts.push(format!("({})", terms.join(" + ")));
        }
        for (v, m) in &self.denominator_factors {
            let base = format!("(1/(1-{}))", monomial_label(v, &label));
            parts.push(if *m == 1 { base } else { format!("{base}^{m}") });
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" * ")
        }
    }
}

/// `e_v` written multiplicatively, `t1^a*t2^b`.
pub fn monomial_label(v: &MonoidElement, label: impl Fn(usize) -> String) -> String {
    let parts: Vec<String> = v
        .0
        .iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(i, &e)| {
            if e == 1 {
                label(i)
            } else {
                format!("{}^{e}", label(i))
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// The Euler series `E_p = ∏ (1 - e_{[V]})^{-m}` from classes grouped with
/// their multiplicities. Also accepts arbitrary user-supplied class lists.
pub fn euler_from_classes(grouped: &BTreeMap<ClassVector, usize>) -> Result<RationalSeriesExpr, SeriesError> {
    let dim = grouped.keys().next().ok_or(SeriesError::NoGenerators)?.coords.len();
    let mut factors = Vec::with_capacity(grouped.len());
    for (class, &m) in grouped {
        check_dim(dim, class.coords.len())?;
        factors.push((MonoidElement::from(class), m as u32));
    }
    Ok(RationalSeriesExpr {
        numerator: FiniteSupportFunction::one(dim),
        denominator_factors: factors,
    })
}

/// The equivariant Euler series `∏_{i=1..N} (1 - e_{u_i})^{-1}` on the free
/// monoid `N^N`, one generator per orbit.
pub fn equivariant_series(num_orbits: usize) -> RationalSeriesExpr {
    RationalSeriesExpr {
        numerator: FiniteSupportFunction::one(num_orbits),
        denominator_factors: (0..num_orbits)
            .map(|i| (MonoidElement::unit(num_orbits, i), 1))
            .collect(),
    }
}

/// Per-orbit weights `w_i = ℓ([O_i])` for the equivariant grading.
pub fn orbit_weights(classes: &[MonoidElement], weight: &WeightFunctional) -> Result<WeightFunctional, SeriesError> {
    weight.check_positive(classes)?;
    Ok(WeightFunctional(classes.iter().map(|c| weight.eval(c)).collect()))
}

/// The pushforward `J(ξ) = ∑_λ (∑_{π(β)=λ} ξ(β)) λ` along `π(u_i) = v_i`.
pub fn pushforward_j(
    series_t: &TruncatedSeries,
    classes: &[MonoidElement],
    weight: &WeightFunctional,
    bound: u64,
) -> Result<TruncatedSeries, SeriesError> {
    check_dim(series_t.dim, classes.len())?;
    if series_t.bound < bound {
        return Err(SeriesError::BoundMismatch {
            have: series_t.bound,
            want: bound,
        });
    }
    for (index, v) in classes.iter().enumerate() {
        check_dim(weight.dim(), v.dim())?;
        let want = weight.eval(v);
        let have = series_t.weight.0[index];
        if have != want {
            return Err(SeriesError::OrbitWeightMismatch { index, have, want });
        }
    }
    let mut support = BTreeMap::new();
    for (beta, x) in &series_t.support {
        if series_t.weight.eval(beta) as u64 > bound {
            continue;
        }
        let mut lambda = MonoidElement::zero(weight.dim());
        for (b, v) in beta.0.iter().zip(classes) {
            if *b != 0 {
                lambda = lambda.add(&v.scaled(*b));
            }
        }
        accumulate(&mut support, lambda, x.clone());
    }
    Ok(TruncatedSeries {
        dim: weight.dim(),
        support,
        weight: weight.clone(),
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: &[i64]) -> MonoidElement {
        MonoidElement::new(v.to_vec())
    }

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn convolution_basics() {
        let a = FiniteSupportFunction::delta(e(&[1, 0]));
        let b = FiniteSupportFunction::delta(e(&[0, 2]));
        assert_eq!(a.convolve(&b).unwrap(), FiniteSupportFunction::delta(e(&[1, 2])));
        let one_plus = FiniteSupportFunction::one(1).add(&FiniteSupportFunction::delta(e(&[1]))).unwrap();
        let sq = one_plus.convolve(&one_plus).unwrap();
        assert_eq!(sq.get(&e(&[0])), big(1));
        assert_eq!(sq.get(&e(&[1])), big(2));
        assert_eq!(sq.get(&e(&[2])), big(1));
        assert_eq!(sq.len(), 3);
        assert!(matches!(
            a.convolve(&FiniteSupportFunction::one(3)),
            Err(SeriesError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn truncated_convolution_rules() {
        let w = WeightFunctional::new(vec![1]);
        let f = FiniteSupportFunction::from_terms(1, [(e(&[0]), big(1)), (e(&[1]), big(1)), (e(&[3]), big(5))]).unwrap();
        let a = TruncatedSeries::from_function(&f, w.clone(), 3).unwrap();
        let b = TruncatedSeries::from_function(&f, w.clone(), 2).unwrap();
        assert_eq!(b.get(&e(&[3])), big(0));
        let c = a.convolve(&b).unwrap();
        assert_eq!(c.bound(), 2);
        assert_eq!(c.get(&e(&[2])), big(1));
        let other = TruncatedSeries::from_function(&f, WeightFunctional::new(vec![2]), 3).unwrap();
        assert!(matches!(a.convolve(&other), Err(SeriesError::WeightMismatch { .. })));
        let neg = FiniteSupportFunction::delta(e(&[-1]));
        assert!(matches!(
            TruncatedSeries::from_function(&neg, w, 3),
            Err(SeriesError::OutOfBound { .. })
        ));
    }

    #[test]
    fn positive_functionals() {
        assert_eq!(find_positive_functional(&[e(&[1])]).unwrap(), WeightFunctional::new(vec![1]));
        let ell = find_positive_functional(&[e(&[1, 0]), e(&[0, 1]), e(&[-2, 1])]).unwrap();
        assert_eq!(ell, WeightFunctional::new(vec![1, 3]));
        let values: Vec<i64> = [e(&[1, 0]), e(&[0, 1]), e(&[-2, 1])].iter().map(|v| ell.eval(v)).collect();
        assert_eq!(values, vec![1, 3, 1]);
        assert_eq!(
            find_positive_functional(&[e(&[1, 0]), e(&[-1, 0])]),
            Err(SeriesError::NoPositiveFunctional)
        );
        assert_eq!(find_positive_functional(&[e(&[0, 0])]), Err(SeriesError::NoPositiveFunctional));
        assert_eq!(find_positive_functional(&[]), Err(SeriesError::NoGenerators));
    }

    #[test]
    fn fractional_functional_is_scaled() {
        // 2x - y >= 1 and -3x + 2y >= 1 force x, y into a thin wedge.
        let gens = [e(&[2, -1]), e(&[-3, 2])];
        let ell = find_positive_functional(&gens).unwrap();
        assert!(ell.check_positive(&gens).is_ok());
    }

    #[test]
    fn stars_and_bars() {
        let w = WeightFunctional::new(vec![1]);
        let s = expand_product(&[(e(&[1]), 3)], &w, 3).unwrap();
        let got: Vec<BigInt> = (0..=3).map(|d| s.get(&e(&[d]))).collect();
        assert_eq!(got, vec![big(1), big(3), big(6), big(10)]);
        assert_eq!(s.get(&e(&[4])), big(0));
    }

    #[test]
    fn empty_product_is_unit() {
        let w = WeightFunctional::new(vec![1, 1]);
        let s = expand_product(&[], &w, 5).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.get(&e(&[0, 0])), big(1));
    }

    #[test]
    fn factor_weight_must_be_positive() {
        let w = WeightFunctional::new(vec![1, 0]);
        assert!(matches!(
            expand_product(&[(e(&[0, 1]), 1)], &w, 3),
            Err(SeriesError::FactorWeight { weight: 0, .. })
        ));
    }

    /// Counts `β ∈ N^N` with `∑ β_i w_i <= bound`, grouped by `∑ β_i v_i`.
    fn brute_force(gens: &[MonoidElement], w: &WeightFunctional, bound: i64) -> BTreeMap<MonoidElement, i64> {
        fn rec(
            gens: &[MonoidElement],
            w: &WeightFunctional,
            left: i64,
            at: MonoidElement,
            out: &mut BTreeMap<MonoidElement, i64>,
        ) {
            match gens.split_first() {
                None => *out.entry(at).or_insert(0) += 1,
                Some((v, rest)) => {
                    let mut cur = at;
                    let mut budget = left;
                    loop {
                        rec(rest, w, budget, cur.clone(), out);
                        budget -= w.eval(v);
                        if budget < 0 {
                            break;
                        }
                        cur = cur.add(v);
                    }
                }
            }
        }
        let mut out = BTreeMap::new();
        rec(gens, w, bound, MonoidElement::zero(w.dim()), &mut out);
        out
    }

    #[test]
    fn hirzebruch_first_coefficients() {
        let w = WeightFunctional::new(vec![1, 3]);
        let factors = [(e(&[1, 0]), 2), (e(&[0, 1]), 1), (e(&[-2, 1]), 1)];
        let gens = [e(&[1, 0]), e(&[1, 0]), e(&[0, 1]), e(&[-2, 1])];
        let oracle = brute_force(&gens, &w, 3);
        // Frozen from the oracle: (0,1) = (0,1) or (-2,1) + 2*(1,0), the latter in 3 ways.
        assert_eq!(oracle[&e(&[1, 0])], 2);
        assert_eq!(oracle[&e(&[0, 1])], 4);
        assert_eq!(oracle[&e(&[-2, 1])], 1);
        assert_eq!(oracle[&e(&[2, 0])], 3);
        let s = expand_product(&factors, &w, 3).unwrap();
        assert_eq!(s.get(&e(&[1, 0])), big(2));
        assert_eq!(s.get(&e(&[0, 1])), big(4));
        assert_eq!(s.get(&e(&[-2, 1])), big(1));
        assert_eq!(s.get(&e(&[2, 0])), big(3));
        let all: BTreeMap<MonoidElement, i64> = s.terms().map(|(k, v)| (k.clone(), v.to_i64().unwrap())).collect();
        assert_eq!(all, oracle);
    }

    #[test]
    fn euler_closed_forms() {
        let g = BTreeMap::from([(ClassVector::new(1, vec![1]), 3)]);
        let ex = euler_from_classes(&g).unwrap();
        assert_eq!(ex.closed_form(|i| format!("t{}", i + 1)), "(1/(1-t1))^3");
        let g = BTreeMap::from([
            (ClassVector::new(1, vec![1, 0]), 2),
            (ClassVector::new(1, vec![0, 1]), 1),
            (ClassVector::new(1, vec![-2, 1]), 1),
        ]);
        let ex = euler_from_classes(&g).unwrap();
        assert_eq!(
            ex.closed_form(|i| format!("t{}", i + 1)),
            "(1/(1-t1^-2*t2)) * (1/(1-t2)) * (1/(1-t1))^2"
        );
        assert_eq!(ex.num_factors(), 4);
        assert!(euler_from_classes(&BTreeMap::new()).is_err());
    }

    #[test]
    fn equivariant_small_cases() {
        let one = equivariant_series(1);
        assert_eq!(one.denominator_factors, vec![(e(&[1]), 1)]);
        let two = equivariant_series(2);
        let s = two.expand(&WeightFunctional::new(vec![1, 1]), 2).unwrap();
        let support: Vec<MonoidElement> = s.terms().map(|(k, _)| k.clone()).collect();
        assert_eq!(
            support,
            vec![e(&[0, 0]), e(&[0, 1]), e(&[0, 2]), e(&[1, 0]), e(&[1, 1]), e(&[2, 0])]
        );
        assert!(s.terms().all(|(_, c)| c.is_one()));
    }

    #[test]
    fn pushforward_of_projective_line_points() {
        let classes = [e(&[1]), e(&[1])];
        let w = WeightFunctional::new(vec![1]);
        let ow = orbit_weights(&classes, &w).unwrap();
        let st = equivariant_series(2).expand(&ow, 1).unwrap();
        let j = pushforward_j(&st, &classes, &w, 1).unwrap();
        assert_eq!(j.get(&e(&[0])), big(1));
        assert_eq!(j.get(&e(&[1])), big(2));
        assert_eq!(j.len(), 2);
    }

    #[test]
    fn pushforward_injective_relabels() {
        let classes = [e(&[1, 0]), e(&[0, 1])];
        let w = WeightFunctional::new(vec![1, 1]);
        let st = equivariant_series(2).expand(&orbit_weights(&classes, &w).unwrap(), 3).unwrap();
        let j = pushforward_j(&st, &classes, &w, 3).unwrap();
        let a: Vec<(Vec<i64>, BigInt)> = st.terms().map(|(k, v)| (k.coords().to_vec(), v.clone())).collect();
        let b: Vec<(Vec<i64>, BigInt)> = j.terms().map(|(k, v)| (k.coords().to_vec(), v.clone())).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn pushforward_mismatches() {
        let classes = [e(&[1]), e(&[1])];
        let w = WeightFunctional::new(vec![1]);
        let st = equivariant_series(2).expand(&WeightFunctional::new(vec![1, 2]), 2).unwrap();
        assert!(matches!(
            pushforward_j(&st, &classes, &w, 2),
            Err(SeriesError::OrbitWeightMismatch { index: 1, .. })
        ));
        let st = equivariant_series(2).expand(&WeightFunctional::new(vec![1, 1]), 1).unwrap();
        assert!(matches!(
            pushforward_j(&st, &classes, &w, 2),
            Err(SeriesError::BoundMismatch { .. })
        ));
    }
}
