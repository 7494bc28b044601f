//! Fourier–Motzkin elimination over exact rationals.
//!
//! A system is a list of constraints `a · x >= c`. Variables are eliminated
//! from the last to the first; a witness is recovered by back-substitution,
//! taking at each step the integer closest to zero inside the admissible
//! interval when one exists, and the nearest rational endpoint otherwise.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub rhs: BigRational,
}

impl Constraint {
    pub fn new(coeffs: Vec<BigRational>, rhs: BigRational) -> Self {
        Constraint { coeffs, rhs }
    }

    pub fn from_ints(coeffs: &[i64], rhs: i64) -> Self {
        Constraint {
            coeffs: coeffs
                .iter()
                .map(|&a| BigRational::from_integer(a.into()))
                .collect(),
            rhs: BigRational::from_integer(rhs.into()),
        }
    }

    /// Scales so that the first nonzero coefficient has absolute value one.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|a| !a.is_zero()).map(|a| a.abs()) {
            for a in self.coeffs.iter_mut() {
                *a = &*a / &lead;
            }
            self.rhs = &self.rhs / &lead;
        }
        self
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero) && !self.rhs.is_positive()
    }

    fn is_contradiction(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero) && self.rhs.is_positive()
    }
}

/// Returns a point satisfying every constraint, or `None` if the system is
/// infeasible.
pub(crate) fn solve(nvars: usize, constraints: &[Constraint]) -> Option<Vec<BigRational>> {
    let mut stages: Vec<Vec<Constraint>> = Vec::with_capacity(nvars + 1);
    let mut current = canonical(constraints.iter().cloned())?;
    for k in (0..nvars).rev() {
        stages.push(current.clone());
        current = canonical(eliminate(&current, k).into_iter())?;
    }
    // `stages[nvars - 1 - k]` is the system over x_0..=x_k.
    let mut point = vec![BigRational::zero(); nvars];
    for k in 0..nvars {
        let system = &stages[nvars - 1 - k];
        let mut lo: Option<BigRational> = None;
        let mut hi: Option<BigRational> = None;
        for c in system {
            let a = &c.coeffs[k];
            if a.is_zero() {
                continue;
            }
            let rest = (0..k).fold(c.rhs.clone(), |acc, i| acc - &c.coeffs[i] * &point[i]);
            let bound = rest / a;
            if a.is_positive() {
                if lo.as_ref().map_or(true, |l| bound > *l) {
                    lo = Some(bound);
                }
            } else if hi.as_ref().map_or(true, |h| bound < *h) {
                hi = Some(bound);
            }
        }
        point[k] = pick(lo, hi);
    }
    debug_assert!(constraints.iter().all(|c| satisfied(c, &point)));
    Some(point)
}

pub(crate) fn satisfied(c: &Constraint, point: &[BigRational]) -> bool {
    let lhs = c
        .coeffs
        .iter()
        .zip(point)
        .fold(BigRational::zero(), |acc, (a, x)| acc + a * x);
    lhs >= c.rhs
}

fn pick(lo: Option<BigRational>, hi: Option<BigRational>) -> BigRational {
    let zero = BigRational::zero();
    let candidate = match (&lo, &hi) {
        (None, None) => zero,
        (Some(l), None) => {
            if l.is_positive() {
                l.ceil()
            } else {
                zero
            }
        }
        (None, Some(h)) => {
            if h.is_negative() {
                h.floor()
            } else {
                zero
            }
        }
        (Some(l), Some(h)) => {
            if l.is_positive() {
                l.ceil()
            } else if h.is_negative() {
                h.floor()
            } else {
                zero
            }
        }
    };
    let fits = lo.as_ref().map_or(true, |l| &candidate >= l) && hi.as_ref().map_or(true, |h| &candidate <= h);
    if fits {
        candidate
    } else {
        // The interval holds no integer; take the endpoint nearest zero.
        let l = lo.expect("interval without integer has a lower end");
        let h = hi.expect("interval without integer has an upper end");
        if l.is_positive() {
            l
        } else {
            h
        }
    }
}

fn canonical(constraints: impl Iterator<Item = Constraint>) -> Option<Vec<Constraint>> {
    let mut set = BTreeSet::new();
    for c in constraints {
        let c = c.normalized();
        if c.is_contradiction() {
            return None;
        }
        if !c.is_trivial() {
            set.insert(c);
        }
    }
    Some(set.into_iter().collect())
}

fn eliminate(system: &[Constraint], k: usize) -> Vec<Constraint> {
    let mut out = Vec::new();
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for c in system {
        let a = &c.coeffs[k];
        if a.is_zero() {
            out.push(c.clone());
        } else if a.is_positive() {
            pos.push(c);
        } else {
            neg.push(c);
        }
    }
    for p in &pos {
        for n in &neg {
            let fp = -&n.coeffs[k];
            let fn_ = p.coeffs[k].clone();
            let coeffs = p
                .coeffs
                .iter()
                .zip(&n.coeffs)
                .map(|(a, b)| a * &fp + b * &fn_)
                .collect();
            let rhs = &p.rhs * &fp + &n.rhs * &fn_;
            out.push(Constraint::new(coeffs, rhs));
        }
    }
    out
}

/// Least common multiple of the denominators of a rational vector.
pub(crate) fn common_denominator(v: &[BigRational]) -> num_bigint::BigInt {
    v.iter().fold(num_bigint::BigInt::one(), |acc, x| {
        num_integer::Integer::lcm(&acc, x.denom())
    })
}
