//! Cohomology of a smooth complete toric variety from its fan.
//!
//! `H*(X) = Q[t_1..t_K] / (I_SR + I_lin)`, where `I_SR` is generated by the
//! square-free monomials of the minimal non-faces and `I_lin` by the forms
//! `∑_j <e_i*, v_j> t_j`. The orbit closure of a cone `σ` has class
//! `∏_{i∈σ} t_i`; classes are compared through their normal forms.
//!
//! Normal forms live in the span of the degrevlex standard monomials, which
//! is a `Q`-basis of each graded piece but not always a `Z`-basis: on the
//! Hirzebruch surface with even `a` the point class is `t3*t4 = t4^2 / 2`.
//! Integer coordinates are therefore taken in the Hermite basis of the lattice
//! spanned by the orbit classes of that degree. When the standard monomials
//! are integral classes this basis is the standard-monomial basis up to the
//! sign of each element, chosen so that orbit classes are not all negative.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::fan::{self, Cone, Fan, FanError, ValidationReport};
use crate::feasibility;
use crate::linalg;
use crate::polyring::{self, GroebnerBasis, Monomial, Polynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("fan is not smooth and complete ({} violation(s))", .0.violations.len())]
    InvalidFan(Box<ValidationReport>),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("codimension {p} out of range 0..={dim}")]
    CodimensionOutOfRange { p: usize, dim: usize },
    #[error("cone {cone} is not a cone of the fan")]
    NotACone { cone: Cone },
    #[error("class {class} has non-integral coordinate {value}")]
    NonIntegralCoordinate { class: String, value: String },
    #[error("class {class} has coordinate {value}, which does not fit in 64 bits")]
    CoordinateOverflow { class: String, value: String },
    #[error("orbit classes of codimension {p} span rank {rank}, expected {expected}")]
    RankDeficient { p: usize, rank: usize, expected: usize },
}

/// Integer coordinates of a degree-`p` class in the class basis of `H^{2p}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ClassVector {
    pub degree: usize,
    pub coords: Vec<i64>,
}

impl ClassVector {
    pub fn new(degree: usize, coords: Vec<i64>) -> Self {
        ClassVector { degree, coords }
    }
}

impl fmt::Display for ClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Options for [`build_presentation_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PresentationOptions {
    /// Solve the linear relations for the rays of the first maximal cone and
    /// substitute them into the monomial generators before running Buchberger.
    pub eliminate_linear: bool,
}

#[derive(Clone, Debug)]
pub struct CohomologyPresentation {
    fan: Fan,
    sr_generators: Vec<Polynomial>,
    linear_generators: Vec<Polynomial>,
    gb: GroebnerBasis,
    basis_by_degree: Vec<Vec<Monomial>>,
    lattice_by_degree: Vec<ClassLattice>,
}

/// Echelon `Z`-basis of the orbit-class lattice, rows in standard-monomial
/// coordinates.
#[derive(Clone, Debug)]
struct ClassLattice {
    rows: Vec<Vec<BigRational>>,
    pivots: Vec<usize>,
}

impl CohomologyPresentation {
    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    /// Monomials of the minimal non-faces.
    pub fn sr_generators(&self) -> &[Polynomial] {
        &self.sr_generators
    }

    pub fn linear_generators(&self) -> &[Polynomial] {
        &self.linear_generators
    }

    pub fn groebner_basis(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn nvars(&self) -> usize {
        self.fan.num_rays()
    }

    pub fn dim(&self) -> usize {
        self.fan.dim()
    }

    /// Standard-monomial basis of `H^{2p}`, in descending degrevlex order.
    pub fn basis(&self, p: usize) -> Result<&[Monomial], CohomologyError> {
        self.basis_by_degree
            .get(p)
            .map(Vec::as_slice)
            .ok_or(CohomologyError::CodimensionOutOfRange { p, dim: self.dim() })
    }

    /// Coordinates of a homogeneous degree-`p` polynomial in the
    /// standard-monomial basis.
    pub fn monomial_coordinates(&self, poly: &Polynomial, p: usize) -> Result<Vec<BigRational>, CohomologyError> {
        monomial_coordinates(&self.gb, &self.basis_by_degree, poly, p)
    }

    /// The `Z`-basis of `H^{2p}` in which [`ClassVector`]s are expressed, as
    /// polynomials in the standard monomials. Its `i`-th element is the class
    /// labeled `t{i+1}` in printed output.
    pub fn class_basis(&self, p: usize) -> Result<Vec<Polynomial>, CohomologyError> {
        let basis = self.basis(p)?;
        Ok(self.lattice_by_degree[p]
            .rows
            .iter()
            .map(|row| {
                row.iter().zip(basis).fold(Polynomial::zero(self.nvars()), |acc, (c, m)| {
                    &acc + &Polynomial::term(m.clone(), c.clone())
                })
            })
            .collect())
    }
}

fn monomial_coordinates(
    gb: &GroebnerBasis,
    bases: &[Vec<Monomial>],
    poly: &Polynomial,
    p: usize,
) -> Result<Vec<BigRational>, CohomologyError> {
    let basis = bases
        .get(p)
        .ok_or(CohomologyError::CodimensionOutOfRange { p, dim: bases.len() - 1 })?;
    let nf = polyring::normal_form(poly, gb).expect("same ring");
    Ok(polyring::coordinates(&nf, basis).expect("homogeneous normal form lies in the degree-p span"))
}

fn class_lattice(
    fan: &Fan,
    gb: &GroebnerBasis,
    bases: &[Vec<Monomial>],
    p: usize,
) -> Result<ClassLattice, CohomologyError> {
    let k = fan.num_rays();
    let mut vectors = Vec::new();
    for cone in fan::enumerate_cones(fan, p)? {
        let poly = Polynomial::monomial(Monomial::product_of(k, cone.rays()));
        vectors.push(monomial_coordinates(gb, bases, &poly, p)?);
    }
    let denom = feasibility::common_denominator(&vectors.concat());
    let scale = BigRational::from_integer(denom.clone());
    let ints: Vec<Vec<BigInt>> = vectors
        .iter()
        .map(|v| v.iter().map(|x| (x * &scale).to_integer()).collect())
        .collect();
    let (rows, pivots) = linalg::hermite_rows(ints);
    let expected = bases[p].len();
    if rows.len() != expected {
        return Err(CohomologyError::RankDeficient {
            p,
            rank: rows.len(),
            expected,
        });
    }
    let mut rows: Vec<Vec<BigRational>> = rows
        .into_iter()
        .map(|r| r.into_iter().map(|x| BigRational::new(x, denom.clone())).collect())
        .collect();
    // Orient each basis vector so that orbit classes are not all negative on it.
    let coords: Vec<Vec<BigRational>> = vectors
        .iter()
        .map(|v| linalg::echelon_coordinates(&rows, &pivots, v).expect("orbit class in its own lattice"))
        .collect();
    for (i, row) in rows.iter_mut().enumerate() {
        if coords.iter().all(|c| !c[i].is_positive()) {
            for x in row.iter_mut() {
                *x = -&*x;
            }
        }
    }
    Ok(ClassLattice { rows, pivots })
}

/// Builds the presentation for a fan that must validate as smooth and complete.
pub fn build_presentation(fan: &Fan) -> Result<CohomologyPresentation, CohomologyError> {
    build_presentation_with(fan, PresentationOptions::default())
}

pub fn build_presentation_with(
    fan: &Fan,
    options: PresentationOptions,
) -> Result<CohomologyPresentation, CohomologyError> {
    let report = fan::validate_fan(fan);
    if !report.is_smooth_complete() {
        return Err(CohomologyError::InvalidFan(Box::new(report)));
    }
    let k = fan.num_rays();
    let n = fan.dim();
    let sr_generators: Vec<Polynomial> = minimal_non_faces(fan)
        .into_iter()
        .map(|s| Polynomial::monomial(Monomial::product_of(k, &s)))
        .collect();
    let linear_generators: Vec<Polynomial> = (0..n)
        .map(|i| {
            let coeffs: Vec<i64> = fan.rays().iter().map(|r| r.coords()[i]).collect();
            Polynomial::linear(&coeffs)
        })
        .collect();

    let gens: Vec<Polynomial> = if options.eliminate_linear {
        eliminated_generators(fan, &sr_generators)
    } else {
        sr_generators.iter().chain(&linear_generators).cloned().collect()
    };
    let gb = polyring::buchberger(&gens);
    let basis_by_degree: Vec<Vec<Monomial>> = (0..=n)
        .map(|d| polyring::standard_monomials(&gb, d as u32))
        .collect();
    let lattice_by_degree = (0..=n)
        .map(|p| class_lattice(fan, &gb, &basis_by_degree, p))
        .collect::<Result<_, _>>()?;
    Ok(CohomologyPresentation {
        fan: fan.clone(),
        sr_generators,
        linear_generators,
        gb,
        basis_by_degree,
        lattice_by_degree,
    })
}

/// Ray sets that span no cone while all their proper subsets do.
fn minimal_non_faces(fan: &Fan) -> Vec<Vec<usize>> {
    let all: Vec<usize> = (0..fan.num_rays()).collect();
    let mut out = Vec::new();
    for size in 2..=fan.dim() + 1 {
        for s in fan::subsets(&all, size) {
            let set: BTreeSet<usize> = s.iter().copied().collect();
            if fan::is_cone_of_fan(fan, &set) {
                continue;
            }
            let minimal = s.iter().all(|x| {
                let mut smaller = set.clone();
                smaller.remove(x);
                fan::is_cone_of_fan(fan, &smaller)
            });
            if minimal {
                out.push(s);
            }
        }
    }
    out
}

/// Generators of the same ideal with the rays of the first maximal cone
/// solved for: `t_σ = -A_σ⁻¹ A_rest t_rest`.
fn eliminated_generators(fan: &Fan, sr: &[Polynomial]) -> Vec<Polynomial> {
    let k = fan.num_rays();
    let n = fan.dim();
    let sigma = fan.max_cones()[0].rays().to_vec();
    let rest: Vec<usize> = (0..k).filter(|j| !sigma.contains(j)).collect();
    let column = |j: usize| -> Vec<i64> { fan.ray(j).coords().to_vec() };
    let a_sigma = linalg::transpose(&linalg::to_rational(&sigma.iter().map(|&j| column(j)).collect::<Vec<_>>()));
    let a_rest = linalg::transpose(&linalg::to_rational(&rest.iter().map(|&j| column(j)).collect::<Vec<_>>()));
    let inv = linalg::inverse(&a_sigma).expect("smooth cone is invertible");
    let solved = if rest.is_empty() {
        vec![Vec::new(); n]
    } else {
        linalg::mat_mul(&inv, &a_rest)
    };
    let mut images: Vec<Polynomial> = (0..k).map(|j| Polynomial::var(k, j)).collect();
    let mut linear = Vec::with_capacity(n);
    for (row, &var) in sigma.iter().enumerate() {
        let mut expr = Polynomial::zero(k);
        for (col, &r) in rest.iter().enumerate() {
            let c = -solved[row][col].clone();
            if !c.is_zero() {
                expr = &expr + &Polynomial::var(k, r).scale(&c);
            }
        }
        linear.push(&Polynomial::var(k, var) - &expr);
        images[var] = expr;
    }
    let substituted = sr.iter().map(|g| g.substitute(&images));
    linear.into_iter().chain(substituted).collect()
}

/// Rank of `H^{2p}`.
pub fn cohomology_rank(pres: &CohomologyPresentation, p: usize) -> Result<usize, CohomologyError> {
    pres.basis(p).map(<[Monomial]>::len)
}

/// The equivariant class `∏_{i∈σ} t_i` of the orbit closure of `σ`.
pub fn orbit_monomial(pres: &CohomologyPresentation, cone: &Cone) -> Monomial {
    Monomial::product_of(pres.nvars(), cone.rays())
}

/// Class of the orbit closure of `cone` in the degree-`dim σ` basis.
pub fn orbit_class(pres: &CohomologyPresentation, cone: &Cone) -> Result<ClassVector, CohomologyError> {
    if cone.rays().iter().any(|&r| r >= pres.nvars())
        || !fan::is_cone_of_fan(&pres.fan, &cone.rays().iter().copied().collect())
    {
        return Err(CohomologyError::NotACone { cone: cone.clone() });
    }
    class_of(pres, &Polynomial::monomial(orbit_monomial(pres, cone)), cone.dim())
}

/// Integer coordinates of a homogeneous degree-`p` class in the class basis.
pub fn class_of(pres: &CohomologyPresentation, poly: &Polynomial, p: usize) -> Result<ClassVector, CohomologyError> {
    let std = pres.monomial_coordinates(poly, p)?;
    let lattice = &pres.lattice_by_degree[p];
    let coords = linalg::echelon_coordinates(&lattice.rows, &lattice.pivots, &std)
        .expect("class basis spans the graded piece");
    let coords = coords
        .iter()
        .map(|c| {
            let z: BigInt = polyring::as_integer(c).ok_or_else(|| CohomologyError::NonIntegralCoordinate {
                class: poly.to_string(),
                value: c.to_string(),
            })?;
            z.to_i64().ok_or_else(|| CohomologyError::CoordinateOverflow {
                class: poly.to_string(),
                value: z.to_string(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ClassVector::new(p, coords))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitRow {
    pub cone: Cone,
    #[serde(serialize_with = "serialize_monomial")]
    pub monomial: Monomial,
    pub class: ClassVector,
}

fn serialize_monomial<S: serde::Serializer>(m: &Monomial, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&m.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitClassTable {
    pub p: usize,
    pub rows: Vec<OrbitRow>,
    /// Number of `p`-dimensional cones per distinct class.
    pub grouped: BTreeMap<ClassVector, usize>,
}

impl OrbitClassTable {
    pub fn num_orbits(&self) -> usize {
        self.rows.len()
    }

    /// Class vectors of the rows, in cone order.
    pub fn classes(&self) -> Vec<ClassVector> {
        self.rows.iter().map(|r| r.class.clone()).collect()
    }
}

/// One row per `p`-cone, plus the grouping of cones by class.
pub fn orbit_class_table(pres: &CohomologyPresentation, p: usize) -> Result<OrbitClassTable, CohomologyError> {
    if p > pres.dim() {
        return Err(CohomologyError::CodimensionOutOfRange { p, dim: pres.dim() });
    }
    let mut rows = Vec::new();
    let mut grouped = BTreeMap::new();
    for cone in fan::enumerate_cones(&pres.fan, p)? {
        let class = orbit_class(pres, &cone)?;
        *grouped.entry(class.clone()).or_insert(0) += 1;
        rows.push(OrbitRow {
            monomial: orbit_monomial(pres, &cone),
            cone,
            class,
        });
    }
    Ok(OrbitClassTable { p, rows, grouped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    fn lin(c: &[i64]) -> Polynomial {
        Polynomial::linear(c)
    }

    #[test]
    fn projective_plane_presentation() {
        let pres = build_presentation(&builtins::gen_pn(2).unwrap()).unwrap();
        assert_eq!(
            pres.sr_generators(),
            &[Polynomial::monomial(Monomial::new(vec![1, 1, 1]))]
        );
        assert_eq!(pres.linear_generators(), &[lin(&[1, 0, -1]), lin(&[0, 1, -1])]);
        let ranks: Vec<usize> = (0..=2).map(|p| cohomology_rank(&pres, p).unwrap()).collect();
        assert_eq!(ranks, vec![1, 1, 1]);
        assert_eq!(pres.basis(1).unwrap(), &[Monomial::var(3, 2)]);
        assert!(matches!(
            cohomology_rank(&pres, 3),
            Err(CohomologyError::CodimensionOutOfRange { p: 3, dim: 2 })
        ));
    }

    #[test]
    fn hirzebruch_presentation() {
        for a in 1..=3 {
            let pres = build_presentation(&builtins::gen_hirzebruch(a).unwrap()).unwrap();
            let sr: Vec<Monomial> = pres
                .sr_generators()
                .iter()
                .map(|g| g.leading_monomial().unwrap().clone())
                .collect();
            assert_eq!(sr, vec![Monomial::new(vec![1, 0, 1, 0]), Monomial::new(vec![0, 1, 0, 1])]);
            assert_eq!(pres.linear_generators(), &[lin(&[1, 0, -1, 0]), lin(&[0, 1, a, -1])]);
            assert_eq!(pres.basis(1).unwrap(), &[Monomial::var(4, 2), Monomial::var(4, 3)]);
            let class = |r: usize| orbit_class(&pres, &Cone::new([r])).unwrap().coords;
            assert_eq!(class(0), vec![1, 0]);
            assert_eq!(class(2), vec![1, 0]);
            assert_eq!(class(1), vec![-a, 1]);
            assert_eq!(class(3), vec![0, 1]);
        }
    }

    #[test]
    fn blowup_linear_relations() {
        // s2 ~ s3 and s1 ~ s3 + s4 for the blow-up of the plane.
        let pres = build_presentation(&builtins::gen_blowup_pn(2).unwrap()).unwrap();
        let k = 4;
        let class = |p: &Polynomial| class_of(&pres, p, 1).unwrap();
        let s = |i: usize| Polynomial::var(k, i);
        assert_eq!(class(&s(1)), class(&s(2)));
        assert_eq!(class(&s(0)), class(&(&s(2) + &s(3))));
        assert_ne!(class(&s(2)), class(&s(3)));
    }

    #[test]
    fn orbit_classes_of_projective_plane() {
        let pres = build_presentation(&builtins::gen_pn(2).unwrap()).unwrap();
        for r in 0..3 {
            assert_eq!(orbit_class(&pres, &Cone::new([r])).unwrap().coords, vec![1]);
        }
        let table = orbit_class_table(&pres, 1).unwrap();
        assert_eq!(table.grouped, BTreeMap::from([(ClassVector::new(1, vec![1]), 3)]));
        assert!(matches!(
            orbit_class(&pres, &Cone::new([0, 1, 2])),
            Err(CohomologyError::NotACone { .. })
        ));
    }

    #[test]
    fn hirzebruch_tables() {
        let pres = build_presentation(&builtins::gen_hirzebruch(2).unwrap()).unwrap();
        let t1 = orbit_class_table(&pres, 1).unwrap();
        assert_eq!(
            t1.grouped,
            BTreeMap::from([
                (ClassVector::new(1, vec![1, 0]), 2),
                (ClassVector::new(1, vec![0, 1]), 1),
                (ClassVector::new(1, vec![-2, 1]), 1),
            ])
        );
        let t2 = orbit_class_table(&pres, 2).unwrap();
        assert_eq!(t2.grouped, BTreeMap::from([(ClassVector::new(2, vec![1]), 4)]));
        // The point class is t3*t4 = t4^2/2 in the standard monomials.
        let point = pres.class_basis(2).unwrap();
        assert_eq!(point.len(), 1);
        let t3t4 = Polynomial::monomial(Monomial::new(vec![0, 0, 1, 1]));
        assert_eq!(point[0], polyring::normal_form(&t3t4, pres.groebner_basis()).unwrap());
        assert_eq!(pres.basis(2).unwrap(), &[Monomial::new(vec![0, 0, 0, 2])]);
        let t0 = orbit_class_table(&pres, 0).unwrap();
        assert_eq!(t0.grouped, BTreeMap::from([(ClassVector::new(0, vec![1]), 1)]));
    }

    #[test]
    fn rejects_invalid_fan() {
        let fan = Fan::new(2, vec![vec![1, 0], vec![1, 2]], vec![vec![0, 1]]).unwrap();
        assert!(matches!(
            build_presentation(&fan),
            Err(CohomologyError::InvalidFan(_))
        ));
    }

    #[test]
    fn elimination_prepass_gives_same_basis() {
        for fan in builtins::all_small() {
            let plain = build_presentation(&fan).unwrap();
            let elim = build_presentation_with(&fan, PresentationOptions { eliminate_linear: true }).unwrap();
            assert_eq!(plain.groebner_basis(), elim.groebner_basis());
            for p in 0..=fan.dim() {
                assert_eq!(cohomology_rank(&plain, p).unwrap(), cohomology_rank(&elim, p).unwrap());
            }
        }
    }
}
