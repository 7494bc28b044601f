//! Simplicial fans: parsing, validation and cone enumeration.
//!
//! A fan is given by primitive lattice rays and its maximal cones, each cone
//! being a set of ray indices. Faces of a simplicial cone are exactly the
//! subsets of its rays, so every query here is combinatorial once the
//! geometric checks in [`validate_fan`] have passed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::feasibility::{self, Constraint};
use crate::linalg;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("malformed fan file: {0}")]
    Syntax(String),
    #[error("fan dimension must be positive")]
    ZeroDimension,
    #[error("ray {index} has {found} coordinates, expected {expected}")]
    RayDimension {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("ray {index} is zero")]
    ZeroRay { index: usize },
    #[error("ray {index} is not primitive (gcd {gcd})")]
    NonPrimitiveRay { index: usize, gcd: u64 },
    #[error("rays {first} and {second} coincide")]
    DuplicateRay { first: usize, second: usize },
    #[error("maximal cone {cone} refers to ray {index}, but the fan has {rays} rays")]
    ConeIndexOutOfRange {
        cone: usize,
        index: usize,
        rays: usize,
    },
    #[error("maximal cone {cone} lists ray {index} twice")]
    RepeatedIndex { cone: usize, index: usize },
    #[error("maximal cone {cone} has {found} rays; only simplicial cones of dimension {dim} are supported")]
    NonSimplicialCone {
        cone: usize,
        found: usize,
        dim: usize,
    },
    #[error("maximal cones {first} and {second} coincide")]
    DuplicateCone { first: usize, second: usize },
    #[error("ray {index} lies in no maximal cone")]
    UnusedRay { index: usize },
    #[error("fan has no maximal cones")]
    NoCones,
    #[error("cone dimension {requested} out of range 0..={dim}")]
    DimensionOutOfRange { requested: usize, dim: usize },
}

/// A primitive nonzero lattice vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RayVector(Vec<i64>);

impl RayVector {
    pub fn new(coords: Vec<i64>) -> Result<Self, FanError> {
        match linalg::gcd_abs(&coords) {
            0 => Err(FanError::ZeroRay { index: 0 }),
            1 => Ok(RayVector(coords)),
            gcd => Err(FanError::NonPrimitiveRay { index: 0, gcd }),
        }
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

/// A cone of the fan, identified by its strictly increasing ray indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cone(Vec<usize>);

impl Cone {
    /// Builds a cone from ray indices in any order; duplicates are removed.
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        let set: BTreeSet<usize> = indices.into_iter().collect();
        Cone(set.into_iter().collect())
    }

    pub fn rays(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, ray: usize) -> bool {
        self.0.binary_search(&ray).is_ok()
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        self.0.iter().all(|&r| other.contains(r))
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<RayVector>,
    max_cones: Vec<Cone>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FanFile {
    dim: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

impl Fan {
    /// Structural construction: checks bounds, primitivity, duplicates and
    /// that every maximal cone has exactly `dim` rays. Geometry is left to
    /// [`validate_fan`].
    pub fn new(dim: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Self, FanError> {
        if dim == 0 {
            return Err(FanError::ZeroDimension);
        }
        let mut checked = Vec::with_capacity(rays.len());
        let mut seen: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
        for (index, coords) in rays.into_iter().enumerate() {
            if coords.len() != dim {
                return Err(FanError::RayDimension {
                    index,
                    found: coords.len(),
                    expected: dim,
                });
            }
            if let Some(&first) = seen.get(&coords) {
                return Err(FanError::DuplicateRay { first, second: index });
            }
            seen.insert(coords.clone(), index);
            let ray = RayVector::new(coords).map_err(|e| match e {
                FanError::ZeroRay { .. } => FanError::ZeroRay { index },
                FanError::NonPrimitiveRay { gcd, .. } => FanError::NonPrimitiveRay { index, gcd },
                other => other,
            })?;
            checked.push(ray);
        }
        if max_cones.is_empty() {
            return Err(FanError::NoCones);
        }
        let nrays = checked.len();
        let mut cones = Vec::with_capacity(max_cones.len());
        let mut seen_cones: BTreeMap<Cone, usize> = BTreeMap::new();
        let mut used = vec![false; nrays];
        for (ci, indices) in max_cones.into_iter().enumerate() {
            let mut set = BTreeSet::new();
            for &index in &indices {
                if index >= nrays {
                    return Err(FanError::ConeIndexOutOfRange {
                        cone: ci,
                        index,
                        rays: nrays,
                    });
                }
                if !set.insert(index) {
                    return Err(FanError::RepeatedIndex { cone: ci, index });
                }
            }
            if set.len() != dim {
                return Err(FanError::NonSimplicialCone {
                    cone: ci,
                    found: set.len(),
                    dim,
                });
            }
            for &i in &set {
                used[i] = true;
            }
            let cone = Cone(set.into_iter().collect());
            if let Some(&first) = seen_cones.get(&cone) {
                return Err(FanError::DuplicateCone { first, second: ci });
            }
            seen_cones.insert(cone.clone(), ci);
            cones.push(cone);
        }
        if let Some(index) = used.iter().position(|u| !u) {
            return Err(FanError::UnusedRay { index });
        }
        Ok(Fan {
            dim,
            rays: checked,
            max_cones: cones,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[RayVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &RayVector {
        &self.rays[i]
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[Cone] {
        &self.max_cones
    }

    /// Serializes to the JSON fan schema.
    pub fn to_json(&self) -> String {
        let file = FanFile {
            dim: self.dim,
            rays: self.rays.iter().map(|r| r.0.clone()).collect(),
            max_cones: self.max_cones.iter().map(|c| c.0.clone()).collect(),
        };
        serde_json::to_string(&file).expect("fan serializes")
    }

    fn matrix(&self, rays: &[usize]) -> Vec<Vec<i64>> {
        rays.iter().map(|&i| self.rays[i].0.clone()).collect()
    }

    /// Determinant of the matrix whose rows are the given rays (in order).
    pub fn det(&self, rays: &[usize]) -> BigInt {
        linalg::det(&self.matrix(rays))
    }
}

/// Parses the JSON fan schema `{"dim", "rays", "max_cones"}`.
pub fn parse_fan(text: &str) -> Result<Fan, FanError> {
    let file: FanFile = serde_json::from_str(text).map_err(|e| FanError::Syntax(e.to_string()))?;
    Fan::new(file.dim, file.rays, file.max_cones)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// The rays of a maximal cone are linearly dependent.
    Degenerate { cone: Cone },
    /// A maximal cone whose rays do not form a lattice basis.
    NotUnimodular { cone: Cone, det: String },
    /// A codimension-one face that does not border exactly two maximal cones.
    Wall { wall: Cone, incident: Vec<Cone> },
    /// A wall whose two maximal cones lie on the same side of it.
    SameSide { wall: Cone, cones: [Cone; 2] },
    /// Two maximal cones whose intersection is not a common face.
    Overlap { first: Cone, second: Cone },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Degenerate { cone } => write!(f, "cone {cone} has linearly dependent rays"),
            Violation::NotUnimodular { cone, det } => {
                write!(f, "cone {cone} is not smooth: det={det}")
            }
            Violation::Wall { wall, incident } => write!(
                f,
                "wall {wall} borders {} maximal cone(s), expected 2",
                incident.len()
            ),
            Violation::SameSide { wall, cones } => write!(
                f,
                "cones {} and {} lie on the same side of wall {wall}",
                cones[0], cones[1]
            ),
            Violation::Overlap { first, second } => write!(
                f,
                "cones {first} and {second} do not meet in a common face"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub simplicial: bool,
    pub smooth: bool,
    pub complete: bool,
    /// Any two maximal cones meet in a common face.
    pub face_property: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_smooth_complete(&self) -> bool {
        self.simplicial && self.smooth && self.complete && self.face_property
    }
}

/// Runs the geometric checks and reports every violation with a witness.
pub fn validate_fan(fan: &Fan) -> ValidationReport {
    let mut violations = Vec::new();
    let mut simplicial = true;
    let mut smooth = true;
    let dets: Vec<BigInt> = fan.max_cones.iter().map(|c| fan.det(&c.0)).collect();
    for (cone, det) in fan.max_cones.iter().zip(&dets) {
        if det.is_zero() {
            simplicial = false;
            smooth = false;
            violations.push(Violation::Degenerate { cone: cone.clone() });
        } else if !det.abs().is_one() {
            smooth = false;
            violations.push(Violation::NotUnimodular {
                cone: cone.clone(),
                det: det.to_string(),
            });
        }
    }

    // Walls: facets of maximal cones, with the ray opposite the facet.
    let mut walls: BTreeMap<Cone, Vec<(usize, usize)>> = BTreeMap::new();
    for (ci, cone) in fan.max_cones.iter().enumerate() {
        for &opposite in &cone.0 {
            let wall = Cone(cone.0.iter().copied().filter(|&r| r != opposite).collect());
            walls.entry(wall).or_default().push((ci, opposite));
        }
    }
    let mut complete = true;
    for (wall, incident) in &walls {
        if incident.len() != 2 {
            complete = false;
            violations.push(Violation::Wall {
                wall: wall.clone(),
                incident: incident.iter().map(|&(c, _)| fan.max_cones[c].clone()).collect(),
            });
            continue;
        }
        let side = |opposite: usize| {
            let mut rows = wall.0.clone();
            rows.push(opposite);
            fan.det(&rows)
        };
        let (a, b) = (side(incident[0].1), side(incident[1].1));
        if a.is_zero() || b.is_zero() {
            continue;
        }
        if a.is_positive() == b.is_positive() {
            complete = false;
            violations.push(Violation::SameSide {
                wall: wall.clone(),
                cones: [
                    fan.max_cones[incident[0].0].clone(),
                    fan.max_cones[incident[1].0].clone(),
                ],
            });
        }
    }

    let mut face_property = true;
    for i in 0..fan.max_cones.len() {
        for j in i + 1..fan.max_cones.len() {
            if dets[i].is_zero() || dets[j].is_zero() {
                continue;
            }
            if !meet_in_common_face(fan, &fan.max_cones[i], &fan.max_cones[j]) {
                face_property = false;
                violations.push(Violation::Overlap {
                    first: fan.max_cones[i].clone(),
                    second: fan.max_cones[j].clone(),
                });
            }
        }
    }

    ValidationReport {
        simplicial,
        smooth,
        complete,
        face_property,
        violations,
    }
}

/// Decides whether two full-dimensional simplicial cones intersect exactly in
/// the face spanned by their common rays.
///
/// A point `x = W b` (`b >= 0`) of the second cone has coordinates
/// `a = M⁻¹ W b` in the basis of the first cone. The intersection leaves the
/// common face iff some such point has `a >= 0` and positive mass on the
/// first cone's private rays, which is a rational feasibility problem.
fn meet_in_common_face(fan: &Fan, first: &Cone, second: &Cone) -> bool {
    let n = fan.dim;
    let m = linalg::transpose(&linalg::to_rational(&fan.matrix(&first.0)));
    let w = linalg::transpose(&linalg::to_rational(&fan.matrix(&second.0)));
    let minv = linalg::inverse(&m).expect("simplicial cone has invertible ray matrix");
    let coords = linalg::mat_mul(&minv, &w);
    let mut constraints = Vec::new();
    for j in 0..n {
        let mut e = vec![BigRational::zero(); n];
        e[j] = BigRational::one();
        constraints.push(Constraint::new(e, BigRational::zero()));
    }
    for row in &coords {
        constraints.push(Constraint::new(row.clone(), BigRational::zero()));
    }
    let mut private = vec![BigRational::zero(); n];
    for (i, &r) in first.0.iter().enumerate() {
        if !second.contains(r) {
            for j in 0..n {
                private[j] += &coords[i][j];
            }
        }
    }
    constraints.push(Constraint::new(private, BigRational::one()));
    feasibility::solve(n, &constraints).is_none()
}

/// All `d`-dimensional cones, deduplicated, in lexicographic order.
pub fn enumerate_cones(fan: &Fan, d: usize) -> Result<Vec<Cone>, FanError> {
    if d > fan.dim {
        return Err(FanError::DimensionOutOfRange {
            requested: d,
            dim: fan.dim,
        });
    }
    let mut set = BTreeSet::new();
    for cone in &fan.max_cones {
        for subset in subsets(&cone.0, d) {
            set.insert(Cone(subset));
        }
    }
    Ok(set.into_iter().collect())
}

/// True iff the rays jointly span a face of some maximal cone.
pub fn is_cone_of_fan(fan: &Fan, rays: &BTreeSet<usize>) -> bool {
    fan.max_cones
        .iter()
        .any(|c| rays.iter().all(|&r| c.contains(r)))
}

/// Number of cones in each dimension `0..=n`.
pub fn f_vector(fan: &Fan) -> Vec<usize> {
    (0..=fan.dim)
        .map(|d| enumerate_cones(fan, d).map(|c| c.len()).unwrap_or(0))
        .collect()
}

/// h-vector from the f-vector via `∑_i f_i (s-1)^(n-i) = ∑_p h_p s^p`.
pub fn h_vector(f: &[usize]) -> Vec<i64> {
    let n = f.len() - 1;
    let mut h = vec![0i64; n + 1];
    for (i, &fi) in f.iter().enumerate() {
        let k = n - i;
        // (s-1)^k = ∑_j C(k,j) s^j (-1)^(k-j)
        let mut binom = 1i64;
        for j in 0..=k {
            let sign = if (k - j) % 2 == 0 { 1 } else { -1 };
            h[j] += sign * binom * fi as i64;
            binom = binom * (k - j) as i64 / (j + 1) as i64;
        }
    }
    h
}

/// All `k`-element subsets of a sorted slice, in lexicographic order.
pub(crate) fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= items.len() {
        rec(items, k, 0, &mut Vec::with_capacity(k), &mut out);
    }
    out
}
