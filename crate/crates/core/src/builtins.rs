//! Fans of the standard example families: projective spaces, products of two
//! projective spaces, the blow-up of `P^n` at a torus-fixed point and the
//! Hirzebruch surfaces.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::fan::{subsets, Fan};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuiltinError {
    #[error("{family} requires {requirement}, got {got}")]
    InvalidParameter {
        family: &'static str,
        requirement: &'static str,
        got: i64,
    },
    #[error("unknown builtin fan '{0}' (expected pn N, product N M, blowup-pn N or hirzebruch A)")]
    Unknown(String),
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn neg_sum(n: usize, range: std::ops::Range<usize>) -> Vec<i64> {
    let mut v = vec![0; n];
    for i in range {
        v[i] = -1;
    }
    v
}

/// `P^n`: rays `e_1..e_n, -∑e_i`; maximal cones are all `n`-subsets.
pub fn gen_pn(n: i64) -> Result<Fan, BuiltinError> {
    if n < 1 {
        return Err(BuiltinError::InvalidParameter {
            family: "pn",
            requirement: "n >= 1",
            got: n,
        });
    }
    let n = n as usize;
    let mut rays: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i)).collect();
    rays.push(neg_sum(n, 0..n));
    let all: Vec<usize> = (0..=n).collect();
    Ok(Fan::new(n, rays, subsets(&all, n)).expect("P^n fan is well formed"))
}

/// `P^n × P^m` with rays `e_1..e_{n+m}`, `-∑_{i≤n} e_i`, `-∑_{i>n} e_i`.
pub fn gen_product_pn_pm(n: i64, m: i64) -> Result<Fan, BuiltinError> {
    for v in [n, m] {
        if v < 1 {
            return Err(BuiltinError::InvalidParameter {
                family: "product",
                requirement: "n, m >= 1",
                got: v,
            });
        }
    }
    let (n, m) = (n as usize, m as usize);
    let d = n + m;
    let mut rays: Vec<Vec<i64>> = (0..d).map(|i| unit(d, i)).collect();
    rays.push(neg_sum(d, 0..n));
    rays.push(neg_sum(d, n..d));
    let first: Vec<usize> = (0..n).chain([d]).collect();
    let second: Vec<usize> = (n..d).chain([d + 1]).collect();
    let mut cones = Vec::new();
    for a in subsets(&first, n) {
        for b in subsets(&second, m) {
            cones.push(a.iter().chain(&b).copied().collect());
        }
    }
    Ok(Fan::new(d, rays, cones).expect("product fan is well formed"))
}

/// Blow-up of `P^n` at the fixed point of the cone spanned by `e_2..e_{n+1}`,
/// realized as the stellar subdivision of that cone at `e_{n+2} = -e_1`.
pub fn gen_blowup_pn(n: i64) -> Result<Fan, BuiltinError> {
    if n < 2 {
        return Err(BuiltinError::InvalidParameter {
            family: "blowup-pn",
            requirement: "n >= 2",
            got: n,
        });
    }
    let n = n as usize;
    let mut rays: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i)).collect();
    rays.push(neg_sum(n, 0..n));
    let mut minus_e1 = vec![0; n];
    minus_e1[0] = -1;
    rays.push(minus_e1);
    let all: Vec<usize> = (0..=n).collect();
    let removed: Vec<usize> = (1..=n).collect();
    let mut cones: Vec<Vec<usize>> = subsets(&all, n).into_iter().filter(|c| *c != removed).collect();
    for j in 1..=n {
        let mut c: Vec<usize> = removed.iter().copied().filter(|&r| r != j).collect();
        c.push(n + 1);
        cones.push(c);
    }
    Ok(Fan::new(n, rays, cones).expect("blow-up fan is well formed"))
}

/// Hirzebruch surface: rays `(1,0), (0,1), (-1,a), (0,-1)`.
///
/// `a = 1` is accepted: it is the blow-up of the plane at a point, still a
/// smooth projective surface.
pub fn gen_hirzebruch(a: i64) -> Result<Fan, BuiltinError> {
    if a < 1 {
        return Err(BuiltinError::InvalidParameter {
            family: "hirzebruch",
            requirement: "a >= 1",
            got: a,
        });
    }
    let rays = vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]];
    let cones = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]];
    Ok(Fan::new(2, rays, cones).expect("Hirzebruch fan is well formed"))
}

/// A named builtin fan with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    Pn(i64),
    Product(i64, i64),
    BlowupPn(i64),
    Hirzebruch(i64),
}

impl Builtin {
    pub fn build(self) -> Result<Fan, BuiltinError> {
        match self {
            Builtin::Pn(n) => gen_pn(n),
            Builtin::Product(n, m) => gen_product_pn_pm(n, m),
            Builtin::BlowupPn(n) => gen_blowup_pn(n),
            Builtin::Hirzebruch(a) => gen_hirzebruch(a),
        }
    }

    /// Every builtin of ambient dimension at most three used by the test suites.
    pub fn small() -> Vec<Builtin> {
        vec![
            Builtin::Pn(1),
            Builtin::Pn(2),
            Builtin::Pn(3),
            Builtin::Product(1, 1),
            Builtin::Product(2, 1),
            Builtin::Product(1, 2),
            Builtin::BlowupPn(2),
            Builtin::BlowupPn(3),
            Builtin::Hirzebruch(1),
            Builtin::Hirzebruch(2),
            Builtin::Hirzebruch(3),
        ]
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Pn(n) => write!(f, "pn {n}"),
            Builtin::Product(n, m) => write!(f, "product {n} {m}"),
            Builtin::BlowupPn(n) => write!(f, "blowup-pn {n}"),
            Builtin::Hirzebruch(a) => write!(f, "hirzebruch {a}"),
        }
    }
}

impl FromStr for Builtin {
    type Err = BuiltinError;

    /// Accepts `pn 2`, `pn:2`, `product 2 1`, `product:2,1`, `blowup-pn 3`,
    /// `hirzebruch 2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s
            .split(|c: char| c.is_whitespace() || c == ':' || c == ',')
            .filter(|p| !p.is_empty())
            .collect();
        let unknown = || BuiltinError::Unknown(s.to_string());
        let num = |i: usize| -> Result<i64, BuiltinError> {
            parts.get(i).ok_or_else(unknown)?.parse().map_err(|_| unknown())
        };
        let b = match parts.first().copied() {
            Some("pn") if parts.len() == 2 => Builtin::Pn(num(1)?),
            Some("product") if parts.len() == 3 => Builtin::Product(num(1)?, num(2)?),
            Some("blowup-pn") if parts.len() == 2 => Builtin::BlowupPn(num(1)?),
            Some("hirzebruch") if parts.len() == 2 => Builtin::Hirzebruch(num(1)?),
            _ => return Err(unknown()),
        };
        Ok(b)
    }
}

/// Fans of [`Builtin::small`].
pub fn all_small() -> Vec<Fan> {
    Builtin::small()
        .into_iter()
        .map(|b| b.build().expect("builtin parameters are valid"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{enumerate_cones, is_cone_of_fan, validate_fan};
    use std::collections::BTreeSet;

    #[test]
    fn projective_spaces() {
        let p1 = gen_pn(1).unwrap();
        assert_eq!((p1.num_rays(), p1.max_cones().len()), (2, 2));
        let p2 = gen_pn(2).unwrap();
        assert_eq!(
            p2.rays().iter().map(|r| r.coords().to_vec()).collect::<Vec<_>>(),
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]]
        );
        let p3 = gen_pn(3).unwrap();
        assert_eq!((p3.num_rays(), p3.max_cones().len()), (4, 4));
        assert!(gen_pn(0).is_err());
    }

    #[test]
    fn products() {
        let f = gen_product_pn_pm(1, 1).unwrap();
        assert_eq!((f.num_rays(), f.max_cones().len()), (4, 4));
        let f = gen_product_pn_pm(2, 1).unwrap();
        assert_eq!((f.num_rays(), f.max_cones().len()), (5, 6));
        let g = gen_product_pn_pm(1, 2).unwrap();
        assert_eq!((g.num_rays(), g.max_cones().len()), (5, 6));
        assert!(gen_product_pn_pm(0, 1).is_err());
    }

    #[test]
    fn blowups() {
        let f = gen_blowup_pn(2).unwrap();
        assert_eq!((f.num_rays(), f.max_cones().len()), (4, 4));
        assert!(validate_fan(&f).is_smooth_complete());
        assert!(!is_cone_of_fan(&f, &BTreeSet::from([0, 3])));
        let f = gen_blowup_pn(3).unwrap();
        assert_eq!(f.max_cones().len(), 6);
        assert!(!is_cone_of_fan(&f, &BTreeSet::from([0, 4])));
        assert!(gen_blowup_pn(1).is_err());
    }

    #[test]
    fn hirzebruch() {
        let f = gen_hirzebruch(2).unwrap();
        assert!(validate_fan(&f).is_smooth_complete());
        assert_eq!(enumerate_cones(&f, 2).unwrap().len(), 4);
        assert!(validate_fan(&gen_hirzebruch(1).unwrap()).is_smooth_complete());
        assert!(gen_hirzebruch(0).is_err());
    }

    #[test]
    fn maximal_cone_counts() {
        for n in 1..=5 {
            assert_eq!(gen_pn(n).unwrap().max_cones().len() as i64, n + 1);
        }
        for (n, m) in [(1, 1), (2, 1), (2, 2), (3, 1)] {
            assert_eq!(
                gen_product_pn_pm(n, m).unwrap().max_cones().len() as i64,
                (n + 1) * (m + 1)
            );
        }
        for n in 2..=4 {
            assert_eq!(gen_blowup_pn(n).unwrap().max_cones().len() as i64, 2 * n);
        }
    }

    #[test]
    fn all_builtins_validate() {
        for b in Builtin::small()
            .into_iter()
            .chain([Builtin::Pn(4), Builtin::Pn(5), Builtin::Product(2, 2), Builtin::BlowupPn(4)])
        {
            let r = validate_fan(&b.build().unwrap());
            assert!(r.is_smooth_complete(), "{b}: {:?}", r.violations);
        }
    }

    #[test]
    fn parse_spec() {
        assert_eq!("pn 2".parse(), Ok(Builtin::Pn(2)));
        assert_eq!("product:2,1".parse(), Ok(Builtin::Product(2, 1)));
        assert_eq!("blowup-pn 3".parse(), Ok(Builtin::BlowupPn(3)));
        assert_eq!("hirzebruch 2".parse(), Ok(Builtin::Hirzebruch(2)));
        assert!("pn".parse::<Builtin>().is_err());
        assert!("torus 2".parse::<Builtin>().is_err());
        assert_eq!(Builtin::Product(2, 1).to_string().parse(), Ok(Builtin::Product(2, 1)));
    }
}
