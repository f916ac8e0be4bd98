//! Simplicial fans: validity, smoothness and completeness.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::lattice::{rank, smith_normal_form, Matrix};
use crate::polyhedra::System;
use crate::IntMatrix;

/// A single defect found by [`Fan::validate`].
#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FanIssue {
    #[error("lattice rank must be positive")]
    ZeroRank,
    #[error("fan has no maximal cones")]
    NoCones,
    #[error("ray {ray} has {found} coordinates, expected {expected}")]
    RayLength { ray: usize, expected: usize, found: usize },
    #[error("ray {ray} is zero")]
    ZeroRay { ray: usize },
    #[error("ray {ray} is not primitive (gcd {gcd})")]
    NonPrimitiveRay { ray: usize, gcd: i64 },
    #[error("rays {first} and {second} coincide")]
    DuplicateRay { first: usize, second: usize },
    #[error("cone {cone} is empty")]
    EmptyCone { cone: usize },
    #[error("cone {cone} references ray {index}, which does not exist")]
    RayIndexOutOfRange { cone: usize, index: usize },
    #[error("cone {cone} lists ray {index} twice")]
    RepeatedRayInCone { cone: usize, index: usize },
    #[error("cones {first} and {second} coincide")]
    DuplicateCone { first: usize, second: usize },
    #[error("cone {cone} is a face of cone {container}, so it is not maximal")]
    NonMaximalCone { cone: usize, container: usize },
    #[error("cone {cone} is not simplicial (its rays are linearly dependent)")]
    NotSimplicial { cone: usize },
    #[error("ray {ray} belongs to no maximal cone")]
    UnusedRay { ray: usize },
    #[error("cones {first} and {second} meet outside a common face")]
    BadIntersection { first: usize, second: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<FanIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        match self.issues.into_iter().next() {
            None => Ok(()),
            Some(issue) => Err(Error::InvalidFan(issue)),
        }
    }
}

/// Outcome of the smoothness test, with the first non-unimodular cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Smoothness {
    pub smooth: bool,
    pub witness: Option<usize>,
}

/// A fan in `N = Z^rank` given by primitive rays and simplicial maximal cones.
///
/// Ray order fixes the variable order of the Cox ring. Cone index lists are
/// kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fan {
    rank: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

impl Fan {
    /// Builds and validates a fan.
    pub fn new(rank: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        let fan = Fan::unchecked(rank, rays, max_cones);
        fan.validate().into_result()?;
        Ok(fan)
    }

    /// Builds a fan without validation. Operations that need a valid fan
    /// check it themselves.
    pub fn unchecked(rank: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Fan {
        let max_cones = max_cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        Fan { rank, rays, max_cones }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[i64] {
        &self.rays[i]
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    /// `l x d` matrix with the rays as rows; as a map `M -> Z^l` it is
    /// `m ↦ (⟨m, e_1⟩, …, ⟨m, e_l⟩)`.
    pub fn ray_matrix(&self) -> IntMatrix {
        Matrix::from_i64_rows(self.rank, &self.rays)
    }

    fn cone_matrix(&self, cone: &[usize]) -> IntMatrix {
        let rows: Vec<Vec<i64>> = cone.iter().map(|&i| self.rays[i].clone()).collect();
        Matrix::from_i64_rows(self.rank, &rows)
    }

    /// Collects every structural defect. Face-intersection checks only run
    /// once the cheaper checks pass.
    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        if self.rank == 0 {
            issues.push(FanIssue::ZeroRank);
        }
        if self.max_cones.is_empty() {
            issues.push(FanIssue::NoCones);
        }
        let mut seen: BTreeMap<&[i64], usize> = BTreeMap::new();
        for (i, r) in self.rays.iter().enumerate() {
            if r.len() != self.rank {
                issues.push(FanIssue::RayLength { ray: i, expected: self.rank, found: r.len() });
                continue;
            }
            let g = r.iter().fold(0i64, |g, &v| g.gcd(&v));
            if g == 0 {
                issues.push(FanIssue::ZeroRay { ray: i });
            } else if g != 1 {
                issues.push(FanIssue::NonPrimitiveRay { ray: i, gcd: g });
            }
            if let Some(&first) = seen.get(r.as_slice()) {
                issues.push(FanIssue::DuplicateRay { first, second: i });
            } else {
                seen.insert(r, i);
            }
        }
        if !issues.is_empty() {
            return ValidationReport { issues };
        }

        let mut used = vec![false; self.rays.len()];
        let mut cone_seen: BTreeMap<&[usize], usize> = BTreeMap::new();
        for (c, cone) in self.max_cones.iter().enumerate() {
            if cone.is_empty() {
                issues.push(FanIssue::EmptyCone { cone: c });
                continue;
            }
            if let Some(&index) = cone.iter().find(|&&i| i >= self.rays.len()) {
                issues.push(FanIssue::RayIndexOutOfRange { cone: c, index });
                continue;
            }
            if let Some(w) = cone.windows(2).find(|w| w[0] == w[1]) {
                issues.push(FanIssue::RepeatedRayInCone { cone: c, index: w[0] });
                continue;
            }
            for &i in cone {
                used[i] = true;
            }
            if let Some(&first) = cone_seen.get(cone.as_slice()) {
                issues.push(FanIssue::DuplicateCone { first, second: c });
                continue;
            }
            cone_seen.insert(cone, c);
            if rank(&self.cone_matrix(cone)) != cone.len() {
                issues.push(FanIssue::NotSimplicial { cone: c });
            }
        }
        for (ray, u) in used.iter().enumerate() {
            if !u {
                issues.push(FanIssue::UnusedRay { ray });
            }
        }
        if !issues.is_empty() {
            return ValidationReport { issues };
        }

        for i in 0..self.max_cones.len() {
            for j in i + 1..self.max_cones.len() {
                if let Some(issue) = self.intersection_issue(i, j) {
                    issues.push(issue);
                }
            }
        }
        ValidationReport { issues }
    }

    /// Checks that cones `i` and `j` meet in the cone spanned by their
    /// common rays.
    ///
    /// For simplicial cones A and B this fails exactly when some
    /// `Σ λ_a a = Σ μ_b b` with `λ, μ >= 0` puts positive weight on a ray
    /// of A outside B; normalising that weight to 1 gives a rational
    /// feasibility problem, decided by Fourier–Motzkin.
    fn intersection_issue(&self, i: usize, j: usize) -> Option<FanIssue> {
        let a = &self.max_cones[i];
        let b = &self.max_cones[j];
        let bset: BTreeSet<usize> = b.iter().copied().collect();
        let aset: BTreeSet<usize> = a.iter().copied().collect();
        if aset.is_subset(&bset) {
            return Some(FanIssue::NonMaximalCone { cone: i, container: j });
        }
        if bset.is_subset(&aset) {
            return Some(FanIssue::NonMaximalCone { cone: j, container: i });
        }
        let nvars = a.len() + b.len();
        let mut sys = System::new(nvars);
        for k in 0..self.rank {
            let mut row: Vec<BigInt> = a.iter().map(|&r| BigInt::from(self.rays[r][k])).collect();
            row.extend(b.iter().map(|&r| BigInt::from(-self.rays[r][k])));
            row.push(BigInt::from(0));
            sys.add_eq(row);
        }
        for v in 0..nvars {
            let mut row = vec![BigInt::from(0); nvars + 1];
            row[v] = BigInt::from(1);
            sys.add_ineq(row);
        }
        let mut norm: Vec<BigInt> = a.iter().map(|r| BigInt::from(i64::from(!bset.contains(r)))).collect();
        norm.extend(std::iter::repeat_n(BigInt::from(0), b.len()));
        norm.push(BigInt::from(-1));
        sys.add_eq(norm);
        sys.is_feasible().then_some(FanIssue::BadIntersection { first: i, second: j })
    }

    pub fn ensure_valid(&self) -> Result<()> {
        self.validate().into_result()
    }

    /// Every maximal cone is unimodular: its rays extend to a basis of `N`.
    pub fn is_smooth(&self) -> Smoothness {
        for (c, cone) in self.max_cones.iter().enumerate() {
            let snf = smith_normal_form(&self.cone_matrix(cone));
            let unimodular = snf.rank == cone.len() && snf.invariant_factors().iter().all(|d| *d == BigInt::from(1));
            if !unimodular {
                return Smoothness { smooth: false, witness: Some(c) };
            }
        }
        Smoothness { smooth: true, witness: None }
    }

    /// Facet-pairing test: every maximal cone is full-dimensional and each
    /// of its facets lies in exactly two maximal cones.
    pub fn is_complete(&self) -> bool {
        if self.max_cones.is_empty() || self.max_cones.iter().any(|c| c.len() != self.rank) {
            return false;
        }
        let mut facets: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for cone in &self.max_cones {
            for skip in 0..cone.len() {
                let facet: Vec<usize> = cone.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &r)| r).collect();
                *facets.entry(facet).or_default() += 1;
            }
        }
        facets.values().all(|&n| n == 2)
    }

    pub fn ensure_complete(&self) -> Result<()> {
        self.ensure_valid()?;
        if self.is_complete() {
            Ok(())
        } else {
            Err(Error::IncompleteFan)
        }
    }

    pub fn ensure_smooth(&self) -> Result<()> {
        match self.is_smooth().witness {
            None => Ok(()),
            Some(cone) => Err(Error::NotSmooth { cone }),
        }
    }
}

/// Standard fans used throughout tests and the bundled corpus.
pub mod standard {
    use super::Fan;

    /// Projective space `P^n`: rays `e_1, …, e_n, -(e_1 + … + e_n)`.
    pub fn projective_space(n: usize) -> Fan {
        let mut rays: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        rays.push(vec![-1; n]);
        let cones = (0..=n).map(|skip| (0..=n).filter(|&k| k != skip).collect()).collect();
        Fan::unchecked(n, rays, cones)
    }

    /// Weighted projective space `P(q_0, …, q_n)` with `q_0 = 1`:
    /// rays `e_0 = -(q_1 e_1 + … + q_n e_n)`, then `e_1, …, e_n`.
    pub fn weighted_projective_space(weights: &[i64]) -> Fan {
        assert_eq!(weights.first(), Some(&1), "first weight must be 1");
        let n = weights.len() - 1;
        let mut rays = vec![weights[1..].iter().map(|w| -w).collect::<Vec<_>>()];
        rays.extend((0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()));
        let cones = (0..=n).map(|skip| (0..=n).filter(|&k| k != skip).collect()).collect();
        Fan::unchecked(n, rays, cones)
    }

    /// `P^1 × P^1` with rays `(1,0), (-1,0), (0,1), (0,-1)`.
    pub fn p1_x_p1() -> Fan {
        Fan::unchecked(
            2,
            vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]],
            vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]],
        )
    }

    /// Hirzebruch surface `F_n` with rays `(1,n), (-1,0), (0,-1), (0,1)`.
    pub fn hirzebruch(n: i64) -> Fan {
        Fan::unchecked(
            2,
            vec![vec![1, n], vec![-1, 0], vec![0, -1], vec![0, 1]],
            vec![vec![0, 3], vec![1, 3], vec![0, 2], vec![1, 2]],
        )
    }
}
