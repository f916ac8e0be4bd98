//! Torus-invariant divisors, support functions, and graded pieces of the
//! Cox ring as lattice points of polytopes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::grading::{ClassElement, GradingData};
use crate::polyhedra::{integer_points, Row};

/// `D = Σ a_i D_i`, one coefficient per ray.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TorusInvariantDivisor {
    pub coeffs: Vec<i64>,
}

impl TorusInvariantDivisor {
    pub fn new(coeffs: Vec<i64>) -> Self {
        TorusInvariantDivisor { coeffs }
    }

    /// `k · D_i` on a fan with `l` rays.
    pub fn prime(l: usize, i: usize, k: i64) -> Self {
        let mut coeffs = vec![0; l];
        coeffs[i] = k;
        TorusInvariantDivisor { coeffs }
    }

    /// `div(χ^m) = Σ ⟨m, e_i⟩ D_i`.
    pub fn principal(fan: &Fan, m: &[i64]) -> Self {
        let coeffs = fan.rays().iter().map(|e| e.iter().zip(m).map(|(a, b)| a * b).sum()).collect();
        TorusInvariantDivisor { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        TorusInvariantDivisor { coeffs }
    }

    pub fn check_length(&self, fan: &Fan) -> Result<()> {
        if self.coeffs.len() != fan.num_rays() {
            return Err(Error::Length { what: "divisor".into(), expected: fan.num_rays(), found: self.coeffs.len() });
        }
        Ok(())
    }

    pub fn class(&self, grading: &GradingData) -> ClassElement {
        grading.degree_of_vector(&self.coeffs)
    }
}

/// The piecewise-linear function with `h(e_i) = -a_i`, linear on each
/// maximal cone σ where it equals `⟨m_σ, ·⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportFunction {
    pub ray_values: Vec<i64>,
    pub cone_forms: Vec<Vec<BigRational>>,
}

impl SupportFunction {
    pub fn is_cartier(&self) -> bool {
        self.cone_forms.iter().flatten().all(|c| c.is_integer())
    }

    /// Value at an arbitrary point of cone `c`.
    pub fn eval_on_cone(&self, c: usize, y: &[i64]) -> BigRational {
        self.cone_forms[c]
            .iter()
            .zip(y)
            .fold(BigRational::zero(), |acc, (m, &v)| acc + m * BigRational::from(BigInt::from(v)))
    }
}

/// Solves a square rational system by Gauss–Jordan elimination.
pub(crate) fn solve_square(a: &[Vec<i64>], b: &[i64]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let q = |v: i64| BigRational::from(BigInt::from(v));
    let mut m: Vec<Vec<BigRational>> =
        a.iter().zip(b).map(|(row, &rhs)| row.iter().map(|&v| q(v)).chain(std::iter::once(q(rhs))).collect()).collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        let pivot = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v = &*v / &pivot;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &f * p;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

pub fn support_function(fan: &Fan, d: &TorusInvariantDivisor) -> Result<SupportFunction> {
    fan.ensure_complete()?;
    d.check_length(fan)?;
    let ray_values: Vec<i64> = d.coeffs.iter().map(|a| -a).collect();
    let cone_forms = fan
        .max_cones()
        .iter()
        .map(|cone| {
            let rows: Vec<Vec<i64>> = cone.iter().map(|&i| fan.ray(i).to_vec()).collect();
            let rhs: Vec<i64> = cone.iter().map(|&i| ray_values[i]).collect();
            solve_square(&rows, &rhs).expect("maximal cones of a complete simplicial fan are full-dimensional")
        })
        .collect();
    Ok(SupportFunction { ray_values, cone_forms })
}

pub fn is_cartier(fan: &Fan, d: &TorusInvariantDivisor) -> Result<bool> {
    Ok(support_function(fan, d)?.is_cartier())
}

/// Cartier and strictly convex: `⟨m_σ, e⟩ > h(e)` for each maximal σ and
/// each ray `e` outside σ.
pub fn is_ample(fan: &Fan, d: &TorusInvariantDivisor) -> Result<bool> {
    let h = support_function(fan, d)?;
    if !h.is_cartier() {
        return Ok(false);
    }
    for (c, cone) in fan.max_cones().iter().enumerate() {
        for (i, e) in fan.rays().iter().enumerate() {
            if cone.contains(&i) {
                continue;
            }
            if h.eval_on_cone(c, e) <= BigRational::from(BigInt::from(h.ray_values[i])) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `{m ∈ M : ⟨m, e_i⟩ >= -a_i for every ray}`, sorted lexicographically.
pub fn polytope_lattice_points(fan: &Fan, d: &TorusInvariantDivisor, limit: u64) -> Result<Vec<Vec<i64>>> {
    fan.ensure_complete()?;
    d.check_length(fan)?;
    let rows: Vec<Row> = fan
        .rays()
        .iter()
        .zip(&d.coeffs)
        .map(|(e, &a)| e.iter().map(|&v| BigInt::from(v)).chain(std::iter::once(BigInt::from(a))).collect())
        .collect();
    Ok(integer_points(fan.rank(), &rows, limit)?)
}

/// Exponent vectors of all monomials of degree `alpha`, sorted
/// lexicographically.
///
/// One integer solution `a0` of `φ0(a) = α` is translated by the relation
/// lattice: `a = a0 + R c`, and the constraints `a >= 0` cut out a polytope
/// in `c`. It is empty when α is not effective.
pub fn monomials_of_degree(grading: &GradingData, alpha: &ClassElement, limit: u64) -> Result<Vec<Vec<u32>>> {
    let alpha = grading.normalize(alpha)?;
    let a0 = grading.lift(&alpha);
    let r = grading.relations();
    let k = r.cols();
    let rows: Vec<Row> =
        (0..r.rows()).map(|i| r.row(i).iter().cloned().chain(std::iter::once(a0[i].clone())).collect()).collect();
    let points = integer_points(k, &rows, limit)?;
    let mut out = Vec::with_capacity(points.len());
    for c in points {
        let c: Vec<BigInt> = c.into_iter().map(BigInt::from).collect();
        let shift = r.mul_vec(&c);
        let exps = a0
            .iter()
            .zip(&shift)
            .map(|(a, s)| {
                let e = a + s;
                debug_assert!(!e.is_negative());
                e.to_u32().ok_or_else(|| Error::Overflow(e.to_string()))
            })
            .collect::<Result<Vec<u32>>>()?;
        out.push(exps);
    }
    out.sort();
    Ok(out)
}
