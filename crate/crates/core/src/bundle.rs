//! Projectivized split bundles `P(L_1 ⊕ … ⊕ L_r)` over complete simplicial
//! toric varieties, and their Picard group in the form `Cl(X) ⊕ Z`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::divisor::TorusInvariantDivisor;
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::grading::{class_group, ClassElement, GradingData};
use crate::lattice::Matrix;
use crate::ClassGroup;

/// `E = L_1 ⊕ … ⊕ L_r` given by torus-invariant divisors, with their
/// classes `α_j` in `Cl(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleSpec {
    divisors: Vec<TorusInvariantDivisor>,
    classes: Vec<ClassElement>,
}

impl BundleSpec {
    pub fn new(fan: &Fan, divisors: Vec<TorusInvariantDivisor>) -> Result<BundleSpec> {
        let grading = class_group(fan)?;
        Self::with_grading(fan, &grading, divisors)
    }

    pub fn with_grading(fan: &Fan, grading: &GradingData, divisors: Vec<TorusInvariantDivisor>) -> Result<BundleSpec> {
        if divisors.len() < 2 {
            return Err(Error::BundleRank(divisors.len()));
        }
        for d in &divisors {
            d.check_length(fan)?;
        }
        let classes = divisors.iter().map(|d| d.class(grading)).collect();
        Ok(BundleSpec { divisors, classes })
    }

    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    pub fn divisors(&self) -> &[TorusInvariantDivisor] {
        &self.divisors
    }

    pub fn classes(&self) -> &[ClassElement] {
        &self.classes
    }
}

/// Which Cox variable a ray of `P(E)` corresponds to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RayLabel {
    /// `ẽ_i`, variable `x_{i+1}`
    Base(usize),
    /// `n_j`, variable `y_{j+1}`
    Fiber(usize),
}

/// The fan of `P(E)` in `Ñ = Z^d ⊕ Z^{r-1}` together with the data needed
/// to read it as a bundle over `X`.
///
/// Rays are ordered `ẽ_1, …, ẽ_l, n_1, …, n_r`, with `n_2, …, n_r` the
/// standard basis of the second summand and `n_1 = -(n_2 + … + n_r)`.
#[derive(Clone, Debug)]
pub struct ProjectivizedFan {
    fan: Fan,
    base: Fan,
    base_grading: GradingData,
    bundle: BundleSpec,
    picard: GradingData,
}

impl ProjectivizedFan {
    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn base(&self) -> &Fan {
        &self.base
    }

    pub fn base_grading(&self) -> &GradingData {
        &self.base_grading
    }

    pub fn bundle(&self) -> &BundleSpec {
        &self.bundle
    }

    /// Grading of the Cox ring of `P(E)` by `Cl(X) ⊕ Z`.
    pub fn picard(&self) -> &GradingData {
        &self.picard
    }

    pub fn picard_group(&self) -> &ClassGroup {
        self.picard.class_group()
    }

    pub fn num_base(&self) -> usize {
        self.base.num_rays()
    }

    pub fn num_fiber(&self) -> usize {
        self.bundle.rank()
    }

    pub fn labels(&self) -> Vec<RayLabel> {
        (0..self.num_base()).map(RayLabel::Base).chain((0..self.num_fiber()).map(RayLabel::Fiber)).collect()
    }

    /// Cox variable index of `y_j` (0-based `j`).
    pub fn fiber_var(&self, j: usize) -> usize {
        self.num_base() + j
    }

    pub fn is_fiber_var(&self, v: usize) -> bool {
        v >= self.num_base()
    }

    /// `(β_i, 0)`
    pub fn x_degrees(&self) -> &[ClassElement] {
        &self.picard.variable_degrees()[..self.num_base()]
    }

    /// `(-α_j, 1)`
    pub fn y_degrees(&self) -> &[ClassElement] {
        &self.picard.variable_degrees()[self.num_base()..]
    }

    /// Embeds a base class `α` as `(α, z)`.
    pub fn embed_class(&self, alpha: &ClassElement, z: i64) -> ClassElement {
        let free = self.base_grading.class_group().free_rank();
        let mut v: Vec<BigInt> = alpha.0[..free].to_vec();
        v.push(BigInt::from(z));
        v.extend(alpha.0[free..].iter().cloned());
        ClassElement(v)
    }

    /// Degree `(0, 1)` of `O_{P(E)}(1)`, the degree of every Cayley form.
    pub fn tautological_class(&self) -> ClassElement {
        self.embed_class(&self.base_grading.zero(), 1)
    }
}

/// Builds the fan of `P(E)` and its `Cl(X) ⊕ Z` grading.
///
/// With `h_j(e_i) = -a_{j,i}` the base rays lift to
/// `ẽ_i = (e_i, a_{2,i} - a_{1,i}, …, a_{r,i} - a_{1,i})`, and for every
/// maximal cone σ and every `j` the cone spanned by `{ẽ_i : e_i ∈ σ}` and
/// `{n_k : k ≠ j}` is maximal.
pub fn projectivize(base: &Fan, divisors: Vec<TorusInvariantDivisor>) -> Result<ProjectivizedFan> {
    let base_grading = class_group(base)?;
    let bundle = BundleSpec::with_grading(base, &base_grading, divisors)?;
    let (l, d, r) = (base.num_rays(), base.rank(), bundle.rank());

    let a = |j: usize, i: usize| bundle.divisors()[j].coeffs[i];
    let mut rays: Vec<Vec<i64>> = (0..l)
        .map(|i| {
            let mut v = base.ray(i).to_vec();
            v.extend((1..r).map(|j| a(j, i) - a(0, i)));
            v
        })
        .collect();
    let mut n1 = vec![0; d];
    n1.extend(std::iter::repeat_n(-1, r - 1));
    rays.push(n1);
    for k in 1..r {
        let mut v = vec![0; d + r - 1];
        v[d + k - 1] = 1;
        rays.push(v);
    }

    let mut cones = Vec::with_capacity(base.max_cones().len() * r);
    for sigma in base.max_cones() {
        for j in 0..r {
            let mut c = sigma.clone();
            c.extend((0..r).filter(|&k| k != j).map(|k| l + k));
            cones.push(c);
        }
    }
    let fan = Fan::unchecked(d + r - 1, rays, cones);

    let picard_group = split_picard_group(base_grading.class_group(), bundle.classes());
    let picard = GradingData::new(picard_group, fan.ray_matrix());

    Ok(ProjectivizedFan { fan, base: base.clone(), base_grading, bundle, picard })
}

/// `Cl(X) ⊕ Z` with `x_i ↦ (β_i, 0)` and `y_j ↦ (-α_j, 1)`.
///
/// Coordinates: free part of `Cl(X)`, then the new `Z`, then torsion of `Cl(X)`.
fn split_picard_group(base: &ClassGroup, alphas: &[ClassElement]) -> ClassGroup {
    let l = base.ambient_rank();
    let r = alphas.len();
    let free = base.free_rank();
    let tors = base.torsion().len();
    let c = free + tors;
    let p0 = base.projection();
    let s0 = base.section();

    // Row index in the new coordinates of old coordinate k.
    let new_row = |k: usize| if k < free { k } else { k + 1 };
    let mut proj = Matrix::zeros(c + 1, l + r);
    for k in 0..c {
        for i in 0..l {
            proj[(new_row(k), i)] = p0[(k, i)].clone();
        }
        for (j, alpha) in alphas.iter().enumerate() {
            proj[(new_row(k), l + j)] = -alpha.0[k].clone();
        }
    }
    for j in 0..r {
        proj[(free, l + j)] = BigInt::from(1);
    }

    let mut section = Matrix::zeros(l + r, c + 1);
    for k in 0..c {
        for i in 0..l {
            section[(i, new_row(k))] = s0[(i, k)].clone();
        }
    }
    // (0, 1) lifts to y_1 · (any monomial of degree α_1).
    let lift_alpha1 = s0.mul_vec(&alphas[0].0);
    for i in 0..l {
        section[(i, free)] = lift_alpha1[i].clone();
    }
    section[(l, free)] = BigInt::from(1);

    let torsion = base.torsion().to_vec();
    ClassGroup::from_parts(free + 1, torsion, proj, section)
}
