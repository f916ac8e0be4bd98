//! Demazure roots of graded Cox rings, the Levi/unipotent structure of
//! the graded automorphism group, and the base/fiber split over `P(E)`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::Serialize;

use crate::bundle::ProjectivizedFan;
use crate::divisor::{is_ample, monomials_of_degree};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::grading::{class_group, ClassElement, GradingData};
use crate::poly::VariableNames;
use crate::polyhedra::{integer_points, Row};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootKind {
    Reductive,
    Unipotent,
}

/// The one-parameter subgroup `x_variable ↦ x_variable + t·monomial`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Root {
    pub variable: usize,
    pub monomial: Vec<u32>,
    pub kind: RootKind,
}

impl Root {
    pub fn describe(&self, names: &VariableNames) -> String {
        let x = names.name(self.variable);
        format!("{x} -> {x} + t*{}", names.monomial(&self.monomial))
    }
}

/// All roots, sorted by variable and then monomial.
pub fn enumerate_roots(g: &GradingData, limit: u64) -> Result<Vec<Root>> {
    let mut out = Vec::new();
    for v in 0..g.nvars() {
        for m in monomials_of_degree(g, g.variable_degree(v), limit)? {
            if m[v] > 0 {
                continue;
            }
            let kind = if m.iter().sum::<u32>() == 1 { RootKind::Reductive } else { RootKind::Unipotent };
            out.push(Root { variable: v, monomial: m, kind });
        }
    }
    Ok(out)
}

/// A `GL(multiplicity)` factor of the Levi subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeviBlock {
    pub degree: ClassElement,
    pub multiplicity: usize,
    pub variables: Vec<usize>,
}

/// Variables grouped by exact degree, blocks sorted by degree.
pub fn levi_structure(g: &GradingData) -> Vec<LeviBlock> {
    let mut groups: BTreeMap<&ClassElement, Vec<usize>> = BTreeMap::new();
    for (i, d) in g.variable_degrees().iter().enumerate() {
        groups.entry(d).or_default().push(i);
    }
    groups
        .into_iter()
        .map(|(d, vars)| LeviBlock { degree: d.clone(), multiplicity: vars.len(), variables: vars })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutReport {
    pub levi_blocks: Vec<LeviBlock>,
    pub reductive_root_count: usize,
    pub unipotent_root_count: usize,
    /// `Σ_v dim S_{deg v}`
    pub dim_g: usize,
    pub dim_levi: usize,
    pub dim_torus: usize,
    pub dim_aut0: usize,
    pub dim_unipotent_radical: usize,
}

pub fn aut_report(g: &GradingData, limit: u64) -> Result<AutReport> {
    let roots = enumerate_roots(g, limit)?;
    let levi_blocks = levi_structure(g);
    let mut dim_g = 0;
    for block in &levi_blocks {
        dim_g += block.multiplicity * monomials_of_degree(g, &block.degree, limit)?.len();
    }
    let reductive = roots.iter().filter(|r| r.kind == RootKind::Reductive).count();
    let unipotent = roots.len() - reductive;
    let dim_levi = levi_blocks.iter().map(|b| b.multiplicity * b.multiplicity).sum();
    let dim_torus = g.torus_dimension();
    Ok(AutReport {
        levi_blocks,
        reductive_root_count: reductive,
        unipotent_root_count: unipotent,
        dim_g,
        dim_levi,
        dim_torus,
        dim_aut0: dim_g - dim_torus,
        dim_unipotent_radical: unipotent,
    })
}

/// Roots of the Cox ring of `P(E)`, split into base roots (only
/// `x`-variables) and fiber roots `y_t ↦ y_t + f(x)·y_s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootSplit {
    pub base_roots: Vec<Root>,
    pub fiber_roots: Vec<Root>,
}

impl RootSplit {
    pub fn total(&self) -> usize {
        self.base_roots.len() + self.fiber_roots.len()
    }

    fn unipotent(roots: &[Root]) -> usize {
        roots.iter().filter(|r| r.kind == RootKind::Unipotent).count()
    }

    pub fn base_unipotent(&self) -> usize {
        Self::unipotent(&self.base_roots)
    }

    pub fn fiber_unipotent(&self) -> usize {
        Self::unipotent(&self.fiber_roots)
    }
}

/// Whether a root of `P(E)` only touches `x`-variables.
pub fn is_base_shape(p: &ProjectivizedFan, r: &Root) -> bool {
    let l = p.num_base();
    r.variable < l && r.monomial[l..].iter().all(|&k| k == 0)
}

/// Whether a root of `P(E)` is `y_t ↦ y_t + f(x)·y_s` with `s ≠ t`.
pub fn is_fiber_shape(p: &ProjectivizedFan, r: &Root) -> bool {
    let l = p.num_base();
    let y = &r.monomial[l..];
    p.is_fiber_var(r.variable) && y.iter().sum::<u32>() == 1 && r.monomial[r.variable] == 0
}

pub fn split_roots_of_projectivization(p: &ProjectivizedFan, limit: u64) -> Result<RootSplit> {
    let names = VariableNames::cox(p.num_base(), p.num_fiber());
    let mut split = RootSplit { base_roots: Vec::new(), fiber_roots: Vec::new() };
    for r in enumerate_roots(p.picard(), limit)? {
        match (is_base_shape(p, &r), is_fiber_shape(p, &r)) {
            (true, false) => split.base_roots.push(r),
            (false, true) => split.fiber_roots.push(r),
            _ => {
                return Err(Error::UnsplitRoot {
                    variable: names.name(r.variable).to_string(),
                    monomial: names.monomial(&r.monomial),
                })
            }
        }
    }
    Ok(split)
}

/// A lattice pair `(e_i, m)` with `⟨m, e_i⟩ = -1` and `⟨m, e_j⟩ >= 0`
/// otherwise, matched with the root `x_i ↦ x_i + t·x^a`, `a_j = ⟨m, e_j⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DemazurePair {
    pub ray: usize,
    pub m: Vec<i64>,
    pub monomial: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DemazureReport {
    pub root_count: usize,
    pub lattice_pair_count: usize,
    /// The witness map is injective and hits every enumerated root.
    pub bijective: bool,
    pub witness: Vec<DemazurePair>,
}

/// Compares the monomial roots of a smooth complete fan with Demazure's
/// lattice description.
pub fn demazure_crosscheck(fan: &Fan, limit: u64) -> Result<DemazureReport> {
    fan.ensure_smooth()?;
    let g = class_group(fan)?;
    let roots = enumerate_roots(&g, limit)?;
    let big = |v: i64| BigInt::from(v);
    let mut witness = Vec::new();
    for i in 0..fan.num_rays() {
        let mut rows: Vec<Row> = Vec::new();
        for (j, e) in fan.rays().iter().enumerate() {
            let row: Row = e.iter().map(|&v| big(v)).chain([big(0)]).collect();
            if j == i {
                rows.push(e.iter().map(|&v| big(v)).chain([big(1)]).collect());
                rows.push(e.iter().map(|&v| big(-v)).chain([big(-1)]).collect());
            } else {
                rows.push(row);
            }
        }
        for m in integer_points(fan.rank(), &rows, limit)? {
            let monomial = fan
                .rays()
                .iter()
                .enumerate()
                .map(|(j, e)| {
                    let v: i64 = e.iter().zip(&m).map(|(a, b)| a * b).sum();
                    if j == i {
                        0
                    } else {
                        v as u32
                    }
                })
                .collect();
            witness.push(DemazurePair { ray: i, m, monomial });
        }
    }
    let images: BTreeSet<(usize, &Vec<u32>)> = witness.iter().map(|w| (w.ray, &w.monomial)).collect();
    let root_set: BTreeSet<(usize, &Vec<u32>)> = roots.iter().map(|r| (r.variable, &r.monomial)).collect();
    let bijective = images.len() == witness.len() && images == root_set;
    Ok(DemazureReport { root_count: roots.len(), lattice_pair_count: witness.len(), bijective, witness })
}

/// Inputs of the classical count: projective dimensions of the spaces of
/// sections of each `L_j`, and `dim Aut⁰(X)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassicalInputs {
    pub projective_section_dims: Vec<i64>,
    pub base_aut0_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuliReport {
    /// `dim S_(0,1)`, the space of Cayley forms.
    pub dim_cayley_forms: usize,
    pub dim_g: usize,
    /// `rank Pic(P(E))`
    pub dim_torus: usize,
    pub dim_effective_group: i64,
    pub moduli_dim: i64,
    pub ample: Vec<bool>,
    pub warnings: Vec<String>,
    pub classical: ClassicalInputs,
}

/// `dim S_(0,1) - (dim G - rank Pic(P(E)))` with supporting data.
pub fn moduli_dimension(p: &ProjectivizedFan, limit: u64) -> Result<ModuliReport> {
    let sections = monomials_of_degree(p.picard(), &p.tautological_class(), limit)?.len();
    let aut = aut_report(p.picard(), limit)?;
    let dim_torus = p.picard().torus_dimension();
    let dim_effective_group = aut.dim_g as i64 - dim_torus as i64;
    let moduli_dim = sections as i64 - dim_effective_group;

    let mut warnings = Vec::new();
    let mut ample = Vec::new();
    for (j, d) in p.bundle().divisors().iter().enumerate() {
        let a = is_ample(p.base(), d)?;
        if !a {
            warnings.push(format!("L_{} is not ample", j + 1));
        }
        ample.push(a);
    }
    if moduli_dim <= 0 {
        warnings.push("group acts with positive-dimensional generic stabilizer".into());
    }

    let mut projective_section_dims = Vec::new();
    for alpha in p.bundle().classes() {
        projective_section_dims.push(monomials_of_degree(p.base_grading(), alpha, limit)?.len() as i64 - 1);
    }
    let base_aut0_dim = aut_report(p.base_grading(), limit)?.dim_aut0;

    Ok(ModuliReport {
        dim_cayley_forms: sections,
        dim_g: aut.dim_g,
        dim_torus,
        dim_effective_group,
        moduli_dim,
        ample,
        warnings,
        classical: ClassicalInputs { projective_section_dims, base_aut0_dim },
    })
}
