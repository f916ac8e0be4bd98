//! Cayley forms `F = Σ f_j y_j` on `P(E)` and their coefficient tuples.

use crate::bundle::ProjectivizedFan;
use crate::error::{Error, Result};
use crate::grading::{ClassElement, GradingData};
use crate::poly::{Homogeneity, Polynomial, Substitution, VariableNames};
use crate::scalar::Coefficient;

/// `F = Σ f_j y_j` with `f_j` in the base Cox ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyForm<C> {
    coefficients: Vec<Polynomial<C>>,
    form: Polynomial<C>,
}

impl<C: Coefficient> CayleyForm<C> {
    /// `f_1, …, f_r`, polynomials in `x_1..x_l`.
    pub fn coefficients(&self) -> &[Polynomial<C>] {
        &self.coefficients
    }

    /// `F`, a polynomial in `x_1..x_l, y_1..y_r`.
    pub fn form(&self) -> &Polynomial<C> {
        &self.form
    }
}

/// Names `x1..xl, y1..yr` for the Cox variables of `P(E)`.
pub fn cox_names(p: &ProjectivizedFan) -> VariableNames {
    VariableNames::cox(p.num_base(), p.num_fiber())
}

fn degree_label(h: &Homogeneity) -> String {
    match h {
        Homogeneity::Zero => "zero".into(),
        Homogeneity::Homogeneous(d) => d.to_string(),
        Homogeneity::Inhomogeneous => "inhomogeneous".into(),
    }
}

/// Assembles `F = Σ f_j y_j` after checking `deg f_j = α_j`.
///
/// Zero coefficients are accepted in every slot.
pub fn cayley_form<C: Coefficient>(fs: &[Polynomial<C>], p: &ProjectivizedFan) -> Result<CayleyForm<C>> {
    let (l, r) = (p.num_base(), p.num_fiber());
    if fs.len() != r {
        return Err(Error::Length { what: "Cayley form coefficients".into(), expected: r, found: fs.len() });
    }
    let base = p.base_grading();
    for (j, (f, alpha)) in fs.iter().zip(p.bundle().classes()).enumerate() {
        if f.nvars() != l {
            return Err(Error::Length { what: format!("variables of f_{}", j + 1), expected: l, found: f.nvars() });
        }
        if !f.has_degree(base, alpha) {
            return Err(Error::DegreeMismatch {
                index: j + 1,
                expected: alpha.to_string(),
                found: degree_label(&f.homogeneity(base)),
            });
        }
    }
    let n = l + r;
    let embed: Vec<usize> = (0..l).collect();
    let mut form = Polynomial::zero(n);
    for (j, f) in fs.iter().enumerate() {
        let y = Polynomial::variable(n, p.fiber_var(j));
        form = form.add(&f.rename(n, &embed).mul(&y));
    }
    let taut = p.tautological_class();
    if !form.has_degree(p.picard(), &taut) {
        return Err(Error::DegreeMismatch {
            index: 0,
            expected: taut.to_string(),
            found: degree_label(&form.homogeneity(p.picard())),
        });
    }
    Ok(CayleyForm { coefficients: fs.to_vec(), form })
}

/// The unique `(g_1, …, g_r)` with `p = Σ g_j y_j`.
pub fn extract_coefficients<C: Coefficient>(poly: &Polynomial<C>, p: &ProjectivizedFan) -> Result<Vec<Polynomial<C>>> {
    let (l, r) = (p.num_base(), p.num_fiber());
    if poly.nvars() != l + r {
        return Err(Error::Length { what: "Cox variables".into(), expected: l + r, found: poly.nvars() });
    }
    let names = cox_names(p);
    let mut out = vec![Polynomial::zero(l); r];
    for (e, c) in poly.terms() {
        let fiber = &e[l..];
        let ys: u32 = fiber.iter().sum();
        if ys != 1 {
            return Err(Error::NotLinearInFiber { term: names.monomial(e) });
        }
        let j = fiber.iter().position(|&k| k == 1).expect("one fiber variable");
        out[j] = out[j].add(&Polynomial::monomial(e[..l].to_vec(), c.clone()));
    }
    Ok(out)
}

/// `y_t ↦ y_t + h·y_s` for `h` in the base Cox ring of degree `α_s - α_t`.
/// Indices are 0-based.
pub fn fiber_root_substitution<C: Coefficient>(
    p: &ProjectivizedFan,
    t: usize,
    s: usize,
    h: &Polynomial<C>,
) -> Result<Substitution<C>> {
    let (l, r) = (p.num_base(), p.num_fiber());
    assert!(t < r && s < r && t != s, "fiber indices out of range");
    let n = l + r;
    let embed: Vec<usize> = (0..l).collect();
    let addend = h.rename(n, &embed).mul(&Polynomial::variable(n, p.fiber_var(s)));
    let sub = Substitution::elementary(n, p.fiber_var(t), addend);
    Substitution::graded((0..n).map(|i| sub.image(i).clone()).collect(), p.picard())
}

/// Extends a graded substitution of `x_1..x_l` to `P(E)`, fixing every `y_j`.
pub fn base_substitution<C: Coefficient>(p: &ProjectivizedFan, sigma: &Substitution<C>) -> Result<Substitution<C>> {
    let (l, r) = (p.num_base(), p.num_fiber());
    if sigma.nvars() != l {
        return Err(Error::Length { what: "base substitution".into(), expected: l, found: sigma.nvars() });
    }
    let n = l + r;
    let embed: Vec<usize> = (0..l).collect();
    let images =
        (0..n).map(|i| if i < l { sigma.image(i).rename(n, &embed) } else { Polynomial::variable(n, i) }).collect();
    Substitution::graded(images, p.picard())
}

/// True when no `β_j` equals the degree of a Cox variable.
pub fn nondegenerate(beta: &[ClassElement], grading: &GradingData) -> bool {
    beta.iter().all(|b| !grading.variable_degrees().contains(b))
}
