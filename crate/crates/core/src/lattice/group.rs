use super::matrix::Matrix;
use super::normal_form::{hermite_normal_form, smith_normal_form, unimodular_inverse};
use crate::scalar::IntegerScalar;

/// A finitely generated abelian group `Z^free_rank ⊕ ⊕ Z/d_i` together with
/// a surjection from an ambient `Z^k`.
///
/// Coordinates are ordered free part first, then torsion. Torsion
/// coordinates are always reduced into `[0, d_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroupPresentation<T> {
    free_rank: usize,
    torsion: Vec<T>,
    /// `(free_rank + torsion.len()) x k`
    projection: Matrix<T>,
    /// `k x (free_rank + torsion.len())`, a right inverse of `projection`
    /// modulo torsion.
    section: Matrix<T>,
}

impl<T: IntegerScalar> AbelianGroupPresentation<T> {
    /// Assembles a presentation from parts. `section` must satisfy
    /// `projection * section == identity` modulo torsion.
    pub fn from_parts(free_rank: usize, torsion: Vec<T>, projection: Matrix<T>, section: Matrix<T>) -> Self {
        let coords = free_rank + torsion.len();
        assert_eq!(projection.rows(), coords);
        assert_eq!(section.cols(), coords);
        assert_eq!(section.rows(), projection.cols());
        let mut g = AbelianGroupPresentation { free_rank, torsion, projection, section };
        g.reduce_projection();
        g
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[T] {
        &self.torsion
    }

    pub fn projection(&self) -> &Matrix<T> {
        &self.projection
    }

    pub fn section(&self) -> &Matrix<T> {
        &self.section
    }

    /// Number of canonical coordinates.
    pub fn coords(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn ambient_rank(&self) -> usize {
        self.projection.cols()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Reduces torsion coordinates of a group element in place.
    pub fn reduce(&self, elem: &mut [T]) {
        for (k, d) in self.torsion.iter().enumerate() {
            let c = &mut elem[self.free_rank + k];
            *c = c.mod_floor(d);
        }
    }

    pub fn project(&self, v: &[T]) -> Vec<T> {
        let mut out = self.projection.mul_vec(v);
        self.reduce(&mut out);
        out
    }

    /// Some ambient vector mapping to `elem`.
    pub fn lift(&self, elem: &[T]) -> Vec<T> {
        self.section.mul_vec(elem)
    }

    pub fn zero(&self) -> Vec<T> {
        vec![T::zero(); self.coords()]
    }

    pub fn add(&self, a: &[T], b: &[T]) -> Vec<T> {
        let mut out: Vec<T> = a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect();
        self.reduce(&mut out);
        out
    }

    pub fn neg(&self, a: &[T]) -> Vec<T> {
        let mut out: Vec<T> = a.iter().map(|x| -x.clone()).collect();
        self.reduce(&mut out);
        out
    }

    /// Image of the ambient standard basis vector `e_i`.
    pub fn generator_image(&self, i: usize) -> Vec<T> {
        let mut out = self.projection.column(i);
        self.reduce(&mut out);
        out
    }

    fn reduce_projection(&mut self) {
        for (k, d) in self.torsion.iter().enumerate() {
            let r = self.free_rank + k;
            for j in 0..self.projection.cols() {
                self.projection[(r, j)] = self.projection[(r, j)].mod_floor(d);
            }
        }
    }
}

/// Presentation of `Z^rows / image(a)`.
///
/// The free coordinates are put in Hermite form, so the presentation does
/// not depend on pivoting choices made inside the Smith reduction: for
/// projective space every generator maps to `1`, for a weighted projective
/// space to its weights.
pub fn cokernel<T: IntegerScalar>(a: &Matrix<T>) -> AbelianGroupPresentation<T> {
    let m = a.rows();
    let snf = smith_normal_form(a);
    let factors = snf.invariant_factors();

    let free_idx: Vec<usize> = (snf.rank..m).collect();
    let tors_idx: Vec<usize> = (0..snf.rank).filter(|&i| !factors[i].is_one()).collect();
    let torsion: Vec<T> = tors_idx.iter().map(|&i| factors[i].clone()).collect();

    let free_rows = snf.u.select_rows(&free_idx);
    let hf = hermite_normal_form(&free_rows);
    let free_proj = hf.h;
    let g_inv = unimodular_inverse(&hf.t);

    let free_section = snf.u_inv.select_cols(&free_idx).mul(&g_inv);
    let tors_proj = snf.u.select_rows(&tors_idx);
    let tors_section = snf.u_inv.select_cols(&tors_idx);

    let projection = free_proj.vstack(&tors_proj);
    let section = free_section.hstack(&tors_section);
    AbelianGroupPresentation::from_parts(free_idx.len(), torsion, projection, section)
}
