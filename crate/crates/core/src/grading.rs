//! Class groups and the Cox ring grading.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{cokernel, kernel_basis, Matrix};
use crate::{ClassGroup, IntMatrix};

/// An element of a class group in canonical coordinates (free part, then
/// reduced torsion).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassElement(pub Vec<BigInt>);

impl ClassElement {
    pub fn from_i64(v: &[i64]) -> Self {
        ClassElement(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }
}

impl fmt::Display for ClassElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Accepts `2`, `1,0`, `(1,0)` or `[1, 0]`.
impl FromStr for ClassElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_matches(|c| matches!(c, '(' | ')' | '[' | ']'));
        let coords = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad class group coordinate {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ClassElement(coords))
    }
}

impl Serialize for ClassElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_ints(&self.0, serializer)
    }
}

/// Serializes integers as JSON numbers when they fit in `i64`, strings otherwise.
pub(crate) fn serialize_ints<S: Serializer>(v: &[BigInt], serializer: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = serializer.serialize_seq(Some(v.len()))?;
    for c in v {
        match c.to_i64() {
            Some(x) => seq.serialize_element(&x)?,
            None => seq.serialize_element(&c.to_string())?,
        }
    }
    seq.end()
}

/// A grading of a polynomial ring `k[x_1..x_n]` by an abelian group:
/// the group, the degree map `Z^n -> group`, and a basis of the relation
/// lattice (the kernel of the degree map) used to enumerate graded pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingData {
    class_group: ClassGroup,
    variable_degrees: Vec<ClassElement>,
    /// `n x k`; its columns span the kernel of the degree map.
    relations: IntMatrix,
}

impl GradingData {
    /// Assembles a grading. The columns of `relations` must span the
    /// kernel of the group's projection.
    pub fn new(class_group: ClassGroup, relations: IntMatrix) -> Self {
        assert_eq!(relations.rows(), class_group.ambient_rank());
        let variable_degrees =
            (0..class_group.ambient_rank()).map(|i| ClassElement(class_group.generator_image(i))).collect();
        GradingData { class_group, variable_degrees, relations }
    }

    pub fn class_group(&self) -> &ClassGroup {
        &self.class_group
    }

    /// `φ0`, as a matrix from `Z^n` to canonical coordinates.
    pub fn degree_map(&self) -> &IntMatrix {
        self.class_group.projection()
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn variable_degrees(&self) -> &[ClassElement] {
        &self.variable_degrees
    }

    pub fn variable_degree(&self, i: usize) -> &ClassElement {
        &self.variable_degrees[i]
    }

    pub fn nvars(&self) -> usize {
        self.variable_degrees.len()
    }

    /// Degree of the monomial with the given exponent vector.
    pub fn degree_of(&self, exponents: &[u32]) -> ClassElement {
        let v: Vec<BigInt> = exponents.iter().map(|&e| BigInt::from(e)).collect();
        ClassElement(self.class_group.project(&v))
    }

    /// Degree of an arbitrary integer vector (e.g. a divisor).
    pub fn degree_of_vector(&self, v: &[i64]) -> ClassElement {
        let v: Vec<BigInt> = v.iter().map(|&e| BigInt::from(e)).collect();
        ClassElement(self.class_group.project(&v))
    }

    /// Brings user input into canonical form, checking its length.
    pub fn normalize(&self, alpha: &ClassElement) -> Result<ClassElement> {
        if alpha.0.len() != self.class_group.coords() {
            return Err(Error::Length {
                what: "class group element".into(),
                expected: self.class_group.coords(),
                found: alpha.0.len(),
            });
        }
        let mut v = alpha.0.clone();
        self.class_group.reduce(&mut v);
        Ok(ClassElement(v))
    }

    pub fn add(&self, a: &ClassElement, b: &ClassElement) -> ClassElement {
        ClassElement(self.class_group.add(&a.0, &b.0))
    }

    pub fn neg(&self, a: &ClassElement) -> ClassElement {
        ClassElement(self.class_group.neg(&a.0))
    }

    pub fn sub(&self, a: &ClassElement, b: &ClassElement) -> ClassElement {
        self.add(a, &self.neg(b))
    }

    pub fn zero(&self) -> ClassElement {
        ClassElement(self.class_group.zero())
    }

    /// An integer vector of degree `alpha` (entries may be negative).
    pub fn lift(&self, alpha: &ClassElement) -> Vec<BigInt> {
        self.class_group.lift(&alpha.0)
    }

    /// Rank of the free part, i.e. the dimension of the quotient torus.
    pub fn torus_dimension(&self) -> usize {
        self.class_group.free_rank()
    }

    /// Saturated kernel of the degree map. For a fan it coincides with the
    /// image of `M`.
    pub fn kernel_lattice(&self) -> IntMatrix {
        let n = self.nvars();
        let tors = self.class_group.torsion();
        let k = self.class_group.coords();
        let free = self.class_group.free_rank();
        let mut big = Matrix::zeros(k, n + tors.len());
        let proj = self.class_group.projection();
        for i in 0..k {
            for j in 0..n {
                big[(i, j)] = proj[(i, j)].clone();
            }
        }
        for (t, d) in tors.iter().enumerate() {
            big[(free + t, n + t)] = d.clone();
        }
        let rows: Vec<Vec<BigInt>> = kernel_basis(&big).into_iter().map(|v| v[..n].to_vec()).collect();
        Matrix::from_rows(n, rows)
    }
}

/// `Cl(X) = Z^l / M` for a valid complete fan, with `β_i` the class of
/// the i-th torus-invariant prime divisor.
pub fn class_group(fan: &Fan) -> Result<GradingData> {
    fan.ensure_complete()?;
    let rays = fan.ray_matrix();
    Ok(GradingData::new(cokernel(&rays), rays))
}
