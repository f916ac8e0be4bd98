//! Sparse multivariate polynomials with exact coefficients, graded
//! substitutions, and the text format `c * x1^a1 ... yr^br`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::grading::{ClassElement, GradingData};
use crate::scalar::Coefficient;

pub type Exponent = Vec<u32>;

/// Sparse polynomial in a fixed number of variables. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial<C> {
    nvars: usize,
    terms: BTreeMap<Exponent, C>,
}

/// How a polynomial sits in a grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Homogeneous(ClassElement),
    Inhomogeneous,
}

impl<C: Coefficient> Polynomial<C> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn monomial(exponent: Exponent, c: C) -> Self {
        let nvars = exponent.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponent, c);
        }
        Polynomial { nvars, terms }
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, C::one())
    }

    /// Sums the given terms, merging repeated exponents.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, C)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lexicographic order of exponents.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &[u32]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&(-C::one()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c.clone() * k.clone())).collect();
        Polynomial { nvars: self.nvars, terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Largest total degree of a term; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn homogeneity(&self, grading: &GradingData) -> Homogeneity {
        assert_eq!(self.nvars, grading.nvars());
        let mut degrees = self.terms.keys().map(|e| grading.degree_of(e));
        let Some(first) = degrees.next() else {
            return Homogeneity::Zero;
        };
        if degrees.all(|d| d == first) {
            Homogeneity::Homogeneous(first)
        } else {
            Homogeneity::Inhomogeneous
        }
    }

    /// True when the polynomial is zero or homogeneous of degree `alpha`.
    pub fn has_degree(&self, grading: &GradingData, alpha: &ClassElement) -> bool {
        match self.homogeneity(grading) {
            Homogeneity::Zero => true,
            Homogeneity::Homogeneous(d) => &d == alpha,
            Homogeneity::Inhomogeneous => false,
        }
    }

    /// Re-embeds into `nvars` variables, sending variable `i` to `map[i]`.
    pub fn rename(&self, nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars);
        let terms = self.terms.iter().map(|(e, c)| {
            let mut ne = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                ne[map[i]] += k;
            }
            (ne, c.clone())
        });
        Self::from_terms(nvars, terms)
    }

    /// Keeps only variables `range`, requiring every other exponent to be zero.
    pub fn restrict(&self, keep: std::ops::Range<usize>) -> Option<Self> {
        let n = keep.len();
        let mut out = Self::zero(n);
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(i, &k)| k != 0 && !keep.contains(&i)) {
                return None;
            }
            out.add_term(e[keep.clone()].to_vec(), c.clone());
        }
        Some(out)
    }

    pub fn display<'a>(&'a self, names: &'a VariableNames) -> impl fmt::Display + 'a {
        DisplayPoly { p: self, names }
    }
}

/// A ring endomorphism of `k[x_1..x_n]` given by the image of each variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution<C> {
    images: Vec<Polynomial<C>>,
}

impl<C: Coefficient> Substitution<C> {
    pub fn identity(nvars: usize) -> Self {
        Substitution { images: (0..nvars).map(|i| Polynomial::variable(nvars, i)).collect() }
    }

    /// Unchecked substitution.
    pub fn new(images: Vec<Polynomial<C>>) -> Self {
        let n = images.len();
        assert!(images.iter().all(|p| p.nvars() == n));
        Substitution { images }
    }

    /// A degree-preserving substitution: each image must be zero or
    /// homogeneous of its variable's degree.
    pub fn graded(images: Vec<Polynomial<C>>, grading: &GradingData) -> Result<Self> {
        if images.len() != grading.nvars() {
            return Err(Error::Length { what: "substitution".into(), expected: grading.nvars(), found: images.len() });
        }
        for (i, p) in images.iter().enumerate() {
            if p.nvars() != grading.nvars() || !p.has_degree(grading, grading.variable_degree(i)) {
                return Err(Error::NotGraded { index: i });
            }
        }
        Ok(Substitution { images })
    }

    /// `x_var ↦ x_var + t·m`, identity on the other variables.
    pub fn elementary(nvars: usize, var: usize, addend: Polynomial<C>) -> Self {
        let mut s = Self::identity(nvars);
        s.images[var] = s.images[var].add(&addend);
        s
    }

    pub fn image(&self, i: usize) -> &Polynomial<C> {
        &self.images[i]
    }

    pub fn nvars(&self) -> usize {
        self.images.len()
    }

    /// Replaces every variable by its image and expands.
    pub fn apply(&self, p: &Polynomial<C>) -> Polynomial<C> {
        assert_eq!(p.nvars(), self.nvars());
        let n = self.nvars();
        let mut powers: Vec<Vec<Polynomial<C>>> = vec![vec![Polynomial::one(n)]; n];
        let mut out = Polynomial::zero(n);
        for (e, c) in p.terms() {
            let mut term = Polynomial::constant(n, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&self.images[i]);
                    powers[i].push(next);
                }
                if k > 0 {
                    term = term.mul(&powers[i][k as usize]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        Substitution { images: other.images.iter().map(|p| self.apply(p)).collect() }
    }
}

/// Names for Cox variables: `x1..xl` then `y1..yr`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableNames {
    names: Vec<String>,
}

impl VariableNames {
    pub fn cox(num_base: usize, num_fiber: usize) -> Self {
        let names = (1..=num_base).map(|i| format!("x{i}")).chain((1..=num_fiber).map(|j| format!("y{j}"))).collect();
        VariableNames { names }
    }

    pub fn custom(names: Vec<String>) -> Self {
        VariableNames { names }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `x1^2*x3`, or `1` for the empty monomial.
    pub fn monomial(&self, e: &[u32]) -> String {
        let parts: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|&(_, &k)| k > 0)
            .map(|(i, &k)| if k == 1 { self.names[i].clone() } else { format!("{}^{k}", self.names[i]) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

struct DisplayPoly<'a, C> {
    p: &'a Polynomial<C>,
    names: &'a VariableNames,
}

impl<C: Coefficient> fmt::Display for DisplayPoly<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return write!(f, "0");
        }
        // Highest exponent first.
        for (k, (e, c)) in self.p.terms().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let constant = e.iter().all(|&x| x == 0);
            if constant {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", self.names.monomial(e))?;
            } else {
                write!(f, "{abs}*{}", self.names.monomial(e))?;
            }
        }
        Ok(())
    }
}

pub type QPolynomial = Polynomial<BigRational>;

/// Parses the polynomial text format over Q.
///
/// Terms are products of rational constants (`3`, `-2/5`), variables with
/// optional exponents (`x1^2`, `y2**3`) and parenthesised subexpressions,
/// joined by `+` and `-`. Whitespace is ignored; `*` may be omitted
/// between a coefficient and a variable separated by spaces.
pub fn parse_polynomial(src: &str, names: &VariableNames) -> Result<QPolynomial> {
    let mut p = Parser { src, pos: 0, names };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    names: &'a VariableNames,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at column {} in {:?}", self.pos + 1, self.src))
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn n(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<QPolynomial> {
        let mut acc = QPolynomial::zero(self.n());
        let mut first = true;
        loop {
            let sign = if self.eat("+") {
                1
            } else if self.eat("-") {
                -1
            } else if first {
                1
            } else {
                break;
            };
            first = false;
            let t = self.term()?;
            acc = if sign > 0 { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<QPolynomial> {
        let mut acc = self.power()?;
        loop {
            self.skip_ws();
            if self.src[self.pos..].starts_with("**") {
                return Err(self.error("misplaced exponent"));
            }
            if self.eat("*") || self.peek().is_some_and(|c| c.is_alphanumeric() || c == '(') {
                acc = acc.mul(&self.power()?);
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<QPolynomial> {
        let base = self.atom()?;
        if self.eat("**") || self.eat("^") {
            self.skip_ws();
            let k = self.uint()?;
            let k = u32::try_from(k).map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        Ok(self.src[start..self.pos].parse().expect("digits"))
    }

    fn atom(&mut self) -> Result<QPolynomial> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(")") {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.uint()?;
                let den = if self.eat("/") { self.uint()? } else { BigInt::one() };
                if den.is_zero() {
                    return Err(self.error("zero denominator"));
                }
                Ok(QPolynomial::constant(self.n(), BigRational::new(num, den)))
            }
            Some('-') => {
                self.pos += 1;
                Ok(self.power()?.neg())
            }
            Some(c) if c.is_alphabetic() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                match self.names.index(name) {
                    Some(i) => Ok(QPolynomial::variable(self.n(), i)),
                    None => {
                        self.pos = start;
                        Err(self.error(&format!("unknown variable {name:?}")))
                    }
                }
            }
            _ => Err(self.error("expected a term")),
        }
    }
}
